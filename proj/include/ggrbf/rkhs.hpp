#pragma once

#include <complex>
#include <map>
#include <vector>

#include "ggrbf/kernels.hpp"

namespace ggrbf {

using Complex = std::complex<double>;
using ComplexPoint = std::vector<Complex>;
using MultiIndex = std::vector<unsigned>;

/// Constant convention for the weighted monomial moments.
///
/// The radial substitution u = r^2 contributes a factor 1/2 that the
/// printed derivation drops, so the printed pair (2*pi moment prefactor,
/// (e sigma^2 / 2 pi)^d normalization) disagrees with direct quadrature by
/// a factor 2^d in each piece.  The two errors cancel in every ratio, so
/// basis coefficients and kernel weights are identical under both
/// conventions; `corrected` is what quadrature confirms.
enum class ConstantConvention { corrected, printed };

/// Finitely supported power series sum a_n z^n over multi-indices n.
struct MonomialSeries {
  unsigned dimension = 1;
  std::map<MultiIndex, Complex> coefficients;

  Complex eval(const ComplexPoint& z) const;
  unsigned degree() const;
};

/// Normalization constant of the inner product: (e sigma^2 / pi)^d under
/// the corrected convention.
double normalization_constant(const KernelParams& params, unsigned d,
                              ConstantConvention c = ConstantConvention::corrected);

/// Weighted monomial moment  integral_C z^n conj(z)^m dmu(z).
/// Zero when n != m; pi n! S(n, sigma_hat) / (e sigma^(2n+2)) when n == m
/// (corrected convention).
double moment(unsigned n, unsigned m, const KernelParams& params,
              ConstantConvention c = ConstantConvention::corrected);

/// Coefficient of the orthonormal basis element e_n(z) = c_n z^n in one
/// complex variable: c_n = sqrt(sigma^(2n) / (n! S(n, sigma_hat))).
double onb_coeff(unsigned n, const KernelParams& params);

/// Tensor-product basis element evaluated at z.
Complex onb_eval(const MultiIndex& n, const ComplexPoint& z,
                 const KernelParams& params);

/// Kernel series weight lambda_n = prod_i sigma^(2 n_i) / (n_i! S(n_i, .)),
/// the square of the product of onb_coeff values.
double lambda_weight(const MultiIndex& n, const KernelParams& params);

/// Reproducing kernel K(z, w) = sum_n lambda_n (z conj(w))^n, evaluated as
/// a product of one-dimensional series with a rigorous exp-tail cutoff.
Complex rk_eval(const ComplexPoint& z, const ComplexPoint& w,
                const KernelParams& params, double rel_tol = 1e-12);

/// Inner product of two monomial series, evaluated analytically through
/// moment orthogonality (no quadrature).
Complex inner_product(const MonomialSeries& f, const MonomialSeries& g,
                      const KernelParams& params);

/// Squared norm ||f||^2 = <f, f> (real part; the analytic value is real).
double norm_squared(const MonomialSeries& f, const KernelParams& params);

/// | <f, K(.,w)> - f(w) |, the reproducing-property defect.
double reproducing_residual(const MonomialSeries& f, const ComplexPoint& w,
                            const KernelParams& params);

/// Axis-aligned rectangle in one complex coordinate.
struct ComplexRectangle {
  double re_lo = 0.0, re_hi = 0.0, im_lo = 0.0, im_hi = 0.0;
};
using ComplexBox = std::vector<ComplexRectangle>;

/// Point-evaluation constant c with |f(z)| <= c ||f|| for all z in the box:
/// sqrt(1 / (w_min (e sigma^2)^d)) where w_min is the minimum of the
/// measure weight over the box inflated by the unit polydisk.  The weight
/// is radially decreasing, so the minimum sits at the point of largest
/// modulus in the inflated box and is evaluated exactly.  (A sup-of-weight
/// variant of this constant fails the bound already at f = K(.,0), z = 0;
/// the weight enters the chain through its reciprocal.)
double eval_bound_constant(const ComplexBox& box, const KernelParams& params);

}  // namespace ggrbf
