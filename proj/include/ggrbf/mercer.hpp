#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace ggrbf {

/// One term of a Mercer expansion k(x,z) = sum_i lambda_i phi_i(x) phi_i(z).
struct MercerEigenpair {
  unsigned index = 0;
  double eigenvalue = 0.0;
  std::function<double(double)> eigenfunction;
};

/// Quadrature nodes/weights; weights may or may not include a density,
/// depending on how the grid was built.
struct QuadratureGrid {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule with n points mapped to [lo, hi] (Golub-Welsch).
QuadratureGrid gauss_legendre_grid(std::size_t n, double lo, double hi);

/// Closed-form Gaussian-kernel eigenpair as printed in the source formulas
/// (including their questionable prefactor and denominator; the Nystrom
/// oracle is the ground truth these are compared against).
MercerEigenpair mercer_gaussian_pair(unsigned i, double alpha, double sigma);

/// Eigenvalue ratio Lambda_{i+1}/Lambda_i of the closed form above
/// (independent of i).
double mercer_gaussian_ratio(double alpha, double sigma);

/// Nystrom discretization of the kernel integral operator against
/// weight(x) dx on the given base grid: eigen-decomposition of
/// W^{1/2} K W^{1/2} with W_i = grid.weights[i] * weight(nodes[i]),
/// returning the top `count` pairs with Nystrom-extended eigenfunctions.
std::vector<MercerEigenpair> nystrom_eig(
    const std::function<double(double, double)>& kernel,
    const std::function<double(double)>& weight, const QuadratureGrid& grid,
    unsigned count);

/// Truncated reconstruction sum_{i<count} lambda_i phi_i(x) phi_i(z).
double mercer_reconstruct(double x, double z,
                          const std::vector<MercerEigenpair>& pairs,
                          unsigned count);

/// (max_index+1)^2 table of weighted real-line inner products
/// integral f_n(x) f_m(x) weight(x) dx, by adaptive quadrature.
std::vector<std::vector<double>> orthonormality_gram(
    const std::function<double(unsigned, double)>& family,
    const std::function<double(double)>& weight, unsigned max_index,
    double rel_tol = 1e-10);

}  // namespace ggrbf
