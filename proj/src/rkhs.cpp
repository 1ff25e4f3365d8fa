#include "ggrbf/rkhs.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ggrbf/special_fn.hpp"

namespace ggrbf {

namespace {

constexpr double kE = std::numbers::e;
constexpr double kPi = std::numbers::pi;

// n! as a double; exact for n <= 22, accurately rounded beyond.
double factorial(unsigned n) {
  double f = 1.0;
  for (unsigned i = 2; i <= n; ++i) f *= i;
  return f;
}

void check_dimension(const MultiIndex& n, const ComplexPoint& z) {
  if (n.size() != z.size())
    throw std::invalid_argument("rkhs: multi-index and point dimensions differ");
}

}  // namespace

Complex MonomialSeries::eval(const ComplexPoint& z) const {
  if (z.size() != dimension)
    throw std::invalid_argument("MonomialSeries::eval: dimension mismatch");
  Complex sum = 0.0;
  for (const auto& [idx, coeff] : coefficients) {
    Complex mono = 1.0;
    for (unsigned i = 0; i < dimension; ++i)
      for (unsigned k = 0; k < idx[i]; ++k) mono *= z[i];
    sum += coeff * mono;
  }
  return sum;
}

unsigned MonomialSeries::degree() const {
  unsigned deg = 0;
  for (const auto& [idx, coeff] : coefficients) {
    unsigned total = 0;
    for (unsigned e : idx) total += e;
    deg = std::max(deg, total);
  }
  return deg;
}

double normalization_constant(const KernelParams& params, unsigned d,
                              ConstantConvention c) {
  params.validate();
  const double denom = c == ConstantConvention::corrected ? kPi : 2.0 * kPi;
  return std::pow(kE * params.sigma * params.sigma / denom, static_cast<double>(d));
}

double moment(unsigned n, unsigned m, const KernelParams& params,
              ConstantConvention c) {
  params.validate();
  if (n != m) return 0.0;  // the angular integral of e^{i(n-m)theta} vanishes
  const double prefactor = c == ConstantConvention::corrected ? kPi : 2.0 * kPi;
  const double S = hyper_sum_S(n, params.sigma_hat());
  return prefactor * factorial(n) * S /
         (kE * std::pow(params.sigma, 2.0 * n + 2.0));
}

double onb_coeff(unsigned n, const KernelParams& params) {
  params.validate();
  const double S = hyper_sum_S(n, params.sigma_hat());
  if (n > 150) {
    // log domain: sigma^(2n)/n! overflows or underflows well before n=1000
    const double log_val = 2.0 * n * std::log(params.sigma) -
                           std::lgamma(static_cast<double>(n) + 1.0) - std::log(S);
    return std::exp(0.5 * log_val);
  }
  return std::sqrt(std::pow(params.sigma, 2.0 * n) / (factorial(n) * S));
}

Complex onb_eval(const MultiIndex& n, const ComplexPoint& z,
                 const KernelParams& params) {
  check_dimension(n, z);
  Complex value = 1.0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    Complex mono = 1.0;
    for (unsigned k = 0; k < n[i]; ++k) mono *= z[i];
    value *= onb_coeff(n[i], params) * mono;
  }
  return value;
}

double lambda_weight(const MultiIndex& n, const KernelParams& params) {
  params.validate();
  double value = 1.0;
  for (unsigned ni : n) {
    const double S = hyper_sum_S(ni, params.sigma_hat());
    if (ni > 150) {
      value *= std::exp(2.0 * ni * std::log(params.sigma) -
                        std::lgamma(static_cast<double>(ni) + 1.0) - std::log(S));
    } else {
      value *= std::pow(params.sigma, 2.0 * ni) / (factorial(ni) * S);
    }
  }
  return value;
}

namespace {

// One-dimensional kernel series sum_n sigma^(2n) t^n / (n! S(n)).  The
// weights satisfy S >= 1, so the tail after N is dominated by the exp
// series tail sum_{k>N} (sigma^2 |t|)^k / k!.
Complex rk_series_1d(Complex t, const KernelParams& params, double rel_tol) {
  const double sigma2 = params.sigma * params.sigma;
  const HyperSum table(params.sigma_hat());
  const double q = sigma2 * std::abs(t);

  Complex sum = 0.0;
  Complex power = 1.0;       // (sigma^2 t)^n
  double inv_fact = 1.0;     // 1/n!
  double power_abs = 1.0;    // q^n
  const unsigned kMaxTerms = 10000;
  for (unsigned n = 0; n < kMaxTerms; ++n) {
    if (n > 0) {
      power *= sigma2 * t;
      power_abs *= q;
      inv_fact /= n;
    }
    sum += power * inv_fact / table.value(n);
    // Rigorous exp-tail majorant: valid once q/(n+2) < 1.
    const double next = power_abs * inv_fact * q / (n + 1.0);
    if (q < n + 2.0) {
      const double tail = next / (1.0 - q / (n + 2.0));
      if (tail <= rel_tol * std::max(std::abs(sum), 1e-300)) return sum;
    }
  }
  throw std::runtime_error("rk_eval: series did not reach tolerance in 10^4 terms");
}

}  // namespace

Complex rk_eval(const ComplexPoint& z, const ComplexPoint& w,
                const KernelParams& params, double rel_tol) {
  if (z.size() != w.size())
    throw std::invalid_argument("rk_eval: point dimensions differ");
  params.validate();
  Complex value = 1.0;
  for (std::size_t i = 0; i < z.size(); ++i)
    value *= rk_series_1d(z[i] * std::conj(w[i]), params, rel_tol);
  return value;
}

namespace {

// N_1 * moment(n, n): the per-coordinate normalization-weighted moment.
// Equal under both constant conventions (the factor 2 cancels).
double weighted_moment(unsigned n, const KernelParams& params) {
  return normalization_constant(params, 1) * moment(n, n, params);
}

}  // namespace

Complex inner_product(const MonomialSeries& f, const MonomialSeries& g,
                      const KernelParams& params) {
  if (f.dimension != g.dimension)
    throw std::invalid_argument("inner_product: dimensions differ");
  params.validate();
  Complex sum = 0.0;
  for (const auto& [idx, a] : f.coefficients) {
    const auto it = g.coefficients.find(idx);
    if (it == g.coefficients.end()) continue;  // moment orthogonality
    double factor = 1.0;
    for (unsigned ni : idx) factor *= weighted_moment(ni, params);
    sum += a * std::conj(it->second) * factor;
  }
  return sum;
}

double norm_squared(const MonomialSeries& f, const KernelParams& params) {
  return inner_product(f, f, params).real();
}

double reproducing_residual(const MonomialSeries& f, const ComplexPoint& w,
                            const KernelParams& params) {
  if (w.size() != f.dimension)
    throw std::invalid_argument("reproducing_residual: dimension mismatch");
  params.validate();

  // <f, K(.,w)> via moments: K(.,w) has coefficients lambda_n conj(w)^n,
  // so each term contributes a_n lambda_n w^n (N moment_n).
  Complex inner = 0.0;
  for (const auto& [idx, a] : f.coefficients) {
    Complex wpow = 1.0;
    for (unsigned i = 0; i < f.dimension; ++i)
      for (unsigned k = 0; k < idx[i]; ++k) wpow *= w[i];
    double factor = lambda_weight(idx, params);
    for (unsigned ni : idx) factor *= weighted_moment(ni, params);
    inner += a * wpow * factor;
  }
  return std::abs(inner - f.eval(w));
}

double eval_bound_constant(const ComplexBox& box, const KernelParams& params) {
  if (box.empty()) throw std::invalid_argument("eval_bound_constant: empty box");
  params.validate();

  // Sub-mean-value bound: |f(z)|^2 <= pi^-d int_{z+B} |f|^2 dV, and the
  // measure weight is bounded below on the inflated box by its value at
  // the point of maximal modulus (the weight is radially decreasing).
  // Chaining the two gives |f(z)|^2 <= ||f||^2 / (w_min (e sigma^2)^d).
  double r2 = 0.0;
  for (const auto& rect : box) {
    if (rect.re_lo > rect.re_hi || rect.im_lo > rect.im_hi)
      throw std::invalid_argument("eval_bound_constant: degenerate rectangle");
    const double re = std::max(std::abs(rect.re_lo), std::abs(rect.re_hi));
    const double im = std::max(std::abs(rect.im_lo), std::abs(rect.im_hi));
    const double far = std::hypot(re, im) + 1.0;  // unit-polydisk inflation
    r2 += far * far;
  }

  const double s2 = params.sigma * params.sigma;
  const double s02 = params.sigma0 * params.sigma0;
  const double weight_min = std::exp(-s2 * r2) * std::exp(std::exp(-s02 * r2) - 1.0);
  const double d = static_cast<double>(box.size());
  return std::sqrt(1.0 / (weight_min * std::pow(kE * s2, d)));
}

}  // namespace ggrbf
