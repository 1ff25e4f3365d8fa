#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <mutex>
#include <stdexcept>

namespace ggrbf {

/// Rising factorial (a)_k = a (a+1) ... (a+k-1), with (a)_0 = 1.
double pochhammer(double a, unsigned k);

/// S(n, s) = sum_{l>=0} 1 / ( l! (1 + l s)^(n+1) ) for s >= 0.
///
/// This is the coefficient series behind every basis normalization in the
/// toolkit.  Bounds: 1 <= S(n, s) <= e, with S(n, 0) = e for every n.
/// Truncation stops once the next term drops below tail_tol times the
/// running sum; since the terms decay at least factorially the discarded
/// remainder is bounded by the last term kept.
double hyper_sum_S(unsigned n, double sigma_hat, double tail_tol = 1e-14);

/// F(n, x) = x^(n+1) * sum_{l>=0} 1 / ( (l+x)^(n+1) l! ) for x > 0.
///
/// Related to hyper_sum_S by the reciprocal identity F(n, 1/s) = S(n, s),
/// and F(n, x) -> e as x -> infinity.
double hyper_f_nx1(unsigned n, double x, double tail_tol = 1e-14);

/// Memoized S(n, sigma_hat) values for one fixed sigma_hat.
/// Thread-safe: each order is computed at most once per instance.
class HyperSum {
 public:
  explicit HyperSum(double sigma_hat, double tail_tol = 1e-14);

  double sigma_hat() const { return sigma_hat_; }
  double tail_tol() const { return tail_tol_; }

  double value(unsigned n) const;

 private:
  double sigma_hat_;
  double tail_tol_;
  mutable std::mutex mutex_;
  mutable std::map<unsigned, double> cache_;
};

struct QuadratureResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  std::size_t evaluations = 0;
};

struct QuadratureOptions {
  double rel_tol = 1e-10;
  std::size_t max_evaluations = 1000000;
};

/// Thrown when the evaluation budget is exhausted before the requested
/// tolerance is met.
class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Adaptive integration of f over [0, inf).
///
/// Gauss-Kronrod 15(7) panels, globally refined; the upper limit grows in
/// doubling blocks until two consecutive blocks contribute less than
/// rel_tol times the accumulated value.  Intended for integrands with a
/// Gaussian-type envelope; the tail cut is included in the error estimate.
QuadratureResult quad_semi_infinite(const std::function<double(double)>& f,
                                    const QuadratureOptions& opts = {});
QuadratureResult quad_semi_infinite(const std::function<double(double)>& f,
                                    double rel_tol);

/// Adaptive integration of f over (-inf, inf): the symmetric composition of
/// two semi-infinite quadratures.
QuadratureResult quad_real_line(const std::function<double(double)>& f,
                                const QuadratureOptions& opts = {});
QuadratureResult quad_real_line(const std::function<double(double)>& f,
                                double rel_tol);

}  // namespace ggrbf
