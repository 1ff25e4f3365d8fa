#include "ggrbf/special_fn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>
#include <vector>

namespace ggrbf {

double pochhammer(double a, unsigned k) {
  double p = 1.0;
  for (unsigned i = 0; i < k; ++i) p *= a + static_cast<double>(i);
  return p;
}

namespace {

// Compensated (Kahan) accumulator in extended precision.
struct KahanSum {
  long double sum = 0.0L;
  long double comp = 0.0L;
  void add(long double term) {
    const long double y = term - comp;
    const long double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

}  // namespace

double hyper_sum_S(unsigned n, double sigma_hat, double tail_tol) {
  if (!(sigma_hat >= 0.0))
    throw std::domain_error("hyper_sum_S: sigma_hat must be >= 0");

  KahanSum acc;
  long double inv_fact = 1.0L;  // 1/l!
  const long double s = sigma_hat;
  for (unsigned l = 0; l < 512; ++l) {
    if (l > 0) inv_fact /= static_cast<long double>(l);
    const long double base = 1.0L + static_cast<long double>(l) * s;
    const long double term =
        inv_fact / powl(base, static_cast<long double>(n) + 1.0L);
    acc.add(term);
    // Successive terms shrink by at least 1/(l+1), so once l >= 1 the
    // remainder is bounded by the term just added.
    if (l >= 1 && term < static_cast<long double>(tail_tol) * acc.sum) break;
  }
  return static_cast<double>(acc.sum);
}

double hyper_f_nx1(unsigned n, double x, double tail_tol) {
  if (!(x > 0.0)) throw std::domain_error("hyper_f_nx1: x must be > 0");

  // Fold the x^(n+1) prefactor into each term as (x/(l+x))^(n+1); every
  // term is then <= 1/l! regardless of the magnitude of x.
  KahanSum acc;
  long double inv_fact = 1.0L;
  const long double xl = x;
  for (unsigned l = 0; l < 512; ++l) {
    if (l > 0) inv_fact /= static_cast<long double>(l);
    const long double ratio = xl / (static_cast<long double>(l) + xl);
    const long double term =
        inv_fact * powl(ratio, static_cast<long double>(n) + 1.0L);
    acc.add(term);
    if (l >= 1 && term < static_cast<long double>(tail_tol) * acc.sum) break;
  }
  return static_cast<double>(acc.sum);
}

HyperSum::HyperSum(double sigma_hat, double tail_tol)
    : sigma_hat_(sigma_hat), tail_tol_(tail_tol) {
  if (!(sigma_hat >= 0.0))
    throw std::domain_error("HyperSum: sigma_hat must be >= 0");
}

double HyperSum::value(unsigned n) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = cache_.find(n);
  if (it != cache_.end()) return it->second;
  const double v = hyper_sum_S(n, sigma_hat_, tail_tol_);
  cache_.emplace(n, v);
  return v;
}

namespace {

// Gauss-Kronrod 15(7) nodes and weights (positive half), QUADPACK values.
// The embedded 7-point Gauss rule lives on nodes 1, 3, 5 and the midpoint.
constexpr double kGK15Nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double kGK15Weights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr double kG7Weights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Segment {
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;
  double error = 0.0;
};

Segment gk15(const std::function<double(double)>& f, double a, double b,
             std::size_t& evaluations) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double kronrod = 0.0;
  double gauss = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double dx = half * kGK15Nodes[i];
    double fsum;
    if (i == 7) {
      fsum = f(mid);
      evaluations += 1;
    } else {
      fsum = f(mid - dx) + f(mid + dx);
      evaluations += 2;
    }
    kronrod += kGK15Weights[i] * fsum;
    if (i == 1 || i == 3 || i == 5)
      gauss += kG7Weights[i / 2] * fsum;
    else if (i == 7)
      gauss += kG7Weights[3] * fsum;
  }
  Segment s;
  s.a = a;
  s.b = b;
  s.value = half * kronrod;
  s.error = std::abs(half * (kronrod - gauss));
  return s;
}

// Globally adaptive refinement: bisect the worst segment until the summed
// panel error is below rel_tol of the integral, or the budget runs out.
// The tolerance is taken relative to the panels' L1 mass, which equals the
// integral for sign-definite integrands and keeps the target reachable
// when cancellation drives the integral itself to zero.
QuadratureResult refine(const std::function<double(double)>& f,
                        std::vector<Segment> segments, double tail_error,
                        const QuadratureOptions& opts,
                        std::size_t evaluations) {
  const auto total = [&segments]() {
    double v = 0.0, e = 0.0, mass = 0.0;
    for (const auto& s : segments) {
      v += s.value;
      e += s.error;
      mass += std::abs(s.value);
    }
    return std::tuple<double, double, double>(v, e, mass);
  };

  auto [value, error, mass] = total();
  while (error > opts.rel_tol *
                     std::max(mass, std::numeric_limits<double>::min())) {
    auto worst = std::max_element(segments.begin(), segments.end(),
                                  [](const Segment& lhs, const Segment& rhs) {
                                    return lhs.error < rhs.error;
                                  });
    if (worst == segments.end()) break;
    const Segment seg = *worst;
    const double mid = 0.5 * (seg.a + seg.b);
    if (mid <= seg.a || mid >= seg.b)
      break;  // interval at rounding resolution; accept what we have
    if (evaluations + 30 > opts.max_evaluations)
      throw QuadratureError("quadrature: evaluation budget exhausted");
    *worst = gk15(f, seg.a, mid, evaluations);
    segments.push_back(gk15(f, mid, seg.b, evaluations));
    std::tie(value, error, mass) = total();
  }

  QuadratureResult r;
  r.value = value;
  r.abs_error_estimate = error + tail_error;
  r.evaluations = evaluations;
  return r;
}

}  // namespace

QuadratureResult quad_semi_infinite(const std::function<double(double)>& f,
                                    const QuadratureOptions& opts) {
  std::size_t evaluations = 0;
  std::vector<Segment> segments;
  double accumulated = 0.0;

  // Doubling blocks [0,1], [1,2], [2,4], ... with a two-block tail rule.
  double lo = 0.0;
  double hi = 1.0;
  int consecutive_negligible = 0;
  double tail_error = 0.0;
  const double kMinUpper = 32.0;  // do not cut before the envelope scale is visible
  const int kMaxBlocks = 64;
  for (int block = 0; block < kMaxBlocks; ++block) {
    if (evaluations + 15 > opts.max_evaluations)
      throw QuadratureError("quad_semi_infinite: evaluation budget exhausted");
    Segment s = gk15(f, lo, hi, evaluations);
    segments.push_back(s);
    accumulated += s.value;
    const double scale =
        std::max(std::abs(accumulated), std::numeric_limits<double>::min());
    const bool negligible = std::abs(s.value) + s.error <= opts.rel_tol * scale;
    consecutive_negligible = negligible ? consecutive_negligible + 1 : 0;
    if (hi >= kMinUpper && consecutive_negligible >= 2) {
      tail_error = std::abs(s.value) + s.error;
      break;
    }
    lo = hi;
    hi = 2.0 * hi;
  }

  return refine(f, std::move(segments), tail_error, opts, evaluations);
}

QuadratureResult quad_semi_infinite(const std::function<double(double)>& f,
                                    double rel_tol) {
  QuadratureOptions opts;
  opts.rel_tol = rel_tol;
  return quad_semi_infinite(f, opts);
}

QuadratureResult quad_real_line(const std::function<double(double)>& f,
                                const QuadratureOptions& opts) {
  QuadratureOptions half_opts = opts;
  half_opts.max_evaluations = opts.max_evaluations / 2;
  const QuadratureResult pos = quad_semi_infinite(f, half_opts);
  const QuadratureResult neg =
      quad_semi_infinite([&f](double t) { return f(-t); }, half_opts);
  QuadratureResult r;
  r.value = pos.value + neg.value;
  r.abs_error_estimate = pos.abs_error_estimate + neg.abs_error_estimate;
  r.evaluations = pos.evaluations + neg.evaluations;
  return r;
}

QuadratureResult quad_real_line(const std::function<double(double)>& f,
                                double rel_tol) {
  QuadratureOptions opts;
  opts.rel_tol = rel_tol;
  return quad_real_line(f, opts);
}

}  // namespace ggrbf
