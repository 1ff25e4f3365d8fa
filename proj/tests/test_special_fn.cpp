#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <thread>
#include <vector>

#include "ggrbf/special_fn.hpp"

using namespace ggrbf;

namespace {

constexpr double kE = std::numbers::e;
constexpr double kSqrtPi = 1.7724538509055160273;

double factorial(unsigned n) {
  double f = 1.0;
  for (unsigned i = 2; i <= n; ++i) f *= i;
  return f;
}

// Independent brute-force oracle for S(n, s): fixed 80-term extended
// precision sum, no adaptive stopping.
long double brute_S(unsigned n, long double s) {
  long double sum = 0.0L;
  long double fact = 1.0L;
  for (unsigned l = 0; l < 80; ++l) {
    if (l > 0) fact *= l;
    sum += 1.0L / (fact * powl(1.0L + l * s, n + 1.0L));
  }
  return sum;
}

}  // namespace

TEST_CASE("pochhammer basics") {
  CHECK(pochhammer(3.0, 0) == 1.0);
  CHECK(pochhammer(2.0, 3) == 24.0);
  CHECK(pochhammer(0.5, 2) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("hyper_sum_S closed cases") {
  // sigma_hat = 0: every denominator is 1, the series is e.
  CHECK(hyper_sum_S(5, 0.0) == doctest::Approx(kE).epsilon(1e-14));
  // n = 0, sigma_hat = 1: index shift gives e - 1.
  CHECK(hyper_sum_S(0, 1.0) == doctest::Approx(kE - 1.0).epsilon(1e-14));
  // frozen from the 80-term brute-force oracle
  CHECK(hyper_sum_S(3, 0.5) ==
        doctest::Approx(1.2336234187019549).epsilon(1e-14));
}

TEST_CASE("hyper_sum_S matches the brute-force oracle") {
  for (unsigned n : {0u, 1u, 2u, 5u, 10u, 20u})
    for (double s : {0.0, 0.1, 0.5, 1.0, 2.0, 10.0}) {
      const double expected = static_cast<double>(brute_S(n, s));
      CHECK(hyper_sum_S(n, s) == doctest::Approx(expected).epsilon(1e-14));
    }
}

TEST_CASE("hyper_sum_S bounds and monotonicity") {
  for (unsigned n = 0; n <= 50; ++n) {
    for (double s : {0.0, 0.1, 0.5, 1.0, 2.0, 10.0}) {
      const double v = hyper_sum_S(n, s);
      CHECK(v >= 1.0);
      CHECK(v <= kE + 1e-12);
      if (s == 0.0) CHECK(std::abs(v - kE) <= 1e-12);
      else CHECK(v < kE);
    }
    // non-increasing in n
    for (double s : {0.1, 0.5, 1.0, 2.0, 10.0})
      CHECK(hyper_sum_S(n + 1, s) <= hyper_sum_S(n, s) + 1e-15);
  }
  // decreasing in sigma_hat
  const std::vector<double> shs = {0.1, 0.5, 1.0, 2.0, 10.0};
  for (unsigned n : {0u, 3u, 10u})
    for (std::size_t i = 0; i + 1 < shs.size(); ++i)
      CHECK(hyper_sum_S(n, shs[i + 1]) <= hyper_sum_S(n, shs[i]) + 1e-15);
}

TEST_CASE("hyper_f_nx1 values and limits") {
  CHECK(hyper_f_nx1(2, 1e8) == doctest::Approx(kE).epsilon(1e-6));
  CHECK(hyper_f_nx1(0, 1.0) == doctest::Approx(kE - 1.0).epsilon(1e-14));
  // frozen: 4 * sum 1/((l+2)^2 l!)
  CHECK(hyper_f_nx1(1, 2.0) ==
        doctest::Approx(1.6015187080185654).epsilon(1e-14));
  CHECK_THROWS_AS(hyper_f_nx1(1, 0.0), std::domain_error);
  CHECK_THROWS_AS(hyper_f_nx1(1, -2.0), std::domain_error);
}

TEST_CASE("reciprocal identity F(n, 1/s) == S(n, s)") {
  for (unsigned n = 0; n <= 20; ++n)
    for (double s : {0.1, 0.5, 1.0, 2.0})
      CHECK(std::abs(hyper_f_nx1(n, 1.0 / s) - hyper_sum_S(n, s)) <= 1e-12);
}

TEST_CASE("HyperSum caches consistently under concurrency") {
  HyperSum table(0.7);
  std::vector<double> first(16), second(16);
  std::vector<std::thread> pool;
  for (int t = 0; t < 4; ++t)
    pool.emplace_back([&table] {
      for (unsigned n = 0; n < 16; ++n) (void)table.value(n);
    });
  for (auto& th : pool) th.join();
  for (unsigned n = 0; n < 16; ++n) {
    first[n] = table.value(n);
    second[n] = hyper_sum_S(n, 0.7);
    CHECK(first[n] == second[n]);
  }
}

TEST_CASE("quad_semi_infinite closed-form cases") {
  auto r1 = quad_semi_infinite([](double r) { return r * std::exp(-r * r); });
  CHECK(r1.value == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(r1.abs_error_estimate >= 0.0);

  auto r2 = quad_semi_infinite([](double r) { return std::exp(-r * r); });
  CHECK(r2.value == doctest::Approx(0.5 * kSqrtPi).epsilon(1e-10));

  auto r3 = quad_semi_infinite([](double) { return 0.0; });
  CHECK(r3.value == 0.0);
}

TEST_CASE("quad_real_line closed-form cases") {
  auto r1 = quad_real_line([](double x) { return std::exp(-x * x); });
  CHECK(r1.value == doctest::Approx(kSqrtPi).epsilon(1e-10));

  auto r2 = quad_real_line([](double x) { return x * std::exp(-x * x); });
  CHECK(std::abs(r2.value) <= 1e-12);

  auto r3 = quad_real_line([](double x) { return x * x * std::exp(-x * x); });
  CHECK(r3.value == doctest::Approx(0.5 * kSqrtPi).epsilon(1e-10));
}

TEST_CASE("quadrature respects the evaluation budget") {
  QuadratureOptions opts;
  opts.rel_tol = 1e-13;
  opts.max_evaluations = 60;  // too small for anything nontrivial
  CHECK_THROWS_AS(
      quad_semi_infinite([](double r) { return std::exp(-r * r) * std::sin(40.0 * r); },
                         opts),
      QuadratureError);
}

TEST_CASE("integral identity: radial weight integral equals n! S(n, s)/e") {
  // integral_0^inf s^n e^-s exp(e^{-sh*s} - 1) ds = n! S(n, sh) / e,
  // by expanding exp(e^{-sh*s}) term by term.
  for (unsigned n = 0; n <= 10; ++n)
    for (double sh : {0.0, 0.5, 1.0, 2.0}) {
      const auto integrand = [n, sh](double s) {
        double p = 1.0;
        for (unsigned k = 0; k < n; ++k) p *= s;
        return p * std::exp(-s) * std::exp(std::exp(-sh * s) - 1.0);
      };
      const double quad = quad_semi_infinite(integrand, 1e-10).value;
      const double closed = factorial(n) * hyper_sum_S(n, sh) / kE;
      CHECK(quad == doctest::Approx(closed).epsilon(1e-8));
    }
}
