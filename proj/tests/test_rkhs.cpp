#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "ggrbf/kernels.hpp"
#include "ggrbf/rkhs.hpp"
#include "ggrbf/rng.hpp"
#include "ggrbf/special_fn.hpp"

using namespace ggrbf;

namespace {

constexpr double kE = std::numbers::e;
constexpr double kPi = std::numbers::pi;

// Radial quadrature oracle for the complex moment: the angular integral is
// exactly 2 pi delta_nm, the radial part is integrated adaptively.
double moment_quadrature(unsigned n, const KernelParams& p) {
  const double s2 = p.sigma * p.sigma;
  const double s02 = p.sigma0 * p.sigma0;
  const auto integrand = [n, s2, s02](double r) {
    double power = r;  // r^(2n+1)
    for (unsigned k = 0; k < 2 * n; ++k) power *= r;
    return power * std::exp(-s2 * r * r) * std::exp(std::exp(-s02 * r * r) - 1.0);
  };
  return 2.0 * kPi * quad_semi_infinite(integrand, 1e-10).value;
}

MonomialSeries monomial_1d(unsigned n, Complex coeff) {
  MonomialSeries f;
  f.dimension = 1;
  f.coefficients[{n}] = coeff;
  return f;
}

MonomialSeries random_series(Rng& rng, unsigned dimension, unsigned degree) {
  MonomialSeries f;
  f.dimension = dimension;
  // dense up to the requested total degree
  std::vector<unsigned> idx(dimension, 0);
  const auto fill = [&](auto&& self, unsigned coord, unsigned budget) -> void {
    if (coord + 1 == dimension) {
      for (unsigned k = 0; k <= budget; ++k) {
        idx[coord] = k;
        f.coefficients[idx] =
            Complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
      }
      return;
    }
    for (unsigned k = 0; k <= budget; ++k) {
      idx[coord] = k;
      self(self, coord + 1, budget - k);
    }
  };
  fill(fill, 0, degree);
  return f;
}

ComplexPoint random_point(Rng& rng, unsigned dimension, double span) {
  ComplexPoint z(dimension);
  for (auto& c : z) c = Complex(rng.uniform(-span, span), rng.uniform(-span, span));
  return z;
}

}  // namespace

TEST_CASE("normalization constant") {
  CHECK(normalization_constant({1.0, 0.0}, 1) ==
        doctest::Approx(kE / kPi).epsilon(1e-15));
  CHECK(normalization_constant({1.0, 0.7}, 2) ==
        doctest::Approx(std::pow(kE / kPi, 2.0)).epsilon(1e-15));
  CHECK(normalization_constant({2.0, 0.0}, 1) ==
        doctest::Approx(4.0 * kE / kPi).epsilon(1e-15));
  // printed convention differs by exactly 2^d
  CHECK(normalization_constant({1.0, 0.0}, 3, ConstantConvention::printed) ==
        doctest::Approx(normalization_constant({1.0, 0.0}, 3) / 8.0)
            .epsilon(1e-15));
}

TEST_CASE("moment closed form") {
  CHECK(moment(1, 0, {1.0, 1.0}) == 0.0);
  CHECK(moment(0, 3, {0.5, 0.2}) == 0.0);
  // n = 0, sigma = 1, sigma0 = 0: 2 pi int r e^{-r^2} dr = pi
  CHECK(moment(0, 0, {1.0, 0.0}) == doctest::Approx(kPi).epsilon(1e-12));
  // frozen: pi * 2! * S(2,1) / e
  CHECK(moment(2, 2, {1.0, 1.0}) ==
        doctest::Approx(2.6500806692625562).epsilon(1e-14));
}

TEST_CASE("moment agrees with the quadrature oracle") {
  for (unsigned n : {0u, 1u, 2u, 5u, 8u})
    for (double sigma : {0.5, 1.0, 2.0})
      for (double sh : {0.0, 0.5, 1.0}) {
        const KernelParams p{sigma, sigma * std::sqrt(sh)};
        CHECK(moment(n, n, p) ==
              doctest::Approx(moment_quadrature(n, p)).epsilon(1e-8));
      }
}

TEST_CASE("printed moment convention differs from quadrature by factor 2") {
  const KernelParams p{1.0, 0.0};
  const double printed = moment(0, 0, p, ConstantConvention::printed);
  CHECK(printed == doctest::Approx(2.0 * moment_quadrature(0, p)).epsilon(1e-8));
}

TEST_CASE("onb_coeff closed values") {
  CHECK(onb_coeff(0, {1.0, 0.0}) ==
        doctest::Approx(0.60653065971263342).epsilon(1e-14));  // 1/sqrt(e)
  CHECK(onb_coeff(0, {1.0, 1.0}) ==
        doctest::Approx(0.76287397836689018).epsilon(1e-14));  // 1/sqrt(e-1)
  CHECK(onb_coeff(2, {1.0, 0.0}) ==
        doctest::Approx(0.42888194248035340).epsilon(1e-14));  // 1/sqrt(2e)
  // log-domain branch: representable where the direct path overflows
  // (200! has no double representation), and consistent across the switch
  const KernelParams p{2.0, 1.0};
  const double c200 = onb_coeff(200, p);
  CHECK(std::isfinite(c200));
  CHECK(c200 > 0.0);
  for (unsigned n : {150u, 200u}) {  // ratio test c_{n+1}^2/c_n^2
    const double cn = onb_coeff(n, p);
    const double cn1 = onb_coeff(n + 1, p);
    const double expected = p.sigma *
                            std::sqrt(hyper_sum_S(n, p.sigma_hat()) /
                                      hyper_sum_S(n + 1, p.sigma_hat())) /
                            std::sqrt(static_cast<double>(n) + 1.0);
    CHECK(cn1 / cn == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("onb_eval basics") {
  const KernelParams p{1.0, 0.0};
  const ComplexPoint z0 = {Complex(0.0, 0.0)};
  CHECK(std::abs(onb_eval({1}, z0, p)) == 0.0);
  const ComplexPoint z1 = {Complex(1.0, 0.0)};
  CHECK(onb_eval({1}, z1, p).real() ==
        doctest::Approx(0.60653065971263342).epsilon(1e-14));
  const ComplexPoint any = {Complex(2.0, -1.0)};
  CHECK(onb_eval({0}, any, p).real() ==
        doctest::Approx(1.0 / std::sqrt(hyper_sum_S(0, 0.0))).epsilon(1e-14));
  CHECK_THROWS_AS(onb_eval({0, 1}, z1, p), std::invalid_argument);
}

TEST_CASE("lambda_weight values and relation to onb_coeff") {
  CHECK(lambda_weight({0}, {1.0, 1.0}) ==
        doctest::Approx(1.0 / hyper_sum_S(0, 1.0)).epsilon(1e-14));
  CHECK(lambda_weight({0}, {1.0, 0.0}) ==
        doctest::Approx(1.0 / kE).epsilon(1e-14));
  CHECK(lambda_weight({2, 1}, {1.0, 0.0}) ==
        doctest::Approx(1.0 / (2.0 * kE * kE)).epsilon(1e-14));
  const KernelParams p{1.3, 0.9};
  for (unsigned n = 0; n <= 12; ++n) {
    const double c = onb_coeff(n, p);
    CHECK(lambda_weight({n}, p) == doctest::Approx(c * c).epsilon(1e-13));
  }
}

TEST_CASE("rk_eval basics and factorization") {
  const KernelParams p{1.0, 1.0};
  const ComplexPoint z0 = {Complex(0.0, 0.0)};
  const ComplexPoint w = {Complex(0.7, -0.3)};
  CHECK(rk_eval(z0, w, p).real() ==
        doctest::Approx(1.0 / hyper_sum_S(0, 1.0)).epsilon(1e-13));

  const ComplexPoint z2 = {Complex(0.4, 0.2), Complex(-0.5, 0.1)};
  const ComplexPoint w2 = {Complex(-0.2, 0.6), Complex(0.3, 0.3)};
  const Complex left = rk_eval(z2, w2, p);
  const Complex right = rk_eval({z2[0]}, {w2[0]}, p) * rk_eval({z2[1]}, {w2[1]}, p);
  CHECK(std::abs(left - right) <= 1e-12 * std::abs(left));
}

TEST_CASE("rk_eval Gaussian reduction at sigma0 = 0") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const double sigma = 0.4 + 1.6 * rng.uniform01();
    const KernelParams p{sigma, 0.0};
    const ComplexPoint z = random_point(rng, 1, 1.5);
    const ComplexPoint w = random_point(rng, 1, 1.5);
    const Complex expected =
        std::exp(sigma * sigma * z[0] * std::conj(w[0]) - 1.0);
    CHECK(std::abs(rk_eval(z, w, p) - expected) <= 1e-12 * std::abs(expected));
  }
}

TEST_CASE("analytic orthonormality: <e_n, e_m> is the identity") {
  for (const KernelParams& p :
       {KernelParams{1.0, 0.0}, KernelParams{1.0, 1.0}, KernelParams{0.7, 1.3}}) {
    for (unsigned n = 0; n <= 8; ++n)
      for (unsigned m = 0; m <= 8; ++m) {
        const auto en = monomial_1d(n, onb_coeff(n, p));
        const auto em = monomial_1d(m, onb_coeff(m, p));
        const Complex v = inner_product(en, em, p);
        const double expected = n == m ? 1.0 : 0.0;
        CHECK(std::abs(v - expected) <= 1e-10);
      }
  }
}

TEST_CASE("quadrature spot-check of orthonormality for n, m <= 4") {
  const KernelParams p{1.0, 1.0};
  const double N1 = normalization_constant(p, 1);
  for (unsigned n = 0; n <= 4; ++n) {
    const double cn = onb_coeff(n, p);
    const double diag = N1 * cn * cn * moment_quadrature(n, p);
    CHECK(diag == doctest::Approx(1.0).epsilon(1e-6));
  }
  // off-diagonal entries vanish through the exact angular factor
  CHECK(moment(3, 1, p) == 0.0);
}

TEST_CASE("Parseval identity for random series") {
  Rng rng(31);
  const KernelParams p{1.0, 1.0};
  for (int trial = 0; trial < 50; ++trial) {
    const MonomialSeries f = random_series(rng, 1, 6);
    const double norm2 = norm_squared(f, p);
    double sum = 0.0;
    for (unsigned n = 0; n <= 6; ++n) {
      const auto en = monomial_1d(n, onb_coeff(n, p));
      sum += std::norm(inner_product(f, en, p));
    }
    CHECK(sum == doctest::Approx(norm2).epsilon(1e-9));
  }
}

TEST_CASE("reproducing property residual") {
  Rng rng(41);
  const ComplexPoint origin = {Complex(0.0, 0.0)};
  const MonomialSeries constant = monomial_1d(0, Complex(2.5, -1.0));
  CHECK(reproducing_residual(constant, origin, {1.0, 1.0}) <= 1e-12);

  for (const KernelParams& p : {KernelParams{1.0, 1.0}, KernelParams{0.8, 0.5}}) {
    for (int trial = 0; trial < 50; ++trial) {
      const MonomialSeries f = random_series(rng, 1, 5);
      const ComplexPoint w = random_point(rng, 1, 1.0);
      const double bound = 1e-9 * (1.0 + std::abs(f.eval(w)));
      CHECK(reproducing_residual(f, w, p) <= bound);
    }
    for (int trial = 0; trial < 20; ++trial) {
      const MonomialSeries f = random_series(rng, 2, 3);
      const ComplexPoint w = random_point(rng, 2, 1.0);
      const double bound = 1e-9 * (1.0 + std::abs(f.eval(w)));
      CHECK(reproducing_residual(f, w, p) <= bound);
    }
  }
}

TEST_CASE("kernel equals the basis sum (Aronszajn expansion)") {
  Rng rng(53);
  const KernelParams p{1.0, 1.0};
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexPoint z = random_point(rng, 1, 1.2);
    const ComplexPoint w = random_point(rng, 1, 1.2);
    Complex sum = 0.0;
    const unsigned N = 40;
    for (unsigned n = 0; n <= N; ++n)
      sum += onb_eval({n}, z, p) * std::conj(onb_eval({n}, w, p));
    // tail majorant: the exp series tail with S >= 1
    const double q = p.sigma * p.sigma * std::abs(z[0]) * std::abs(w[0]);
    double term = 1.0, tail = 0.0;
    for (unsigned k = 1; k <= N + 1; ++k) term *= q / k;
    for (unsigned k = N + 1; k < N + 60; ++k) {
      tail += term;
      term *= q / (k + 1);
    }
    const Complex kernel = rk_eval(z, w, p);
    // the declared agreement: series tail plus rk_eval's own tolerance
    CHECK(std::abs(kernel - sum) <= tail + 1e-11 * (1.0 + std::abs(kernel)));
  }
}

TEST_CASE("rk positivity on finite point sets") {
  Rng rng(67);
  const KernelParams p{1.0, 0.7};
  const int n = 25;
  std::vector<ComplexPoint> pts;
  for (int i = 0; i < n; ++i) pts.push_back(random_point(rng, 1, 1.0));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      // Hermitian symmetry of the kernel table
      const Complex v = rk_eval(pts[i], pts[j], p);
      const Complex vt = rk_eval(pts[j], pts[i], p);
      CHECK(std::abs(v - std::conj(vt)) <= 1e-12 * (1.0 + std::abs(v)));
    }
  // PSD check on real sample points, where the table is real symmetric
  std::vector<ComplexPoint> real_pts;
  for (int i = 0; i < n; ++i)
    real_pts.push_back({Complex(rng.uniform(-1.5, 1.5), 0.0)});
  GramMatrix real_table(n, "rk-real");
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      real_table.set(i, j, rk_eval(real_pts[i], real_pts[j], p).real());
  CHECK(min_eigenvalue(real_table) >= -1e-8);
}

TEST_CASE("eval_bound_constant geometry") {
  const KernelParams p{1.0, 0.0};
  // sigma0 = 0: c = sqrt(exp(R^2)/e) with R the farthest inflated modulus;
  // recompute R independently here
  const ComplexBox origin_box = {{-0.5, 0.5, -0.5, 0.5}};
  const double r_origin = std::hypot(0.5, 0.5) + 1.0;
  CHECK(eval_bound_constant(origin_box, p) ==
        doctest::Approx(std::sqrt(std::exp(r_origin * r_origin) / kE))
            .epsilon(1e-13));

  const ComplexBox far_box = {{2.0, 3.0, 0.0, 1.0}};
  const double r_far = std::hypot(3.0, 1.0) + 1.0;
  CHECK(eval_bound_constant(far_box, p) ==
        doctest::Approx(std::sqrt(std::exp(r_far * r_far) / kE)).epsilon(1e-13));

  // growing the box can only grow the constant
  CHECK(eval_bound_constant(far_box, p) > eval_bound_constant(origin_box, p));

  // it dominates the sharp constant sqrt(K(z,z)) everywhere in the box
  const KernelParams q{1.0, 1.0};
  const double c = eval_bound_constant(origin_box, q);
  for (double re : {-0.5, 0.0, 0.5})
    for (double im : {-0.5, 0.0, 0.5}) {
      const ComplexPoint z = {Complex(re, im)};
      const double sharp = std::sqrt(rk_eval(z, z, q).real());
      CHECK(c >= sharp);
    }
}

TEST_CASE("point evaluations obey the Lemma-style bound") {
  Rng rng(71);
  const KernelParams p{1.0, 1.0};
  const ComplexBox box = {{-1.0, 1.5, -0.5, 1.0}};
  const double c = eval_bound_constant(box, p);
  for (int trial = 0; trial < 100; ++trial) {
    const MonomialSeries f = random_series(rng, 1, 6);
    const double norm = std::sqrt(norm_squared(f, p));
    ComplexPoint z = {Complex(rng.uniform(box[0].re_lo, box[0].re_hi),
                              rng.uniform(box[0].im_lo, box[0].im_hi))};
    CHECK(std::abs(f.eval(z)) <= c * norm * (1.0 + 1e-12));
  }
}
