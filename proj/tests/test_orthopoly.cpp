#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ggrbf/orthopoly.hpp"

using namespace ggrbf;

namespace {

// Eq-(22)-style weight for the Rodrigues cross-check.
double weight(double a, double b, double x) {
  return std::exp(-a * x * x) * std::exp(std::exp(-b * x * x) - 1.0);
}

// Central finite differences, fourth-order stencils, n = 1..4.
double fd_derivative(unsigned n, double a, double b, double x, double h) {
  const auto w = [&](double t) { return weight(a, b, t); };
  switch (n) {
    case 1:
      return (-w(x + 2 * h) + 8 * w(x + h) - 8 * w(x - h) + w(x - 2 * h)) /
             (12 * h);
    case 2:
      return (-w(x + 2 * h) + 16 * w(x + h) - 30 * w(x) + 16 * w(x - h) -
              w(x - 2 * h)) /
             (12 * h * h);
    case 3:
      return (w(x - 3 * h) - 8 * w(x - 2 * h) + 13 * w(x - h) - 13 * w(x + h) +
              8 * w(x + 2 * h) - w(x + 3 * h)) /
             (8 * h * h * h);
    case 4:
      return (-w(x - 3 * h) + 12 * w(x - 2 * h) - 39 * w(x - h) + 56 * w(x) -
              39 * w(x + h) + 12 * w(x + 2 * h) - w(x + 3 * h)) /
             (6 * h * h * h * h);
    default:
      throw std::invalid_argument("fd_derivative: n must be 1..4");
  }
}

Rational coeff_of(const ExpPolyRat& p, unsigned i, unsigned j) {
  const auto it = p.coeffs.find({i, j});
  return it == p.coeffs.end() ? Rational(0) : it->second;
}

}  // namespace

TEST_CASE("hermite recurrence values") {
  CHECK(hermite(0, 3.7) == 1.0);
  CHECK(hermite(1, 0.5) == 1.0);           // 2x
  CHECK(hermite(2, 1.0) == 2.0);           // 4x^2 - 2
  CHECK(hermite(3, 0.0) == 0.0);           // odd polynomial
  CHECK(hermite(3, 1.0) == -4.0);          // 8x^3 - 12x
  CHECK(hermite(10, 0.0) == -30240.0);
}

TEST_CASE("hermite_coeffs matches the recurrence") {
  const auto h10 = hermite_coeffs(10);
  REQUIRE(h10.size() == 11);
  CHECK(h10[10] == 1024);
  CHECK(h10[8] == -23040);
  CHECK(h10[0] == -30240);
  for (double x : {-1.5, 0.3, 2.0}) {
    double sum = 0.0, mono = 1.0;
    for (std::size_t k = 0; k < h10.size(); ++k) {
      sum += static_cast<double>(h10[k]) * mono;
      mono *= x;
    }
    CHECK(sum == doctest::Approx(hermite(10, x)).epsilon(1e-12));
  }
}

TEST_CASE("Rational arithmetic") {
  const Rational half(1, 2);
  const Rational third(1, 3);
  CHECK(half + third == Rational(5, 6));
  CHECK(half * third == Rational(1, 6));
  CHECK(half - half == Rational(0));
  CHECK(Rational(2, 4) == half);
  CHECK(Rational(-3, -6) == half);
  CHECK((-half).num() == -1);
  CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
}

TEST_CASE("expoly_diff on simple terms") {
  ExpPoly one;
  one.b = 0.7;
  one.add_term(0, 0, 1.0);
  CHECK(expoly_diff(one).coeffs.empty());

  ExpPoly gauss;  // e^{-b x^2}
  gauss.b = 0.7;
  gauss.add_term(0, 1, 1.0);
  const ExpPoly dg = expoly_diff(gauss);
  REQUIRE(dg.coeffs.size() == 1);
  CHECK(dg.coeffs.at({1, 1}) == doctest::Approx(-1.4).epsilon(1e-15));

  ExpPoly xg;  // x e^{-b x^2}
  xg.b = 0.7;
  xg.add_term(1, 1, 1.0);
  const ExpPoly dxg = expoly_diff(xg);
  CHECK(dxg.coeffs.at({0, 1}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(dxg.coeffs.at({2, 1}) == doctest::Approx(-1.4).epsilon(1e-15));
}

TEST_CASE("first two family members match the published expansions exactly") {
  const Rational a(91, 1000);
  const Rational b(81, 100);

  const ExpPolyRat h1 = gg_hermite_t<Rational>(1, a, b);
  CHECK(coeff_of(h1, 1, 0) == a * Rational(2));       // 2 a x
  CHECK(coeff_of(h1, 1, 1) == b * Rational(2));       // 2 b x e^{-bx^2}
  CHECK(h1.coeffs.size() == 2);

  const ExpPolyRat h2 = gg_hermite_t<Rational>(2, a, b);
  // -2a + 4b^2 x^2 e^{-bx^2} - 2b e^{-bx^2} + (2ax + 2bx e^{-bx^2})^2
  CHECK(coeff_of(h2, 0, 0) == -(a * Rational(2)));
  CHECK(coeff_of(h2, 0, 1) == -(b * Rational(2)));
  CHECK(coeff_of(h2, 2, 0) == a * a * Rational(4));
  CHECK(coeff_of(h2, 2, 1) == b * b * Rational(4) + a * b * Rational(8));
  CHECK(coeff_of(h2, 2, 2) == b * b * Rational(4));
  CHECK(h2.coeffs.size() == 5);
}

TEST_CASE("a = 1, b = 0 reduces to the Hermite polynomials exactly") {
  for (unsigned n = 0; n <= 10; ++n) {
    const ExpPolyRat p = gg_hermite_t<Rational>(n, Rational(1), Rational(0));
    const auto reference = hermite_coeffs(n);
    for (const auto& [key, c] : p.coeffs) {
      CHECK(key.second == 0u);  // no Gaussian factors survive at b = 0
      CHECK(c.den() == 1);
      CHECK(c.num() == reference[key.first]);
    }
    // every nonzero reference coefficient is present
    for (std::size_t k = 0; k < reference.size(); ++k)
      if (reference[k] != 0)
        CHECK(coeff_of(p, static_cast<unsigned>(k), 0) == Rational(reference[k]));
  }
}

TEST_CASE("gg_hermite_eval closed points") {
  CHECK(gg_hermite_eval(0, 0.5, 0.1, 1.7) == 1.0);
  // first member at the figure parameters: 2a + 2b e^{-b}
  CHECK(gg_hermite_eval(1, 0.091, 0.81, 1.0) ==
        doctest::Approx(0.90267006728116464).epsilon(1e-14));
  // second member at x = 0: -2a - 2b for any parameters
  CHECK(gg_hermite_eval(2, 0.25, 0.75, 0.0) ==
        doctest::Approx(-2.0).epsilon(1e-14));
  CHECK(gg_hermite_eval(2, 1.0, 0.0, 1.0) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK_THROWS_AS(gg_hermite(1, 0.0, 0.5), std::domain_error);
  CHECK_THROWS_AS(gg_hermite(1, 1.0, -0.5), std::domain_error);
}

TEST_CASE("parity: family members alternate even/odd") {
  const double a = 0.091, b = 0.81;
  for (unsigned n = 0; n <= 6; ++n) {
    const ExpPoly p = gg_hermite(n, a, b);
    for (double x : {0.3, 1.1, 2.7}) {
      const double sign = n % 2 == 0 ? 1.0 : -1.0;
      CHECK(p.eval(-x) == doctest::Approx(sign * p.eval(x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("Rodrigues cross-check against finite differences") {
  const double h = 0.02;
  for (const auto& [a, b] : {std::pair{0.091, 0.81}, std::pair{0.5, 0.3}}) {
    for (unsigned n = 1; n <= 4; ++n) {
      const ExpPoly p = gg_hermite(n, a, b);
      for (double x = -3.0; x <= 3.0 + 1e-9; x += 0.5) {
        const double sign = n % 2 == 0 ? 1.0 : -1.0;
        const double rodrigues =
            sign * fd_derivative(n, a, b, x, h) / weight(a, b, x);
        const double direct = p.eval(x);
        CHECK(std::abs(direct - rodrigues) <=
              1e-5 * std::max(1.0, std::abs(rodrigues)));
      }
    }
  }
}
