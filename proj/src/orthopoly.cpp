#include "ggrbf/orthopoly.hpp"

#include <cmath>
#include <limits>

namespace ggrbf {

double hermite(unsigned i, double x) {
  if (i == 0) return 1.0;
  double prev = 1.0;       // H_0
  double cur = 2.0 * x;    // H_1
  for (unsigned k = 1; k < i; ++k) {
    const double next = 2.0 * x * cur - 2.0 * k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

std::vector<long long> hermite_coeffs(unsigned n) {
  std::vector<long long> prev{1};      // H_0
  if (n == 0) return prev;
  std::vector<long long> cur{0, 2};    // H_1
  for (unsigned k = 1; k < n; ++k) {
    std::vector<long long> next(k + 2, 0);
    for (unsigned p = 0; p <= k; ++p) next[p + 1] += 2 * cur[p];
    for (unsigned p = 0; p < prev.size(); ++p)
      next[p] -= 2 * static_cast<long long>(k) * prev[p];
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

namespace {

long long checked_narrow(__int128 v, const char* what) {
  if (v > std::numeric_limits<long long>::max() ||
      v < std::numeric_limits<long long>::min())
    throw std::overflow_error(what);
  return static_cast<long long>(v);
}

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

Rational::Rational(long long num, long long den) {
  if (den == 0) throw std::domain_error("Rational: zero denominator");
  *this = from_i128(num, den);
}

Rational Rational::from_i128(__int128 num, __int128 den) {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  if (num == 0) den = 1;
  const __int128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  Rational r;
  r.num_ = checked_narrow(num, "Rational: numerator overflow");
  r.den_ = checked_narrow(den, "Rational: denominator overflow");
  return r;
}

Rational operator+(const Rational& a, const Rational& b) {
  return Rational::from_i128(
      static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
      static_cast<__int128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
  return Rational::from_i128(
      static_cast<__int128>(a.num_) * b.den_ - static_cast<__int128>(b.num_) * a.den_,
      static_cast<__int128>(a.den_) * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
  return Rational::from_i128(static_cast<__int128>(a.num_) * b.num_,
                             static_cast<__int128>(a.den_) * b.den_);
}

ExpPoly gg_hermite(unsigned n, double a, double b) {
  if (!(a > 0.0)) throw std::domain_error("gg_hermite: a must be > 0");
  if (!(b >= 0.0)) throw std::domain_error("gg_hermite: b must be >= 0");
  return gg_hermite_t<double>(n, a, b);
}

double gg_hermite_eval(unsigned n, double a, double b, double x) {
  return gg_hermite(n, a, b).eval(x);
}

}  // namespace ggrbf
