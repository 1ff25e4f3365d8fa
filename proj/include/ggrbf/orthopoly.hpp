#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

namespace ggrbf {

/// Physicists' Hermite polynomial H_i(x) via the three-term recurrence.
double hermite(unsigned i, double x);

/// Exact integer coefficients of H_n; entry k is the coefficient of x^k.
std::vector<long long> hermite_coeffs(unsigned n);

/// Exact rational over 64-bit integers, reduced after every operation.
/// Intermediate products use 128-bit arithmetic; genuine overflow throws.
class Rational {
 public:
  Rational() = default;
  Rational(long long num) : num_(num), den_(1) {}
  Rational(long long num, long long den);

  long long num() const { return num_; }
  long long den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  Rational operator-() const { return Rational(-num_, den_); }
  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

 private:
  static Rational from_i128(__int128 num, __int128 den);
  long long num_ = 0;
  long long den_ = 1;
};

namespace expoly_detail {
inline double to_double(double v) { return v; }
inline double to_double(const Rational& v) { return v.to_double(); }
inline bool is_zero(double v) { return v == 0.0; }
inline bool is_zero(const Rational& v) { return v.num() == 0; }
}  // namespace expoly_detail

/// Element of the coefficient ring sum c[i,j] x^i exp(-j b x^2): a finite
/// map from (x power i, Gaussian multiplicity j) to a coefficient.  The
/// ring is closed under differentiation, multiplication by x and by
/// x exp(-b x^2), which is all the derivative recurrence needs.
template <class T>
struct ExpPolyT {
  using Key = std::pair<unsigned, unsigned>;  // (i, j)

  T b{};
  std::map<Key, T> coeffs;

  void add_term(unsigned i, unsigned j, const T& c) {
    auto [it, inserted] = coeffs.emplace(Key{i, j}, c);
    if (!inserted) it->second = it->second + c;
    if (expoly_detail::is_zero(it->second)) coeffs.erase(it);
  }

  double eval(double x) const {
    const double bval = expoly_detail::to_double(b);
    double sum = 0.0;
    for (const auto& [key, c] : coeffs) {
      double mono = expoly_detail::to_double(c);
      for (unsigned k = 0; k < key.first; ++k) mono *= x;
      sum += mono * std::exp(-static_cast<double>(key.second) * bval * x * x);
    }
    return sum;
  }
};

using ExpPoly = ExpPolyT<double>;
using ExpPolyRat = ExpPolyT<Rational>;

/// d/dx in the ring: x^i e^{-jbx^2} -> i x^{i-1} e^{-jbx^2} - 2jb x^{i+1} e^{-jbx^2}.
template <class T>
ExpPolyT<T> expoly_diff(const ExpPolyT<T>& p) {
  ExpPolyT<T> out;
  out.b = p.b;
  for (const auto& [key, c] : p.coeffs) {
    const auto [i, j] = key;
    if (i > 0) out.add_term(i - 1, j, c * T(static_cast<long long>(i)));
    if (j > 0) out.add_term(i + 1, j, -(c * T(2) * T(static_cast<long long>(j)) * p.b));
  }
  return out;
}

/// Hermite-like family for the weight e^{-a x^2} e^{e^{-b x^2} - 1},
/// generated by the exact recurrence  P_{n+1} = phi P_n - P_n',  where
/// phi(x) = 2 a x + 2 b x e^{-b x^2} is minus the log-derivative of the
/// weight.  For a = 1, b = 0 this reproduces the Hermite polynomials.
template <class T>
ExpPolyT<T> gg_hermite_t(unsigned n, const T& a, const T& b) {
  ExpPolyT<T> p;
  p.b = b;
  p.add_term(0, 0, T(1));
  for (unsigned step = 0; step < n; ++step) {
    const ExpPolyT<T> dp = expoly_diff(p);
    ExpPolyT<T> next;
    next.b = b;
    for (const auto& [key, c] : p.coeffs) {
      const auto [i, j] = key;
      next.add_term(i + 1, j, c * T(2) * a);      // 2 a x * term
      next.add_term(i + 1, j + 1, c * T(2) * b);  // 2 b x e^{-bx^2} * term
    }
    for (const auto& [key, c] : dp.coeffs) next.add_term(key.first, key.second, -c);
    p = std::move(next);
  }
  return p;
}

ExpPoly gg_hermite(unsigned n, double a, double b);
double gg_hermite_eval(unsigned n, double a, double b, double x);

}  // namespace ggrbf
