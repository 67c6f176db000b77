#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "knotsteiner/error.hpp"

namespace knotsteiner {

/// Coefficient arithmetic: checked for int64 (throws Overflow), exact for mpz.
template <class Int>
struct IntOps;

template <>
struct IntOps<long long> {
  static long long add(long long a, long long b) {
    long long r;
    if (__builtin_add_overflow(a, b, &r)) throw Error(ErrorKind::Overflow, "int64 overflow in polynomial add");
    return r;
  }
  static long long sub(long long a, long long b) {
    long long r;
    if (__builtin_sub_overflow(a, b, &r)) throw Error(ErrorKind::Overflow, "int64 overflow in polynomial sub");
    return r;
  }
  static long long mul(long long a, long long b) {
    long long r;
    if (__builtin_mul_overflow(a, b, &r)) throw Error(ErrorKind::Overflow, "int64 overflow in polynomial mul");
    return r;
  }
  static bool divides(long long d, long long a) { return d != 0 && a % d == 0; }
  static long long div(long long a, long long d) { return a / d; }
  static long long from(long long v) { return v; }
  static long long to_ll(long long v) { return v; }
};

template <>
struct IntOps<mpz_class> {
  static mpz_class add(const mpz_class& a, const mpz_class& b) { return a + b; }
  static mpz_class sub(const mpz_class& a, const mpz_class& b) { return a - b; }
  static mpz_class mul(const mpz_class& a, const mpz_class& b) { return a * b; }
  static bool divides(const mpz_class& d, const mpz_class& a) { return d != 0 && mpz_divisible_p(a.get_mpz_t(), d.get_mpz_t()) != 0; }
  static mpz_class div(const mpz_class& a, const mpz_class& d) {
    mpz_class q;
    mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t());
    return q;
  }
  static mpz_class from(long long v) { return mpz_class(static_cast<signed long>(v)); }
  static long long to_ll(const mpz_class& v) {
    if (!v.fits_slong_p()) throw Error(ErrorKind::Overflow, "coefficient does not fit in 64 bits");
    return v.get_si();
  }
};

/// Polynomial in t with integer coefficients; c[i] multiplies t^i, no trailing zeros.
template <class Int>
class Polynomial {
 public:
  using Ops = IntOps<Int>;
  Polynomial() = default;
  explicit Polynomial(std::vector<Int> c) : c_(std::move(c)) { trim(); }
  static Polynomial constant(long long v) { return Polynomial(std::vector<Int>{Ops::from(v)}); }

  const std::vector<Int>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<Int> r(std::max(a.c_.size(), b.c_.size()), Ops::from(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] = Ops::add(r[i], a.c_[i]);
    for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] = Ops::add(r[i], b.c_[i]);
    return Polynomial(std::move(r));
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    std::vector<Int> r(std::max(a.c_.size(), b.c_.size()), Ops::from(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] = Ops::add(r[i], a.c_[i]);
    for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] = Ops::sub(r[i], b.c_[i]);
    return Polynomial(std::move(r));
  }
  Polynomial operator-() const { return Polynomial() - *this; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Int> r(a.c_.size() + b.c_.size() - 1, Ops::from(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] = Ops::add(r[i + j], Ops::mul(a.c_[i], b.c_[j]));
    return Polynomial(std::move(r));
  }
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

  /// Exact quotient; throws InvalidDiagram if d does not divide *this over Z.
  Polynomial exact_div(const Polynomial& d) const {
    if (d.is_zero()) throw Error(ErrorKind::InvalidDiagram, "polynomial division by zero");
    std::vector<Int> rem = c_;
    if (rem.size() < d.c_.size()) {
      if (!is_zero()) throw Error(ErrorKind::InvalidDiagram, "inexact polynomial division");
      return {};
    }
    std::vector<Int> q(rem.size() - d.c_.size() + 1, Ops::from(0));
    const Int& lead = d.c_.back();
    for (std::size_t k = q.size(); k-- > 0;) {
      const Int& top = rem[k + d.c_.size() - 1];
      if (top == 0) continue;
      if (!Ops::divides(lead, top)) throw Error(ErrorKind::InvalidDiagram, "inexact polynomial division");
      const Int f = Ops::div(top, lead);
      q[k] = f;
      for (std::size_t j = 0; j < d.c_.size(); ++j) rem[k + j] = Ops::sub(rem[k + j], Ops::mul(f, d.c_[j]));
    }
    for (const auto& r : rem)
      if (r != 0) throw Error(ErrorKind::InvalidDiagram, "inexact polynomial division");
    return Polynomial(std::move(q));
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<Int> c_;
};

/// Fraction-free (Bareiss) determinant of a square polynomial matrix.
template <class Int>
Polynomial<Int> bareiss_determinant(std::vector<std::vector<Polynomial<Int>>> m) {
  const std::size_t n = m.size();
  if (n == 0) return Polynomial<Int>::constant(1);
  Polynomial<Int> prev = Polynomial<Int>::constant(1);
  bool negate = false;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k].is_zero()) {
      std::size_t r = k + 1;
      while (r < n && m[r][k].is_zero()) ++r;
      if (r == n) return {};
      std::swap(m[k], m[r]);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) m[i][j] = (m[k][k] * m[i][j] - m[i][k] * m[k][j]).exact_div(prev);
      m[i][k] = {};
    }
    prev = m[k][k];
  }
  return negate ? -m[n - 1][n - 1] : m[n - 1][n - 1];
}

/// Laurent polynomial sum c[i] t^(low + i) with 64-bit coefficients.
struct LaurentPolynomial {
  std::vector<long long> coeffs;
  int low = 0;

  static LaurentPolynomial one() { return {{1}, 0}; }

  bool is_zero() const { return coeffs.empty(); }
  bool is_one() const { return coeffs.size() == 1 && coeffs[0] == 1 && low == 0; }

  /// Shifted so the lowest exponent is 0, sign chosen so the constant term is positive.
  LaurentPolynomial normalized() const {
    LaurentPolynomial r = *this;
    while (!r.coeffs.empty() && r.coeffs.back() == 0) r.coeffs.pop_back();
    std::size_t lead = 0;
    while (lead < r.coeffs.size() && r.coeffs[lead] == 0) ++lead;
    r.coeffs.erase(r.coeffs.begin(), r.coeffs.begin() + static_cast<long>(lead));
    r.low = 0;
    if (!r.coeffs.empty() && r.coeffs[0] < 0)
      for (auto& c : r.coeffs) c = -c;
    return r;
  }

  /// Value at an integer t != 0 as a rational when low < 0 is folded in; for
  /// t = +-1 the result is an integer.
  long long eval_unit(int t) const {
    if (t != 1 && t != -1) throw Error(ErrorKind::OutOfRange, "eval_unit takes t = 1 or t = -1");
    long long s = 0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      const long long e = static_cast<long long>(low) + static_cast<long long>(i);
      const long long sign = (t == -1 && (e % 2 != 0)) ? -1 : 1;
      s += sign * coeffs[i];
    }
    return s;
  }

  double eval(double t) const {
    double s = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 0;) s = s * t + static_cast<double>(coeffs[i]);
    return s * std::pow(t, low);
  }

  /// Palindromic coefficients, i.e. equal to its value at 1/t up to a unit.
  bool is_symmetric() const {
    const auto n = normalized();
    for (std::size_t i = 0; i < n.coeffs.size(); ++i)
      if (n.coeffs[i] != n.coeffs[n.coeffs.size() - 1 - i]) return false;
    return true;
  }

  std::string to_string() const {
    if (coeffs.empty()) return "0";
    std::string s;
    for (std::size_t i = coeffs.size(); i-- > 0;) {
      const long long c = coeffs[i];
      if (c == 0) continue;
      const int e = low + static_cast<int>(i);
      const long long a = c < 0 ? -c : c;
      if (s.empty()) {
        if (c < 0) s += "-";
      } else {
        s += c < 0 ? " - " : " + ";
      }
      if (a != 1 || e == 0) s += std::to_string(a);
      if (e != 0) s += e == 1 ? "t" : "t^" + std::to_string(e);
    }
    return s;
  }

  friend bool operator==(const LaurentPolynomial& a, const LaurentPolynomial& b) {
    return a.coeffs == b.coeffs && a.low == b.low;
  }
};

template <class Int>
LaurentPolynomial to_laurent(const Polynomial<Int>& p) {
  LaurentPolynomial r;
  for (const auto& c : p.coeffs()) r.coeffs.push_back(IntOps<Int>::to_ll(c));
  return r;
}

}  // namespace knotsteiner
