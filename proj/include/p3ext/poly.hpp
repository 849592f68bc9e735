#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "error.hpp"
#include "numtheory.hpp"

namespace p3ext {

/// Dense univariate polynomial, coefficient i multiplies X^i. The zero
/// polynomial has no coefficients; otherwise the leading coefficient is
/// nonzero.
template <typename T>
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<T> coeffs) : c_(std::move(coeffs)) { trim(); }
  Poly(std::initializer_list<T> coeffs) : c_(coeffs) { trim(); }

  static Poly constant(const T& a) { return Poly(std::vector<T>{a}); }
  static Poly monomial(const T& a, std::size_t k) {
    std::vector<T> c(k + 1, T(0));
    c[k] = a;
    return Poly(std::move(c));
  }
  static Poly x() { return monomial(T(1), 1); }

  bool is_zero() const { return c_.empty(); }
  /// Degree; -1 for the zero polynomial.
  long degree() const { return static_cast<long>(c_.size()) - 1; }
  const std::vector<T>& coeffs() const { return c_; }
  T coeff(std::size_t i) const { return i < c_.size() ? c_[i] : T(0); }
  const T& leading() const { return c_.back(); }
  bool is_monic() const { return !c_.empty() && c_.back() == T(1); }

  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  Poly& operator+=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), T(0));
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), T(0));
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
  }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator-(Poly a) {
    for (auto& x : a.c_) x = -x;
    return a;
  }

  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<T> out(a.c_.size() + b.c_.size() - 1, T(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i] == 0) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
    }
    return Poly(std::move(out));
  }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  friend Poly operator*(const T& s, Poly a) {
    for (auto& x : a.c_) x *= s;
    a.trim();
    return a;
  }

  T eval(const T& at) const {
    T acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * at + *it;
    return acc;
  }

  /// this(inner(X)) by Horner's rule.
  Poly compose(const Poly& inner) const {
    Poly acc;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * inner + constant(*it);
    return acc;
  }

  Poly derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<T> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * T(static_cast<long>(i));
    return Poly(std::move(d));
  }

  Poly pow(unsigned long e) const {
    Poly r = constant(T(1)), b = *this;
    while (e) {
      if (e & 1) r *= b;
      e >>= 1;
      if (e) b *= b;
    }
    return r;
  }

  /// Quotient and remainder. Exact over a field; over the integers the
  /// divisor must be monic.
  std::pair<Poly, Poly> divmod(const Poly& d) const {
    require(!d.is_zero(), ErrorCode::DivisionByZero, "polynomial division by zero");
    if (degree() < d.degree()) return {Poly{}, *this};
    std::vector<T> r = c_;
    std::vector<T> q(c_.size() - d.c_.size() + 1, T(0));
    const T& lead = d.c_.back();
    for (long i = static_cast<long>(q.size()) - 1; i >= 0; --i) {
      T& top = r[static_cast<std::size_t>(i) + d.c_.size() - 1];
      if (top == 0) continue;
      T f = top / lead;
      q[static_cast<std::size_t>(i)] = f;
      for (std::size_t j = 0; j < d.c_.size(); ++j) r[static_cast<std::size_t>(i) + j] -= f * d.c_[j];
    }
    r.resize(d.c_.size() - 1);
    return {Poly(std::move(q)), Poly(std::move(r))};
  }
  Poly operator%(const Poly& d) const { return divmod(d).second; }
  Poly operator/(const Poly& d) const { return divmod(d).first; }

  Poly monic() const {
    require(!is_zero(), ErrorCode::DivisionByZero, "monic of zero polynomial");
    return (T(1) / leading()) * *this;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  std::vector<T> c_;
};

using RatPoly = Poly<BigRat>;

/// Extended Euclid over a field: returns (g, s, t) with s*a + t*b = g, g monic.
template <typename T>
std::tuple<Poly<T>, Poly<T>, Poly<T>> ext_gcd(Poly<T> a, Poly<T> b) {
  Poly<T> s0 = Poly<T>::constant(T(1)), s1, t0, t1 = Poly<T>::constant(T(1));
  while (!b.is_zero()) {
    auto [q, r] = a.divmod(b);
    a = std::move(b);
    b = std::move(r);
    Poly<T> s2 = s0 - q * s1;
    Poly<T> t2 = t0 - q * t1;
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (a.is_zero()) return {a, s0, t0};
  T inv = T(1) / a.leading();
  return {inv * a, inv * s0, inv * t0};
}

inline bool is_integer(const BigRat& q) { return q.get_den() == 1; }

/// Human text form, highest degree first: integer coefficients are
/// juxtaposed ("2X^2"), others written "num/den*X^k".
inline std::string to_text(const RatPoly& f, const std::string& var = "X") {
  if (f.is_zero()) return "0";
  std::string out;
  for (long k = f.degree(); k >= 0; --k) {
    BigRat c = f.coeff(static_cast<std::size_t>(k));
    if (c == 0) continue;
    bool neg = c < 0;
    if (neg) c = -c;
    if (out.empty()) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    std::string mono = k == 0 ? "" : (k == 1 ? var : var + "^" + std::to_string(k));
    if (k == 0) {
      out += c.get_str();
    } else if (c == 1) {
      out += mono;
    } else if (is_integer(c)) {
      out += c.get_str() + mono;
    } else {
      out += c.get_str() + "*" + mono;
    }
  }
  return out;
}

}  // namespace p3ext
