#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "numtheory.hpp"
#include "poly.hpp"

namespace p3ext {

/// Phi_m by iterated exact division of X^m - 1 by Phi_d for the proper
/// divisors d of m.
inline RatPoly cyclotomic_polynomial(std::uint64_t m) {
  require(m >= 1, ErrorCode::Internal, "cyclotomic_polynomial needs m >= 1");
  RatPoly f = RatPoly::monomial(1, m) - RatPoly::constant(1);
  for (std::uint64_t d = 1; d < m; ++d) {
    if (m % d != 0) continue;
    auto [q, r] = f.divmod(cyclotomic_polynomial(d));
    require(r.is_zero(), ErrorCode::Internal, "inexact cyclotomic division");
    f = std::move(q);
  }
  return f;
}

class CycNum;

/// Q(zeta_m) with its reduction data. Immutable once built; elements share
/// it through a shared_ptr.
class CyclotomicField : public std::enable_shared_from_this<CyclotomicField> {
 public:
  static std::shared_ptr<const CyclotomicField> make(std::uint64_t m) {
    require(m >= 1, ErrorCode::Internal, "conductor must be positive");
    return std::shared_ptr<const CyclotomicField>(new CyclotomicField(m));
  }

  std::uint64_t conductor() const { return m_; }
  std::size_t degree() const { return phi_; }
  const RatPoly& modulus() const { return modulus_; }

  /// Sparse reduced form of zeta^k, k taken mod m.
  const std::vector<std::pair<std::size_t, long>>& power(std::uint64_t k) const { return powers_[k % m_]; }
  /// out += c * zeta^k (out has length phi).
  void accumulate_power(std::vector<BigInt>& out, std::uint64_t k, const BigInt& c) const;

  CycNum zero() const;
  CycNum one() const;
  CycNum from_rat(const BigRat& q) const;
  CycNum zeta(std::int64_t k = 1) const;
  /// Canonical remainder of an arbitrary polynomial in zeta_m.
  CycNum reduce(const RatPoly& raw) const;

 private:
  explicit CyclotomicField(std::uint64_t m) : m_(m), modulus_(cyclotomic_polynomial(m)) {
    phi_ = static_cast<std::size_t>(modulus_.degree());
    powers_.resize(m_);
    // zeta^k for k = 0..m-1 by repeated multiplication by X mod Phi_m
    std::vector<long> cur(phi_, 0);
    if (phi_ > 0) cur[0] = 1;
    std::vector<long> lower(phi_);
    for (std::size_t i = 0; i < phi_; ++i) lower[i] = modulus_.coeff(i).get_num().get_si();
    for (std::uint64_t k = 0; k < m_; ++k) {
      for (std::size_t i = 0; i < phi_; ++i) {
        if (cur[i] != 0) powers_[k].emplace_back(i, cur[i]);
      }
      long top = phi_ ? cur[phi_ - 1] : 0;
      for (std::size_t i = phi_; i-- > 1;) cur[i] = cur[i - 1] - top * lower[i];
      if (phi_) cur[0] = -top * lower[0];
    }
  }

  std::uint64_t m_;
  std::size_t phi_ = 0;
  RatPoly modulus_;
  std::vector<std::vector<std::pair<std::size_t, long>>> powers_;
};

using FieldPtr = std::shared_ptr<const CyclotomicField>;

/// zeta_m -> zeta_m^k for a unit k mod m.
class CycAut {
 public:
  CycAut(std::uint64_t m, std::int64_t k) : m_(m), k_(mod_u(k, m)) {
    require(gcd_u64(k_, m_) == 1, ErrorCode::BadGenerator,
            "exponent " + std::to_string(k) + " is not a unit mod " + std::to_string(m));
  }

  std::uint64_t conductor() const { return m_; }
  std::uint64_t exponent() const { return k_; }

  CycAut then(const CycAut& o) const {
    require(m_ == o.m_, ErrorCode::ConductorMismatch, "automorphism conductors differ");
    return CycAut(m_, static_cast<std::int64_t>(mulmod(k_, o.k_, m_)));
  }
  CycAut pow(std::uint64_t e) const { return CycAut(m_, static_cast<std::int64_t>(powmod(k_, e, m_))); }
  std::uint64_t order() const { return mult_order(k_, m_); }

  friend bool operator==(const CycAut& a, const CycAut& b) { return a.m_ == b.m_ && a.k_ == b.k_; }

 private:
  std::uint64_t m_;
  std::uint64_t k_;
};

/// Element of Q(zeta_m) in the power basis zeta^0..zeta^{phi-1}. Stored as
/// integer numerators over one positive denominator with no common factor,
/// so equal elements have identical representations.
class CycNum {
 public:
  CycNum(FieldPtr field, std::vector<BigInt> num, BigInt den = 1)
      : field_(std::move(field)), num_(std::move(num)), den_(std::move(den)) {
    num_.resize(field_->degree());
    normalize();
  }

  const FieldPtr& field() const { return field_; }
  std::uint64_t conductor() const { return field_->conductor(); }

  std::vector<BigRat> coeffs() const {
    std::vector<BigRat> out;
    out.reserve(num_.size());
    for (const auto& c : num_) out.push_back(make_rat(c, den_));
    return out;
  }
  BigRat coeff(std::size_t i) const { return make_rat(num_[i], den_); }
  std::span<const BigInt> numerators() const { return num_; }
  const BigInt& denominator() const { return den_; }

  bool is_zero() const {
    for (const auto& c : num_) {
      if (c != 0) return false;
    }
    return true;
  }
  bool is_rational() const {
    for (std::size_t i = 1; i < num_.size(); ++i) {
      if (num_[i] != 0) return false;
    }
    return true;
  }
  bool has_integer_coeffs() const { return den_ == 1; }
  BigRat constant_term() const { return num_.empty() ? BigRat(0) : make_rat(num_[0], den_); }
  RatPoly as_poly() const { return RatPoly(coeffs()); }

  friend bool operator==(const CycNum& a, const CycNum& b) {
    return a.conductor() == b.conductor() && a.den_ == b.den_ && a.num_ == b.num_;
  }
  friend bool operator!=(const CycNum& a, const CycNum& b) { return !(a == b); }

  friend CycNum operator+(const CycNum& a, const CycNum& b) { return combine(a, b, 1); }
  friend CycNum operator-(const CycNum& a, const CycNum& b) { return combine(a, b, -1); }
  friend CycNum operator-(CycNum a) {
    for (auto& c : a.num_) c = -c;
    return a;
  }

  friend CycNum operator*(const CycNum& a, const CycNum& b) {
    check_same(a, b);
    const std::size_t n = a.num_.size();
    std::vector<BigInt> wide(n ? 2 * n - 1 : 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (a.num_[i] == 0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (b.num_[j] == 0) continue;
        mpz_addmul(wide[i + j].get_mpz_t(), a.num_[i].get_mpz_t(), b.num_[j].get_mpz_t());
      }
    }
    std::vector<BigInt> out(wide.begin(), wide.begin() + static_cast<std::ptrdiff_t>(n));
    for (std::size_t k = n; k < wide.size(); ++k) {
      if (wide[k] != 0) a.field_->accumulate_power(out, k, wide[k]);
    }
    return CycNum(a.field_, std::move(out), a.den_ * b.den_);
  }

  friend CycNum operator*(const BigRat& s, const CycNum& a) {
    std::vector<BigInt> out(a.num_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.num_[i] * s.get_num();
    return CycNum(a.field_, std::move(out), a.den_ * s.get_den());
  }

  CycNum& operator+=(const CycNum& o) { return *this = *this + o; }
  CycNum& operator-=(const CycNum& o) { return *this = *this - o; }
  CycNum& operator*=(const CycNum& o) { return *this = *this * o; }

  /// Multiplicative inverse via the extended gcd with Phi_m over Q.
  CycNum inv() const {
    require(!is_zero(), ErrorCode::DivisionByZero, "inverse of zero");
    if (is_rational()) return field_->from_rat(1 / constant_term());
    auto [g, s, t] = ext_gcd(as_poly(), field_->modulus());
    require(g.degree() == 0, ErrorCode::Internal, "element shares a factor with Phi_m");
    return field_->reduce(s);
  }

  /// Integer power; negative exponents go through inv().
  CycNum pow(std::int64_t e) const {
    if (e < 0) return inv().pow(-e);
    CycNum r = field_->one(), b = *this;
    auto ue = static_cast<std::uint64_t>(e);
    while (ue) {
      if (ue & 1) r *= b;
      ue >>= 1;
      if (ue) b *= b;
    }
    return r;
  }

  CycNum apply(const CycAut& s) const {
    require(s.conductor() == conductor(), ErrorCode::ConductorMismatch, "automorphism conductor differs");
    const std::uint64_t m = conductor();
    std::vector<BigInt> out(num_.size());
    for (std::size_t i = 0; i < num_.size(); ++i) {
      if (num_[i] != 0) field_->accumulate_power(out, mulmod(i, s.exponent(), m), num_[i]);
    }
    return CycNum(field_, std::move(out), den_);
  }

  /// Sum of c_i * zeta^i written in `var`, highest power first.
  std::string to_string(const std::string& var = "z") const {
    std::vector<BigRat> c = coeffs();
    RatPoly p(c);
    return to_text(p, var);
  }

 private:
  friend class CyclotomicField;

  static void check_same(const CycNum& a, const CycNum& b) {
    require(a.conductor() == b.conductor(), ErrorCode::ConductorMismatch,
            "conductors " + std::to_string(a.conductor()) + " and " + std::to_string(b.conductor()));
  }

  static CycNum combine(const CycNum& a, const CycNum& b, int sign) {
    check_same(a, b);
    std::vector<BigInt> out(a.num_.size());
    if (a.den_ == b.den_) {
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = sign > 0 ? BigInt(a.num_[i] + b.num_[i]) : BigInt(a.num_[i] - b.num_[i]);
      return CycNum(a.field_, std::move(out), a.den_);
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
      BigInt x = a.num_[i] * b.den_, y = b.num_[i] * a.den_;
      out[i] = sign > 0 ? BigInt(x + y) : BigInt(x - y);
    }
    return CycNum(a.field_, std::move(out), a.den_ * b.den_);
  }

  void normalize() {
    require(den_ != 0, ErrorCode::DivisionByZero, "zero denominator");
    if (den_ < 0) {
      den_ = -den_;
      for (auto& c : num_) c = -c;
    }
    if (den_ == 1) return;
    BigInt g = den_;
    for (const auto& c : num_) {
      if (c == 0) continue;
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
      if (g == 1) return;
    }
    if (is_zero()) {
      den_ = 1;
      return;
    }
    for (auto& c : num_) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
    mpz_divexact(den_.get_mpz_t(), den_.get_mpz_t(), g.get_mpz_t());
  }

  FieldPtr field_;
  std::vector<BigInt> num_;
  BigInt den_;
};

namespace detail {
inline void accumulate(std::vector<BigInt>& out, const std::vector<std::pair<std::size_t, long>>& pw, const BigInt& c) {
  for (const auto& [idx, v] : pw) {
    if (v >= 0) {
      mpz_addmul_ui(out[idx].get_mpz_t(), c.get_mpz_t(), static_cast<unsigned long>(v));
    } else {
      mpz_submul_ui(out[idx].get_mpz_t(), c.get_mpz_t(), static_cast<unsigned long>(-v));
    }
  }
}
}  // namespace detail

inline CycNum CyclotomicField::zero() const {
  return CycNum(shared_from_this(), std::vector<BigInt>(phi_));
}
inline CycNum CyclotomicField::one() const { return from_rat(1); }
inline CycNum CyclotomicField::from_rat(const BigRat& q) const {
  std::vector<BigInt> c(phi_);
  if (phi_) c[0] = q.get_num();
  return CycNum(shared_from_this(), std::move(c), q.get_den());
}
inline CycNum CyclotomicField::zeta(std::int64_t k) const {
  std::vector<BigInt> c(phi_);
  detail::accumulate(c, power(mod_u(k, m_)), BigInt(1));
  return CycNum(shared_from_this(), std::move(c));
}
inline CycNum CyclotomicField::reduce(const RatPoly& raw) const {
  BigInt den = 1;
  for (const auto& c : raw.coeffs()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
  std::vector<BigInt> c(phi_);
  for (std::size_t k = 0; k < raw.coeffs().size(); ++k) {
    const BigRat& a = raw.coeffs()[k];
    if (a == 0) continue;
    BigInt scaled = a.get_num() * (den / a.get_den());
    detail::accumulate(c, power(k), scaled);
  }
  return CycNum(shared_from_this(), std::move(c), den);
}

inline void CyclotomicField::accumulate_power(std::vector<BigInt>& out, std::uint64_t k, const BigInt& c) const {
  detail::accumulate(out, power(k), c);
}

/// Image of a under zeta_m -> zeta_m^k.
inline CycNum apply_aut(const CycAut& s, const CycNum& a) { return a.apply(s); }

inline bool is_fixed_by(const CycNum& a, std::span<const CycAut> gens) {
  for (const auto& s : gens) {
    if (a.apply(s) != a) return false;
  }
  return true;
}

inline CycNum operator/(const CycNum& a, const CycNum& b) { return a * b.inv(); }

}  // namespace p3ext
