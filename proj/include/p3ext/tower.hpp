#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cyclotomic.hpp"
#include "error.hpp"
#include "numtheory.hpp"
#include "poly.hpp"

namespace p3ext {

/// Gaussian period: sum of zeta_r^{g^{jk}}, j = 0 .. (r-1)/k - 1, inside a
/// field whose conductor is a multiple of r.
inline CycNum gaussian_period(const FieldPtr& field, std::uint64_t r, std::uint64_t k, std::uint64_t g) {
  require(k >= 1 && (r - 1) % k == 0, ErrorCode::NotDivisible,
          std::to_string(k) + " does not divide " + std::to_string(r - 1));
  require(field->conductor() % r == 0, ErrorCode::ConductorMismatch, "field does not contain zeta_r");
  const std::uint64_t step = field->conductor() / r;  // zeta_r = zeta_m^step
  const std::uint64_t gk = powmod(g, k, r);
  std::vector<BigInt> c(field->degree());
  std::uint64_t e = 1;
  for (std::uint64_t j = 0; j < (r - 1) / k; ++j) {
    field->accumulate_power(c, e * step, BigInt(1));
    e = mulmod(e, gk, r);
  }
  return CycNum(field, std::move(c));
}

/// Standalone period in Q(zeta_r).
inline CycNum gaussian_period(std::uint64_t r, std::uint64_t k, std::uint64_t g) {
  return gaussian_period(CyclotomicField::make(r), r, k, g);
}

/// Monic polynomial with the given roots; every coefficient must come out
/// rational and the roots must be pairwise distinct.
inline RatPoly conjugate_product(const std::vector<CycNum>& roots, ErrorCode on_repeat) {
  require(!roots.empty(), ErrorCode::Internal, "no conjugates");
  for (std::size_t i = 0; i < roots.size(); ++i) {
    for (std::size_t j = i + 1; j < roots.size(); ++j) {
      require(roots[i] != roots[j], on_repeat, "conjugates " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
    }
  }
  const auto& field = roots.front().field();
  // coefficients of prod (X - root), ascending
  std::vector<CycNum> acc{field->one()};
  for (const auto& root : roots) {
    std::vector<CycNum> next(acc.size() + 1, field->zero());
    for (std::size_t i = 0; i < acc.size(); ++i) {
      next[i + 1] += acc[i];
      next[i] -= acc[i] * root;
    }
    acc = std::move(next);
  }
  std::vector<BigRat> out;
  for (std::size_t i = 0; i < acc.size(); ++i) {
    require(acc[i].is_rational(), ErrorCode::Internal,
            "symmetric function of degree " + std::to_string(acc.size() - 1 - i) + " is not rational");
    out.push_back(acc[i].constant_term());
  }
  return RatPoly(std::move(out));
}

enum class SubfieldTag { Q, K, F, L, Full };

constexpr std::string_view to_string(SubfieldTag t) {
  switch (t) {
    case SubfieldTag::Q: return "Q";
    case SubfieldTag::K: return "K";
    case SubfieldTag::F: return "F";
    case SubfieldTag::L: return "L";
    case SubfieldTag::Full: return "Full";
  }
  return "?";
}

/// The fixed context Q < F, K < L inside Q(zeta_{pr}).
class Tower {
 public:
  std::uint64_t p() const { return p_; }
  std::uint64_t r() const { return r_; }
  std::uint64_t m() const { return p_ * r_; }
  /// Primitive root mod p defining Phi, or -1 (builder mode).
  std::int64_t e() const { return e_; }
  bool builder_mode() const { return e_ == -1; }
  std::uint64_t m_r() const { return m_r_; }
  std::uint64_t c() const { return c_; }

  const FieldPtr& field() const { return field_; }
  const CycNum& delta() const { return *delta_; }
  const CycAut& sigma() const { return *sigma_; }
  const CycAut& tau() const { return *tau_; }

  CycNum zp() const { return field_->zeta(static_cast<std::int64_t>(r_)); }
  CycNum zr() const { return field_->zeta(static_cast<std::int64_t>(p_)); }
  CycNum one() const { return field_->one(); }
  CycNum from_int(long v) const { return field_->from_rat(v); }

  /// Generators of the subgroup of (Z/m)* fixing the tagged subfield.
  std::vector<CycAut> fixing_generators(SubfieldTag tag) const {
    const auto mr_p = powmod(m_r_, p_, r_);
    switch (tag) {
      case SubfieldTag::Full: return {};
      case SubfieldTag::L: return {residue(1, mr_p), sigma().pow(p_)};
      case SubfieldTag::K: return {residue(1, m_r_)};
      case SubfieldTag::F: return {residue(e_root(), 1), residue(1, mr_p)};
      case SubfieldTag::Q: return {residue(e_root(), 1), residue(1, m_r_)};
    }
    return {};
  }

  bool membership(const CycNum& a, SubfieldTag tag) const {
    require(a.conductor() == m(), ErrorCode::ConductorMismatch, "element not in this tower's field");
    auto gens = fixing_generators(tag);
    return is_fixed_by(a, gens);
  }

  /// Automorphism with residues (a mod p, b mod r).
  CycAut residue(std::uint64_t a, std::uint64_t b) const {
    return CycAut(m(), static_cast<std::int64_t>(crt(a % p_, b % r_)));
  }

  /// The exponent by which tau-bar acts on zeta_p (e, or p-1 in builder mode).
  std::uint64_t e_root() const { return mod_u(e_, p_); }

  /// Coefficients (g_0 .. g_{p-2}) of a K-element in the basis zeta_p^a.
  std::vector<BigRat> k_coeffs(const CycNum& a) const {
    require(a.conductor() == m(), ErrorCode::ConductorMismatch, "element not in this tower's field");
    const std::uint64_t u = invmod(r_ % p_, p_), v = invmod(p_ % r_, r_);
    std::vector<std::vector<BigInt>> grid(p_, std::vector<BigInt>(r_));
    auto num = a.numerators();
    for (std::size_t i = 0; i < num.size(); ++i) {
      if (num[i] == 0) continue;
      grid[mulmod(i, u, p_)][mulmod(i, v, r_)] += num[i];
    }
    for (auto& row : grid) {
      for (std::uint64_t b = 0; b + 1 < r_; ++b) row[b] -= row[r_ - 1];
      row[r_ - 1] = 0;
    }
    for (std::uint64_t a2 = 0; a2 + 1 < p_; ++a2) {
      for (std::uint64_t b = 0; b < r_; ++b) grid[a2][b] -= grid[p_ - 1][b];
    }
    std::vector<BigRat> out;
    for (std::uint64_t a2 = 0; a2 + 1 < p_; ++a2) {
      for (std::uint64_t b = 1; b < r_; ++b) {
        require(grid[a2][b] == 0, ErrorCode::NotInK, "element has a zeta_r component");
      }
      out.push_back(make_rat(grid[a2][0], a.denominator()));
    }
    return out;
  }

  /// Inverse of k_coeffs.
  CycNum from_k_coeffs(const std::vector<BigRat>& g) const {
    CycNum out = field_->zero();
    CycNum z = zp(), pw = one();
    for (const auto& c : g) {
      out += c * pw;
      pw *= z;
    }
    return out;
  }

  /// K-element written in zp ("-7*zp", "3 - zp").
  std::string format_k(const CycNum& a) const { return to_text(RatPoly(k_coeffs(a)), "zp"); }

  friend Tower build_tower(std::uint64_t p, std::uint64_t r, std::optional<std::int64_t> e,
                           std::optional<std::uint64_t> c);

 private:
  Tower() = default;

  std::uint64_t crt(std::uint64_t a, std::uint64_t b) const {
    // x = a + p * t with x = b (mod r)
    std::uint64_t t = mulmod((b + r_ - a % r_) % r_, invmod(p_ % r_, r_), r_);
    return a + p_ * t;
  }

  std::uint64_t p_ = 0, r_ = 0;
  std::int64_t e_ = 0;
  std::uint64_t m_r_ = 0, c_ = 0;
  FieldPtr field_;
  std::optional<CycNum> delta_;
  std::optional<CycAut> sigma_, tau_;
};

/// Generator choices matching the worked examples. (3, 73) is absent on
/// purpose: 24 is a cube mod 73, so zeta_73 -> zeta_73^24 fixes the period.
inline std::optional<std::uint64_t> pinned_sigma_exponent(std::uint64_t p, std::uint64_t r) {
  if (p == 3 && r == 7) return 2;
  if (p == 3 && r == 19) return 6;
  if (p == 5 && r == 11) return 2;
  return std::nullopt;
}

inline bool generates_period_quotient(std::uint64_t c, std::uint64_t p, std::uint64_t r) {
  return c % r != 0 && powmod(c, (r - 1) / p, r) != 1;
}

inline Tower build_tower(std::uint64_t p, std::uint64_t r, std::optional<std::int64_t> e = std::nullopt,
                         std::optional<std::uint64_t> c = std::nullopt) {
  require(p >= 3 && is_prime_u64(p), ErrorCode::CongruenceViolation, "p = " + std::to_string(p) + " is not an odd prime");
  require(is_prime_u64(r), ErrorCode::CongruenceViolation, "r = " + std::to_string(r) + " is not prime");
  require(r % p == 1, ErrorCode::CongruenceViolation, "r = " + std::to_string(r) + " is not 1 mod " + std::to_string(p));

  Tower t;
  t.p_ = p;
  t.r_ = r;
  if (e) {
    if (*e == -1) {
      require(p == 3, ErrorCode::BadGenerator, "e = -1 only generates Gal(K/Q) for p = 3");
    } else {
      require(is_primitive_root(mod_u(*e, p), p), ErrorCode::BadGenerator,
              std::to_string(*e) + " is not a primitive root mod " + std::to_string(p));
    }
    t.e_ = *e;
  } else {
    t.e_ = static_cast<std::int64_t>(smallest_primitive_root(p));
  }
  t.m_r_ = smallest_primitive_root(r);
  if (c) {
    require(generates_period_quotient(*c, p, r), ErrorCode::BadGenerator,
            std::to_string(*c) + " is a " + ordinal(p) + " power residue mod " + std::to_string(r));
    t.c_ = *c % r;
  } else if (auto pin = pinned_sigma_exponent(p, r)) {
    t.c_ = *pin;
  } else {
    std::uint64_t cand = 2;
    while (!generates_period_quotient(cand, p, r)) ++cand;
    t.c_ = cand;
  }

  t.field_ = CyclotomicField::make(p * r);
  t.sigma_ = t.residue(1, t.c_);
  t.tau_ = t.residue(t.e_root(), 1);
  t.delta_ = gaussian_period(t.field_, r, p, t.m_r_);

  const CycNum& d = *t.delta_;
  require(d.apply(*t.sigma_) != d, ErrorCode::BadGenerator, "sigma-bar fixes the period");
  require(d.apply(t.sigma_->pow(p)) == d, ErrorCode::Internal, "sigma-bar^p moves the period");
  require(d.apply(*t.tau_) == d, ErrorCode::Internal, "tau-bar moves the period");
  return t;
}

inline bool membership(const Tower& t, const CycNum& a, SubfieldTag tag) { return t.membership(a, tag); }

/// The p conjugates sigma-bar^i(a), i = 0..p-1.
inline std::vector<CycNum> sigma_orbit(const Tower& t, const CycNum& a) {
  std::vector<CycNum> out{a};
  for (std::uint64_t i = 1; i < t.p(); ++i) out.push_back(out.back().apply(t.sigma()));
  return out;
}

/// Minimal polynomial of the period over Q; distinct conjugates certify
/// irreducibility.
inline RatPoly period_min_poly(const Tower& t) {
  return conjugate_product(sigma_orbit(t, t.delta()), ErrorCode::DegenerateConjugates);
}

}  // namespace p3ext
