#pragma once

#include <cstdint>
#include <string_view>

#include "cyclotomic.hpp"
#include "error.hpp"
#include "tower.hpp"

namespace p3ext {

/// Which non-abelian p^3 group a candidate element is meant to induce.
enum class Construction { Heisenberg, Semidirect };

constexpr std::string_view to_string(Construction c) {
  return c == Construction::Heisenberg ? "heisenberg" : "semidirect";
}

inline CycNum norm_L_over_K(const Tower& t, const CycNum& x) {
  require(t.membership(x, SubfieldTag::L), ErrorCode::NotInL, "argument of Nr_{L/K} is not in L");
  CycNum acc = x, y = x;
  for (std::uint64_t i = 1; i < t.p(); ++i) {
    y = y.apply(t.sigma());
    acc *= y;
  }
  require(t.membership(acc, SubfieldTag::K), ErrorCode::ResultNotInK, "Nr_{L/K} landed outside K");
  return acc;
}

inline BigRat norm_K_over_Q(const Tower& t, const CycNum& g) {
  require(t.membership(g, SubfieldTag::K), ErrorCode::NotInK, "argument of Nr_{K/Q} is not in K");
  CycNum acc = g, y = g;
  for (std::uint64_t j = 1; j + 1 < t.p(); ++j) {
    y = y.apply(t.tau());
    acc *= y;
  }
  require(acc.is_rational(), ErrorCode::Internal, "Nr_{K/Q} is not rational");
  return acc.constant_term();
}

/// Nr_{L/Q}, computed through K and cross-checked against the product of
/// all p(p-1) conjugates.
inline BigRat norm_L_over_Q(const Tower& t, const CycNum& x) {
  BigRat via_k = norm_K_over_Q(t, norm_L_over_K(t, x));
  CycNum full = t.one(), row = x;
  for (std::uint64_t j = 0; j + 1 < t.p(); ++j) {
    CycNum y = row;
    for (std::uint64_t i = 0; i < t.p(); ++i) {
      full *= y;
      y = y.apply(t.sigma());
    }
    row = row.apply(t.tau());
  }
  require(full.is_rational() && full.constant_term() == via_k, ErrorCode::Internal,
          "norm through K disagrees with the full conjugate product");
  return via_k;
}

/// Exponent e^{k} as a signed integer (e may be -1).
inline std::int64_t e_power(const Tower& t, std::uint64_t k) {
  std::int64_t r = 1;
  for (std::uint64_t i = 0; i < k; ++i) r *= t.e();
  return r;
}

/// Phi(y) = prod_{j=0}^{p-2} tau-bar^j(y)^{e^{p-2-j}}; the same formula is
/// the restriction to K.
inline CycNum phi(const Tower& t, const CycNum& y) {
  require(!y.is_zero(), ErrorCode::DivisionByZero, "Phi of zero");
  CycNum acc = t.one(), conj = y;
  for (std::uint64_t j = 0; j + 1 < t.p(); ++j) {
    acc *= conj.pow(e_power(t, t.p() - 2 - j));
    conj = conj.apply(t.tau());
  }
  return acc;
}

/// beta = prod_{i=0}^{p-2} sigma-bar^i(x)^{p-1-i}.
inline CycNum beta(const Tower& t, const CycNum& x) {
  require(t.membership(x, SubfieldTag::L), ErrorCode::NotInL, "beta needs x in L");
  CycNum acc = t.one(), conj = x;
  for (std::uint64_t i = 0; i + 1 < t.p(); ++i) {
    acc *= conj.pow(static_cast<std::int64_t>(t.p() - 1 - i));
    conj = conj.apply(t.sigma());
  }
  return acc;
}

/// b(x) = Phi(Nr_{L/K}(x)) for the Heisenberg construction and
/// Phi(zeta_p Nr_{L/K}(x)) for the semidirect one.
inline CycNum compute_b(const Tower& t, const CycNum& x, Construction variant) {
  require(!x.is_zero(), ErrorCode::DivisionByZero, "b(0)");
  CycNum g = norm_L_over_K(t, x);
  if (variant == Construction::Semidirect) g *= t.zp();
  CycNum b = phi(t, g);
  require(t.membership(b, SubfieldTag::K), ErrorCode::ResultNotInK, "b(x) landed outside K");
  return b;
}

}  // namespace p3ext
