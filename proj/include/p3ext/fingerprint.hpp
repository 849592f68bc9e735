#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "builder.hpp"
#include "error.hpp"
#include "numtheory.hpp"
#include "poly.hpp"

namespace p3ext {

namespace zp {

// Dense polynomials over F_q, ascending coefficients, no trailing zeros.
using Vec = std::vector<std::uint64_t>;

inline void trim(Vec& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline long deg(const Vec& a) { return static_cast<long>(a.size()) - 1; }

inline Vec sub(Vec a, const Vec& b, std::uint64_t q) {
  if (b.size() > a.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + q - b[i]) % q;
  trim(a);
  return a;
}

inline Vec mul(const Vec& a, const Vec& b, std::uint64_t q) {
  if (a.empty() || b.empty()) return {};
  Vec out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = (out[i + j] + mulmod(a[i], b[j], q)) % q;
  }
  trim(out);
  return out;
}

/// Quotient and remainder by a nonzero divisor.
inline std::pair<Vec, Vec> divmod(Vec a, const Vec& b, std::uint64_t q) {
  require(!b.empty(), ErrorCode::DivisionByZero, "division by zero polynomial mod q");
  if (a.size() < b.size()) return {{}, a};
  const std::uint64_t lead_inv = invmod(b.back(), q);
  Vec quo(a.size() - b.size() + 1, 0);
  for (std::size_t i = quo.size(); i-- > 0;) {
    std::uint64_t f = mulmod(a[i + b.size() - 1], lead_inv, q);
    quo[i] = f;
    if (!f) continue;
    for (std::size_t j = 0; j < b.size(); ++j) a[i + j] = (a[i + j] + q - mulmod(f, b[j], q)) % q;
  }
  a.resize(b.size() - 1);
  trim(a);
  trim(quo);
  return {quo, a};
}

inline Vec rem(const Vec& a, const Vec& b, std::uint64_t q) { return divmod(a, b, q).second; }

inline Vec make_monic(Vec a, std::uint64_t q) {
  if (a.empty()) return a;
  const std::uint64_t inv = invmod(a.back(), q);
  for (auto& c : a) c = mulmod(c, inv, q);
  return a;
}

inline Vec gcd(Vec a, Vec b, std::uint64_t q) {
  while (!b.empty()) {
    Vec r = rem(a, b, q);
    a = std::move(b);
    b = std::move(r);
  }
  return make_monic(std::move(a), q);
}

inline Vec derivative(const Vec& a, std::uint64_t q) {
  if (a.size() <= 1) return {};
  Vec d(a.size() - 1);
  for (std::size_t i = 1; i < a.size(); ++i) d[i - 1] = mulmod(a[i], i % q, q);
  trim(d);
  return d;
}

/// base^e mod (f, q) by repeated squaring.
inline Vec powmod(Vec base, std::uint64_t e, const Vec& f, std::uint64_t q) {
  Vec r{1};
  base = rem(base, f, q);
  while (e) {
    if (e & 1) r = rem(mul(r, base, q), f, q);
    e >>= 1;
    if (e) base = rem(mul(base, base, q), f, q);
  }
  return r;
}

inline Vec reduce(const RatPoly& f, std::uint64_t q) {
  Vec out;
  for (const auto& c : f.coeffs()) out.push_back(rat_mod(c, q));
  trim(out);
  return out;
}

}  // namespace zp

/// Sorted irreducible-factor degrees of f mod q, or nullopt when f mod q is
/// not squarefree. Throws BadPrime when q divides a coefficient denominator.
inline std::optional<std::vector<int>> factor_degrees_mod_q(const RatPoly& f, std::uint64_t q) {
  require(f.is_monic(), ErrorCode::Internal, "factor_degrees_mod_q needs a monic polynomial");
  require(is_prime_u64(q), ErrorCode::BadPrime, std::to_string(q) + " is not prime");
  zp::Vec g = zp::reduce(f, q);
  if (zp::deg(zp::gcd(g, zp::derivative(g, q), q)) != 0) return std::nullopt;
  std::vector<int> degrees;
  zp::Vec h{0, 1};
  const zp::Vec x{0, 1};
  for (long d = 1; 2 * d <= zp::deg(g); ++d) {
    h = zp::powmod(h, q, g, q);
    zp::Vec common = zp::gcd(g, zp::sub(h, x, q), q);
    if (zp::deg(common) > 0) {
      for (long k = 0; k < zp::deg(common) / d; ++k) degrees.push_back(static_cast<int>(d));
      g = zp::divmod(g, common, q).first;
      h = zp::rem(h, g, q);
    }
  }
  if (zp::deg(g) > 0) degrees.push_back(static_cast<int>(zp::deg(g)));
  std::sort(degrees.begin(), degrees.end());
  return degrees;
}

enum class FingerprintVerdict { ConsistentWithExponent3, ContainsOrder9Frobenius, Inconclusive };

constexpr std::string_view to_string(FingerprintVerdict v) {
  switch (v) {
    case FingerprintVerdict::ConsistentWithExponent3: return "ConsistentWithExponent3";
    case FingerprintVerdict::ContainsOrder9Frobenius: return "ContainsOrder9Frobenius";
    case FingerprintVerdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

/// Clean samples needed before an exponent-3 verdict; an order-9 class of
/// density >= 2/9 then escapes with probability < (7/9)^50 < 1e-5.
inline constexpr int kMinCleanSamples = 50;

struct GroupFingerprint {
  int sampled_primes = 0;
  int skipped = 0;
  std::uint64_t start = 2;
  std::map<std::vector<int>, int> patterns;
  FingerprintVerdict verdict = FingerprintVerdict::Inconclusive;

  bool saw_pattern(const std::vector<int>& pattern) const { return patterns.count(pattern) != 0; }

  bool parts_within(std::initializer_list<int> allowed) const {
    for (const auto& [pat, n] : patterns) {
      for (int part : pat) {
        if (std::find(allowed.begin(), allowed.end(), part) == allowed.end()) return false;
      }
    }
    return true;
  }

  double fraction(const std::vector<int>& pattern) const {
    auto it = patterns.find(pattern);
    return sampled_primes == 0 || it == patterns.end() ? 0.0 : static_cast<double>(it->second) / sampled_primes;
  }
};

inline std::string pattern_key(const std::vector<int>& pattern) {
  std::string out;
  for (std::size_t i = 0; i < pattern.size(); ++i) out += (i ? "," : "") + std::to_string(pattern[i]);
  return out;
}

inline GroupFingerprint survey(const RatPoly& f, int budget, std::uint64_t start = 2) {
  GroupFingerprint fp;
  fp.start = start;
  const long cap = 20L * budget + 1000;
  std::uint64_t q = next_prime_u64(start);
  for (long tried = 0; fp.sampled_primes < budget && tried < cap; ++tried, q = next_prime_u64(q + 1)) {
    bool bad = false;
    for (const auto& c : f.coeffs()) {
      if (mpz_fdiv_ui(c.get_den_mpz_t(), q) == 0) bad = true;
    }
    if (bad) {
      ++fp.skipped;
      continue;
    }
    auto degs = factor_degrees_mod_q(f, q);
    if (!degs) {
      ++fp.skipped;
      continue;
    }
    ++fp.patterns[*degs];
    ++fp.sampled_primes;
  }
  if (fp.saw_pattern({9})) {
    fp.verdict = FingerprintVerdict::ContainsOrder9Frobenius;
  } else if (fp.sampled_primes >= kMinCleanSamples && fp.parts_within({1, 3})) {
    fp.verdict = FingerprintVerdict::ConsistentWithExponent3;
  }
  return fp;
}

enum class Discrimination { Supported, Refuted, Inconclusive };

constexpr std::string_view to_string(Discrimination d) {
  switch (d) {
    case Discrimination::Supported: return "Supported";
    case Discrimination::Refuted: return "Refuted";
    case Discrimination::Inconclusive: return "Inconclusive";
  }
  return "?";
}

/// H27 has exponent 3; C9xC3 has elements of order 1, 3 and 9 only.
inline Discrimination discriminate(const GroupFingerprint& fp, Group claimed) {
  if (claimed == Group::H27) {
    if (fp.saw_pattern({9}) || !fp.parts_within({1, 3})) return Discrimination::Refuted;
    return fp.sampled_primes >= kMinCleanSamples ? Discrimination::Supported : Discrimination::Inconclusive;
  }
  if (!fp.parts_within({1, 3, 9})) return Discrimination::Refuted;
  return fp.saw_pattern({9}) ? Discrimination::Supported : Discrimination::Inconclusive;
}

}  // namespace p3ext
