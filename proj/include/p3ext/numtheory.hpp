#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"

namespace p3ext {

using BigInt = mpz_class;
using BigRat = mpq_class;

inline BigRat make_rat(const BigInt& num, const BigInt& den = 1) {
  require(den != 0, ErrorCode::DivisionByZero, "zero denominator");
  BigRat q(num, den);
  q.canonicalize();
  return q;
}

inline std::string to_string(const BigRat& q) { return q.get_str(); }
inline std::string to_string(const BigInt& z) { return z.get_str(); }

/// "3rd", "5th", "23rd".
inline std::string ordinal(std::uint64_t n) {
  const char* suffix = "th";
  if (n % 100 < 11 || n % 100 > 13) {
    if (n % 10 == 1) suffix = "st";
    if (n % 10 == 2) suffix = "nd";
    if (n % 10 == 3) suffix = "rd";
  }
  return std::to_string(n) + suffix;
}

// ---------------------------------------------------------------------------
// 64-bit modular arithmetic

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

/// Canonical residue of a signed value.
inline std::uint64_t mod_u(std::int64_t a, std::uint64_t m) {
  std::int64_t r = a % static_cast<std::int64_t>(m);
  return static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(m) : r);
}

inline std::uint64_t invmod(std::uint64_t a, std::uint64_t m) {
  std::int64_t t = 0, nt = 1;
  std::int64_t r = static_cast<std::int64_t>(m), nr = static_cast<std::int64_t>(a % m);
  while (nr != 0) {
    std::int64_t q = r / nr;
    std::tie(t, nt) = std::make_pair(nt, t - q * nt);
    std::tie(r, nr) = std::make_pair(nr, r - q * nr);
  }
  require(r == 1, ErrorCode::DivisionByZero, "no inverse of " + std::to_string(a) + " mod " + std::to_string(m));
  return mod_u(t, m);
}

/// Deterministic Miller-Rabin; the base set is exact for all 64-bit n.
inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2, 325, 9375, 28178, 450775, 9780504, 1795265022}) {
    std::uint64_t x = powmod(a % n, d, n);
    if (x == 0 || x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s && composite; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) composite = false;
    }
    if (composite) return false;
  }
  return true;
}

/// Exact below 2^64; BPSW plus extra Miller-Rabin rounds (via GMP) above.
inline bool is_prime(const BigInt& n) {
  if (n < 2) return false;
  if (n.fits_ulong_p()) return is_prime_u64(n.get_ui());
  return mpz_probab_prime_p(n.get_mpz_t(), 30) != 0;
}

inline std::uint64_t next_prime_u64(std::uint64_t n) {
  if (n <= 2) return 2;
  if ((n & 1) == 0) ++n;
  while (!is_prime_u64(n)) n += 2;
  return n;
}

inline std::vector<std::uint64_t> distinct_prime_factors_u64(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

inline std::uint64_t euler_phi(std::uint64_t n) {
  std::uint64_t r = n;
  for (auto q : distinct_prime_factors_u64(n)) r = r / q * (q - 1);
  return r;
}

inline std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) {
  while (b) {
    a %= b;
    std::swap(a, b);
  }
  return a;
}

/// Multiplicative order of a modulo n (gcd(a, n) = 1).
inline std::uint64_t mult_order(std::uint64_t a, std::uint64_t n) {
  require(gcd_u64(a % n, n) == 1, ErrorCode::Internal, "order of non-unit");
  std::uint64_t ord = euler_phi(n);
  for (auto q : distinct_prime_factors_u64(ord)) {
    while (ord % q == 0 && powmod(a, ord / q, n) == 1) ord /= q;
  }
  return ord;
}

inline bool is_primitive_root(std::uint64_t g, std::uint64_t q) {
  if (q == 2) return g % 2 == 1;
  if (g % q == 0) return false;
  for (auto f : distinct_prime_factors_u64(q - 1)) {
    if (powmod(g, (q - 1) / f, q) == 1) return false;
  }
  return true;
}

/// Smallest primitive root modulo the prime q.
inline std::uint64_t smallest_primitive_root(std::uint64_t q) {
  for (std::uint64_t g = 1; g < q; ++g) {
    if (is_primitive_root(g, q)) return g;
  }
  fail(ErrorCode::Internal, "no primitive root mod " + std::to_string(q));
}

// ---------------------------------------------------------------------------
// Integer factorization: trial division to 10^6, then Brent-Pollard rho.

inline const std::vector<std::uint32_t>& small_primes() {
  static const std::vector<std::uint32_t> primes = [] {
    constexpr std::uint32_t kLimit = 1000000;
    std::vector<bool> composite(kLimit + 1, false);
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 2; i <= kLimit; ++i) {
      if (composite[i]) continue;
      out.push_back(i);
      for (std::uint64_t j = static_cast<std::uint64_t>(i) * i; j <= kLimit; j += i) composite[j] = true;
    }
    return out;
  }();
  return primes;
}

inline constexpr std::uint64_t kTrialDivisionBound = 1000000;

namespace detail {

// One Brent cycle-finding run; returns a nontrivial factor or nullopt.
// `budget` is shared across runs and counts down.
inline std::optional<BigInt> brent_rho(const BigInt& n, unsigned long c, std::uint64_t& budget) {
  BigInt y = 2, x, ys, q = 1, g = 1, t;
  std::uint64_t r = 1;
  const std::uint64_t m = 128;
  auto f = [&](BigInt& v) {
    v = v * v + c;
    mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
  };
  while (g == 1) {
    x = y;
    for (std::uint64_t i = 0; i < r; ++i) f(y);
    std::uint64_t k = 0;
    while (k < r && g == 1) {
      ys = y;
      for (std::uint64_t i = 0; i < std::min(m, r - k); ++i) {
        f(y);
        t = x - y;
        q = q * abs(t);
        mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
      }
      mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
      k += m;
      if (budget < m) {
        budget = 0;
        return std::nullopt;
      }
      budget -= m;
    }
    r *= 2;
  }
  if (g == n) {
    // backtrack one step at a time
    do {
      f(ys);
      t = x - ys;
      t = abs(t);
      mpz_gcd(g.get_mpz_t(), t.get_mpz_t(), n.get_mpz_t());
    } while (g == 1);
  }
  if (g == n) return std::nullopt;
  return g;
}

inline void factor_rec(const BigInt& n, std::map<BigInt, long>& out, std::uint64_t& budget) {
  if (n == 1) return;
  if (is_prime(n)) {
    out[n] += 1;
    return;
  }
  for (unsigned long c = 1; c < 64 && budget > 0; ++c) {
    if (auto d = brent_rho(n, c, budget)) {
      factor_rec(*d, out, budget);
      factor_rec(BigInt(n / *d), out, budget);
      return;
    }
  }
  fail(ErrorCode::FactorizationIncomplete, "composite cofactor " + n.get_str() + " resisted Pollard rho");
}

}  // namespace detail

/// Prime factorization of |n| (n != 0) as prime -> exponent. `rho_budget`
/// caps Brent iterations over the whole call.
inline std::map<BigInt, long> factor_integer(BigInt n, std::uint64_t rho_budget = 4000000) {
  require(n != 0, ErrorCode::DivisionByZero, "factor of zero");
  n = abs(n);
  std::map<BigInt, long> out;
  for (std::uint32_t p : small_primes()) {
    if (n == 1) break;
    if (BigInt(p) * p > n) break;
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      out[p] += 1;
      n /= p;
    }
  }
  if (n == 1) return out;
  if (n <= BigInt(static_cast<unsigned long>(kTrialDivisionBound)) * kTrialDivisionBound || is_prime(n)) {
    // every prime factor <= 10^6 is already gone, so the cofactor is prime
    out[n] += 1;
    return out;
  }
  detail::factor_rec(n, out, rho_budget);
  return out;
}

/// q-adic valuation of a nonzero integer.
inline long valuation(BigInt n, const BigInt& q) {
  require(n != 0, ErrorCode::DivisionByZero, "valuation of zero");
  long v = 0;
  while (mpz_divisible_p(n.get_mpz_t(), q.get_mpz_t())) {
    n /= q;
    ++v;
  }
  return v;
}

inline BigInt pow_int(const BigInt& b, unsigned long e) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

/// Residue of a rational modulo the prime q (q must not divide the denominator).
inline std::uint64_t rat_mod(const BigRat& x, std::uint64_t q) {
  BigInt qq(static_cast<unsigned long>(q));
  BigInt num = x.get_num() % qq;
  if (num < 0) num += qq;
  BigInt den = x.get_den() % qq;
  require(den != 0, ErrorCode::BadPrime, std::to_string(q) + " divides a denominator");
  return mulmod(num.get_ui(), invmod(den.get_ui(), q), q);
}

}  // namespace p3ext
