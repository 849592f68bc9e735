#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cyclotomic.hpp"
#include "error.hpp"
#include "numtheory.hpp"
#include "phinorm.hpp"
#include "tower.hpp"

namespace p3ext {

// ---------------------------------------------------------------------------
// Norm factorization

struct NormFactorization {
  int sign = 1;
  /// (prime, exponent); exponents are negative for denominator primes.
  std::vector<std::pair<BigInt, long>> factors;

  BigRat value() const {
    BigRat v = sign;
    for (const auto& [q, l] : factors) {
      BigInt pw = pow_int(q, static_cast<unsigned long>(std::labs(l)));
      v = l > 0 ? BigRat(v * pw) : BigRat(v / pw);
    }
    return v;
  }

  long exponent_of(const BigInt& q) const {
    for (const auto& [f, l] : factors) {
      if (f == q) return l;
    }
    return 0;
  }

  /// "+13", "-3^2*7^2", "+1" for units.
  std::string to_string() const {
    std::string out = sign < 0 ? "-" : "+";
    if (factors.empty()) return out + "1";
    for (std::size_t i = 0; i < factors.size(); ++i) {
      if (i) out += "*";
      out += factors[i].first.get_str();
      if (factors[i].second != 1) out += "^" + std::to_string(factors[i].second);
    }
    return out;
  }
};

inline NormFactorization factor_norm(const BigRat& n) {
  require(n != 0, ErrorCode::DivisionByZero, "norm is zero");
  NormFactorization out;
  out.sign = n < 0 ? -1 : 1;
  std::map<BigInt, long> merged;
  for (const auto& [q, l] : factor_integer(n.get_num())) merged[q] += l;
  for (const auto& [q, l] : factor_integer(n.get_den())) merged[q] -= l;
  for (const auto& [q, l] : merged) out.factors.emplace_back(q, l);
  return out;
}

// ---------------------------------------------------------------------------
// Prime classes

enum class PrimeClass { RamifiedP, RamifiedR, NotSplitInK, SplitKNotF, SplitCompletelyInL };

constexpr std::string_view to_string(PrimeClass c) {
  switch (c) {
    case PrimeClass::RamifiedP: return "ramified_p";
    case PrimeClass::RamifiedR: return "ramified_r";
    case PrimeClass::NotSplitInK: return "not_split_K";
    case PrimeClass::SplitKNotF: return "split_K_inert_F";
    case PrimeClass::SplitCompletelyInL: return "split_completely_L";
  }
  return "?";
}

/// Depends only on q mod p and q mod r.
inline PrimeClass classify_prime(const Tower& t, std::uint64_t q) {
  if (q == t.p()) return PrimeClass::RamifiedP;
  if (q == t.r()) return PrimeClass::RamifiedR;
  if (q % t.p() != 1) return PrimeClass::NotSplitInK;
  if (powmod(q, (t.r() - 1) / t.p(), t.r()) != 1) return PrimeClass::SplitKNotF;
  return PrimeClass::SplitCompletelyInL;
}

inline PrimeClass classify_prime(const Tower& t, const BigInt& q) {
  if (q.fits_ulong_p()) return classify_prime(t, static_cast<std::uint64_t>(q.get_ui()));
  // only the residues matter
  std::uint64_t qp = mpz_fdiv_ui(q.get_mpz_t(), t.p());
  std::uint64_t qr = mpz_fdiv_ui(q.get_mpz_t(), t.r());
  if (qp != 1) return PrimeClass::NotSplitInK;
  if (powmod(qr, (t.r() - 1) / t.p(), t.r()) != 1) return PrimeClass::SplitKNotF;
  return PrimeClass::SplitCompletelyInL;
}

/// Roots of Phi_p mod q in tau-order: a_1 is the smallest root and
/// a_{j+1} = a_j^{e'} with e e' = 1 (mod p), so the evaluation maps follow
/// tau P_j = P_{j+1}.
inline std::vector<std::uint64_t> split_roots(const Tower& t, std::uint64_t q) {
  require(q != t.p() && q % t.p() == 1, ErrorCode::NoRoots,
          "Phi_" + std::to_string(t.p()) + " has no simple roots mod " + std::to_string(q));
  const std::uint64_t g = smallest_primitive_root(q);
  const std::uint64_t zeta = powmod(g, (q - 1) / t.p(), q);
  std::uint64_t a1 = q;
  for (std::uint64_t i = 1; i < t.p(); ++i) a1 = std::min(a1, powmod(zeta, i, q));
  const std::uint64_t e_inv = invmod(t.e_root(), t.p());
  std::vector<std::uint64_t> out{a1};
  for (std::uint64_t j = 1; j + 1 < t.p(); ++j) out.push_back(powmod(out.back(), e_inv, q));
  return out;
}

/// Newton lift of a simple root of Phi_p mod q to a root mod q^precision.
inline BigInt hensel_lift(std::uint64_t p, std::uint64_t q, std::uint64_t root, unsigned long precision) {
  BigInt qq(static_cast<unsigned long>(q));
  BigInt a(static_cast<unsigned long>(root));
  auto eval = [&](const BigInt& x, const BigInt& mod, BigInt& f, BigInt& df) {
    f = 0;
    df = 0;
    for (std::uint64_t k = p; k-- > 0;) {
      df = (df * x + f) % mod;
      f = (f * x + 1) % mod;
    }
  };
  unsigned long have = 1;
  BigInt f, df, inv;
  while (have < precision) {
    have = std::min(precision, 2 * have);
    BigInt mod = pow_int(qq, have);
    eval(a, mod, f, df);
    require(mpz_invert(inv.get_mpz_t(), df.get_mpz_t(), mod.get_mpz_t()) != 0, ErrorCode::Internal,
            "Phi_p' vanishes at the root");
    a = (a - f * inv) % mod;
    if (a < 0) a += mod;
  }
  return a;
}

inline void require_integral_k(const std::vector<BigRat>& g) {
  for (const auto& c : g) {
    require(c.get_den() == 1, ErrorCode::NonIntegralInput, "element of K has non-integral coefficients");
  }
}

/// v_P(gamma) for the degree-1 prime P = (q, zeta_p - a) of K. `total` is
/// an upper bound for the valuation (v_q of the norm).
inline long hensel_valuation(const Tower& t, const CycNum& gamma, std::uint64_t q, std::uint64_t a, long total) {
  require(!gamma.is_zero(), ErrorCode::DivisionByZero, "valuation of zero");
  std::vector<BigRat> g = t.k_coeffs(gamma);
  require_integral_k(g);
  const unsigned long start = static_cast<unsigned long>(std::max(total, 0L)) + 1;
  const BigInt qq(static_cast<unsigned long>(q));
  for (unsigned long prec = start; prec <= 4 * start; prec *= 2) {
    BigInt mod = pow_int(qq, prec);
    BigInt root = hensel_lift(t.p(), q, a, prec);
    BigInt acc = 0;
    for (std::size_t k = g.size(); k-- > 0;) acc = (acc * root + g[k].get_num()) % mod;
    if (acc < 0) acc += mod;
    if (acc != 0) return valuation(acc, qq);
  }
  fail(ErrorCode::Internal, "valuation exceeds the precision cap at q = " + std::to_string(q));
}

/// Convenience overload: bound taken from the norm of gamma.
inline long hensel_valuation(const Tower& t, const CycNum& gamma, std::uint64_t q, std::uint64_t a) {
  BigRat n = norm_K_over_Q(t, gamma);
  require(n.get_den() == 1, ErrorCode::NonIntegralInput, "non-integral norm");
  return hensel_valuation(t, gamma, q, a, valuation(n.get_num(), BigInt(static_cast<unsigned long>(q))));
}

// ---------------------------------------------------------------------------
// chi

struct ChiReport {
  std::uint64_t q = 0;
  /// The root of Phi_p mod q defining P_1.
  std::uint64_t a1 = 0;
  std::vector<long> betas;
  std::int64_t chi = 0;
  std::uint64_t chi_mod_p = 0;
};

/// chi = e^{p-2} b_1 + e^{p-3} b_{p-1} + ... + e b_3 + b_2, i.e. the k-th
/// term pairs e^{p-2-k} with P_{1-k}.
inline std::int64_t chi_from_betas(const Tower& t, const std::vector<long>& betas) {
  const std::size_t n = betas.size();
  std::int64_t chi = 0;
  for (std::size_t k = 0; k < n; ++k) chi += e_power(t, t.p() - 2 - k) * betas[(n - k) % n];
  return chi;
}

/// `start` rotates the tau-cycle so that P_1 is the start-th root.
inline ChiReport chi_report(const Tower& t, const CycNum& gamma, std::uint64_t q, std::size_t start = 0, long total = -1) {
  require(classify_prime(t, q) == PrimeClass::SplitCompletelyInL, ErrorCode::WrongPrimeClass,
          std::to_string(q) + " does not split completely in L");
  if (total < 0) {
    BigRat n = norm_K_over_Q(t, gamma);
    require(n.get_den() == 1, ErrorCode::NonIntegralInput, "non-integral norm");
    total = valuation(n.get_num(), BigInt(static_cast<unsigned long>(q)));
  }
  auto roots = split_roots(t, q);
  std::rotate(roots.begin(), roots.begin() + static_cast<std::ptrdiff_t>(start % roots.size()), roots.end());
  ChiReport rep;
  rep.q = q;
  rep.a1 = roots.front();
  for (auto a : roots) rep.betas.push_back(hensel_valuation(t, gamma, q, a, total));
  rep.chi = chi_from_betas(t, rep.betas);
  rep.chi_mod_p = mod_u(rep.chi, t.p());
  return rep;
}

// ---------------------------------------------------------------------------
// Verdict

struct PrimeReport {
  BigInt q;
  long l = 0;
  PrimeClass cls = PrimeClass::NotSplitInK;
  /// Valuations at the primes of K above q, when q splits in K.
  std::vector<long> k_valuations;
  std::optional<ChiReport> chi;
};

struct CriterionVerdict {
  std::optional<CycNum> gamma;
  BigRat norm;
  NormFactorization factorization;
  std::vector<PrimeReport> per_prime;
  bool ideal_criterion_holds = false;
  bool heisenberg_ok = false;
  bool semidirect_ok = false;
  std::vector<std::string> notes;
};

namespace detail {

inline std::string count_word(long n) {
  static const char* words[] = {"zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine"};
  return n >= 0 && n < 10 ? words[n] : std::to_string(n);
}

inline std::string join_longs(const std::vector<long>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

}  // namespace detail

inline CriterionVerdict criterion_verdict(const Tower& t, const CycNum& x) {
  require(x.has_integer_coeffs(), ErrorCode::NonIntegralInput, "x must have integer coefficients");
  require(!x.is_zero(), ErrorCode::DivisionByZero, "x = 0 has norm 0");
  CriterionVerdict v;
  CycNum gamma = norm_L_over_K(t, x);
  v.gamma = gamma;
  v.norm = norm_L_over_Q(t, x);
  v.factorization = factor_norm(v.norm);
  const std::string P = ordinal(t.p());

  for (const auto& [q, l] : v.factorization.factors) {
    PrimeReport pr;
    pr.q = q;
    pr.l = l;
    pr.cls = classify_prime(t, q);
    const bool splits_in_k = pr.cls != PrimeClass::RamifiedP && mpz_fdiv_ui(q.get_mpz_t(), t.p()) == 1;
    if (splits_in_k) {
      require(q.fits_ulong_p(), ErrorCode::FactorizationIncomplete, "prime " + q.get_str() + " too large for local analysis");
      const std::uint64_t qs = q.get_ui();
      auto roots = split_roots(t, qs);
      long mass = 0;
      for (auto a : roots) {
        pr.k_valuations.push_back(hensel_valuation(t, gamma, qs, a, l));
        mass += pr.k_valuations.back();
      }
      require(mass == l, ErrorCode::Internal, "valuations above " + q.get_str() + " sum to " + std::to_string(mass) +
                                                  ", norm exponent is " + std::to_string(l));
      if (pr.cls == PrimeClass::SplitCompletelyInL) {
        ChiReport rep;
        rep.q = qs;
        rep.a1 = roots.front();
        rep.betas = pr.k_valuations;
        rep.chi = chi_from_betas(t, rep.betas);
        rep.chi_mod_p = mod_u(rep.chi, t.p());
        pr.chi = rep;
      }
    } else if (pr.cls == PrimeClass::NotSplitInK) {
      // every prime of K above q has residue degree ord_p(q)
      const std::uint64_t f = mult_order(mpz_fdiv_ui(q.get_mpz_t(), t.p()), t.p());
      require(l % static_cast<long>(f) == 0, ErrorCode::Internal,
              "norm exponent of " + q.get_str() + " not divisible by its residue degree");
    }
    v.per_prime.push_back(std::move(pr));
  }

  for (const auto& pr : v.per_prime) {
    if (pr.chi && pr.chi->chi_mod_p != 0) v.ideal_criterion_holds = true;
  }
  v.heisenberg_ok = v.semidirect_ok = v.ideal_criterion_holds;

  if (v.factorization.factors.empty()) {
    v.notes.push_back("norm is a unit; no prime can certify the criterion");
  }
  for (const auto& pr : v.per_prime) {
    if (!pr.chi) continue;
    const auto& c = *pr.chi;
    const std::string qs = pr.q.get_str();
    if (c.chi_mod_p != 0) {
      v.notes.push_back(qs + " splits completely in L with chi = " + std::to_string(c.chi_mod_p) + " (mod " +
                        std::to_string(t.p()) + "): Phi(gamma) and Phi(zp*gamma) are not " + P +
                        " powers; both constructions apply");
      continue;
    }
    std::string note = qs + " splits completely in L but chi = 0 (mod " + std::to_string(t.p()) + "), betas (" +
                       detail::join_longs(c.betas) + ")";
    const bool equal = std::all_of(c.betas.begin(), c.betas.end(), [&](long b) { return b == c.betas.front(); });
    const bool squarefree = std::all_of(c.betas.begin(), c.betas.end(), [](long b) { return b == 0 || b == 1; });
    if (equal) {
      note += "; I = O_K " + qs + (c.betas.front() == 1 ? "" : "^" + std::to_string(c.betas.front()));
    }
    if (squarefree) {
      note += "; x generates a product of " + detail::count_word(pr.l) + " distinct primes of norm " + qs;
    }
    v.notes.push_back(note);
  }
  if (!v.ideal_criterion_holds) {
    v.notes.push_back("ideal test inconclusive: Phi(gamma) generates a " + P +
                      " power ideal, so elementwise " + P + " power status is undecided");
    v.notes.push_back("L != Q(zeta_" + std::to_string(t.p() * t.p()) + "): Phi(zeta_p) is not a " + P +
                      " power, so if x does not induce the Heisenberg extension it induces the semidirect one");
  }
  return v;
}

// ---------------------------------------------------------------------------
// Monte-Carlo p-th power test

struct PthPowerTestResult {
  bool not_pth_power = false;
  /// Prime q = 1 (mod m) at which the residue is not a p-th power.
  std::uint64_t witness = 0;
  /// Usable samples examined.
  int trials = 0;
  std::uint64_t seed = 0;
};

/// One-sided test at degree-1 places of Q(zeta_m). A NotPthPower answer is
/// a certificate; ProbablyPthPower is only evidence.
inline PthPowerTestResult pth_power_mc_test(const Tower& t, const CycNum& z, int trials, std::uint64_t seed) {
  require(!z.is_zero(), ErrorCode::DivisionByZero, "p-th power test of zero");
  require(trials >= 1, ErrorCode::Internal, "need at least one trial");
  const std::uint64_t m = t.m();
  std::mt19937_64 rng(seed);
  PthPowerTestResult res;
  res.seed = seed;
  constexpr std::uint64_t kMultiplierRange = 1u << 22;
  constexpr int kMaxDraws = 200000;
  auto num = z.numerators();
  for (int draw = 0; draw < kMaxDraws && res.trials < trials; ++draw) {
    const std::uint64_t q = 1 + m * (1 + rng() % kMultiplierRange);
    const std::uint64_t unit = rng();
    if (!is_prime_u64(q)) continue;
    if (mpz_fdiv_ui(z.denominator().get_mpz_t(), q) == 0) continue;
    // a random primitive m-th root of unity mod q fixes the place
    const std::uint64_t g = smallest_primitive_root(q);
    std::uint64_t j = 1 + unit % (m - 1);
    while (gcd_u64(j, m) != 1) j = j % (m - 1) + 1;
    const std::uint64_t w = powmod(g, (q - 1) / m * j, q);
    std::uint64_t acc = 0, wp = 1;
    for (const auto& c : num) {
      if (c != 0) acc = (acc + mulmod(mpz_fdiv_ui(c.get_mpz_t(), q), wp, q)) % q;
      wp = mulmod(wp, w, q);
    }
    acc = mulmod(acc, invmod(mpz_fdiv_ui(z.denominator().get_mpz_t(), q), q), q);
    if (acc == 0) continue;
    ++res.trials;
    if (powmod(acc, (q - 1) / t.p(), q) != 1) {
      res.not_pth_power = true;
      res.witness = q;
      return res;
    }
  }
  require(res.trials >= trials, ErrorCode::InsufficientPrimes,
          "found only " + std::to_string(res.trials) + " usable primes");
  return res;
}

/// Upgrade ideal-level verdict flags with Monte-Carlo certificates on b(x).
inline void attach_mc_evidence(CriterionVerdict& v, const PthPowerTestResult& heis, const PthPowerTestResult& semi,
                               std::uint64_t p) {
  const std::string P = ordinal(p);
  if (heis.not_pth_power && !v.heisenberg_ok) {
    v.heisenberg_ok = true;
    v.notes.push_back("b(x) = Phi(gamma) is certified not a " + P + " power at q = " + std::to_string(heis.witness));
  }
  if (semi.not_pth_power && !v.semidirect_ok) {
    v.semidirect_ok = true;
    v.notes.push_back("b(x) = Phi(zp*gamma) is certified not a " + P + " power at q = " +
                      std::to_string(semi.witness));
  }
}

// ---------------------------------------------------------------------------
// Candidate search

struct Candidate {
  long u = 0, v = 0, w = 0;
  CycNum x;
  CriterionVerdict verdict;
};

inline CycNum candidate_element(const Tower& t, long u, long v, long w) {
  return t.from_int(u) * t.delta() + t.from_int(v) + t.from_int(w) * t.zp();
}

/// "d + zp", "-2*d + 3 - zp".
inline std::string candidate_expr(long u, long v, long w) {
  std::string out;
  auto term = [&](long c, const std::string& sym) {
    if (c == 0) return;
    const bool neg = c < 0;
    const long a = neg ? -c : c;
    if (out.empty()) {
      out += neg ? "-" : "";
    } else {
      out += neg ? " - " : " + ";
    }
    if (sym.empty()) {
      out += std::to_string(a);
    } else {
      out += (a == 1 ? "" : std::to_string(a) + "*") + sym;
    }
  };
  term(u, "d");
  term(v, "");
  term(w, "zp");
  return out.empty() ? "0" : out;
}

/// Scan x = u*delta + v + w*zeta_p for u, v, w in [-box, box] in
/// lexicographic order; keep the ones passing the ideal criterion.
inline std::vector<Candidate> search_candidates(const Tower& t, long box, std::size_t limit) {
  std::vector<Candidate> out;
  if (box < 0 || limit == 0) return out;
  for (long u = -box; u <= box; ++u) {
    for (long v = -box; v <= box; ++v) {
      for (long w = -box; w <= box; ++w) {
        CycNum x = candidate_element(t, u, v, w);
        if (x.is_zero()) continue;
        try {
          CriterionVerdict verdict = criterion_verdict(t, x);
          if (!verdict.ideal_criterion_holds) continue;
          out.push_back(Candidate{u, v, w, std::move(x), std::move(verdict)});
        } catch (const Error& err) {
          if (err.code() != ErrorCode::FactorizationIncomplete) throw;
          continue;
        }
        if (out.size() >= limit) return out;
      }
    }
  }
  return out;
}

}  // namespace p3ext
