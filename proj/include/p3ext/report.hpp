#pragma once

#include <string>

#include <json.hpp>

#include "builder.hpp"
#include "criterion.hpp"
#include "fingerprint.hpp"
#include "poly.hpp"
#include "tower.hpp"

namespace p3ext {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Ascending coefficient array; rationals as "num/den" strings.
inline Json poly_json(const RatPoly& f) {
  Json a = Json::array();
  for (const auto& c : f.coeffs()) a.push_back(c.get_str());
  return a;
}

inline RatPoly poly_from_json(const Json& a) {
  require(a.is_array(), ErrorCode::ParseError, "polynomial JSON must be an array");
  std::vector<BigRat> c;
  for (const auto& v : a) {
    require(v.is_string() || v.is_number_integer(), ErrorCode::ParseError, "coefficient must be a string or integer");
    BigRat q;
    const std::string s = v.is_string() ? v.get<std::string>() : std::to_string(v.get<long long>());
    if (q.set_str(s, 10) != 0) fail(ErrorCode::ParseError, "bad rational '" + s + "'");
    q.canonicalize();
    c.push_back(q);
  }
  return RatPoly(std::move(c));
}

inline Json tower_json(const Tower& t) {
  return Json{{"p", t.p()},       {"r", t.r()},
              {"m", t.m()},       {"e", t.e()},
              {"m_r", t.m_r()},   {"c", t.c()},
              {"sigma_k", t.sigma().exponent()}, {"tau_k", t.tau().exponent()}};
}

inline Json prime_json(const PrimeReport& pr) {
  Json j{{"q", pr.q.fits_ulong_p() ? Json(pr.q.get_ui()) : Json(pr.q.get_str())},
         {"exponent", pr.l},
         {"class", std::string(to_string(pr.cls))}};
  if (!pr.k_valuations.empty()) j["k_valuations"] = pr.k_valuations;
  if (pr.chi) {
    j["a1"] = pr.chi->a1;
    j["betas"] = pr.chi->betas;
    j["chi"] = pr.chi->chi;
    j["chi_mod_p"] = pr.chi->chi_mod_p;
  }
  return j;
}

inline Json mc_json(const PthPowerTestResult& r) {
  Json j{{"result", r.not_pth_power ? "NotPthPower" : "ProbablyPthPower"}, {"trials", r.trials}, {"seed", r.seed}};
  if (r.not_pth_power) j["witness"] = r.witness;
  return j;
}

inline Json verdict_json(const Tower& t, const std::string& x_text, const CriterionVerdict& v) {
  Json primes = Json::array();
  for (const auto& pr : v.per_prime) primes.push_back(prime_json(pr));
  Json j;
  j["x"] = x_text;
  if (v.gamma) j["gamma"] = t.format_k(*v.gamma);
  j["norm"] = v.factorization.to_string();
  j["norm_value"] = v.norm.get_str();
  j["primes"] = primes;
  j["ideal_criterion"] = v.ideal_criterion_holds;
  j["h27_ok"] = v.heisenberg_ok;
  j["c9c3_ok"] = v.semidirect_ok;
  j["notes"] = v.notes;
  return j;
}

inline Json fingerprint_json(const GroupFingerprint& fp) {
  Json patterns = Json::object();
  for (const auto& [pat, n] : fp.patterns) patterns[pattern_key(pat)] = n;
  return Json{{"samples", fp.sampled_primes},
              {"skipped", fp.skipped},
              {"start", fp.start},
              {"patterns", patterns},
              {"verdict", std::string(to_string(fp.verdict))}};
}

inline Json epoly_json(const Tower& t, const std::string& x_text, const EPolyReport& rep) {
  Json j;
  j["group"] = std::string(to_string(rep.group));
  j["x"] = x_text;
  j["omega"] = rep.omega.to_string("z");
  j["trace_cubic"] = poly_json(rep.trace_cubic);
  j["trace_cubic_text"] = to_text(rep.trace_cubic);
  j["e_poly"] = poly_json(rep.e_poly);
  j["e_poly_text"] = to_text(rep.e_poly);
  j["overridden"] = rep.overridden;
  if (rep.mc_evidence) j["mc_evidence"] = mc_json(*rep.mc_evidence);
  if (rep.theta) {
    j["theta"] = Json{{"cube", t.format_k(rep.theta->a)}, {"ok", rep.theta->ok}};
  }
  j["verdict"] = verdict_json(t, x_text, rep.verdict);
  return j;
}

}  // namespace p3ext
