#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "criterion.hpp"
#include "cyclotomic.hpp"
#include "error.hpp"
#include "phinorm.hpp"
#include "poly.hpp"
#include "tower.hpp"

namespace p3ext {

enum class Group { H27, C9xC3 };

constexpr std::string_view to_string(Group g) { return g == Group::H27 ? "h27" : "c9c3"; }

constexpr Construction construction_for(Group g) {
  return g == Group::H27 ? Construction::Heisenberg : Construction::Semidirect;
}

/// Certificate that theta is a Kummer generator of L/K: sigma-bar theta =
/// zeta_3 theta, theta^3 in K, theta not in K.
struct ThetaCert {
  CycNum theta;
  CycNum a;
  bool ok = false;
};

inline ThetaCert verify_theta(const Tower& t, const CycNum& theta) {
  require(t.p() == 3, ErrorCode::UnsupportedPrime, "builder supports p = 3 only");
  require(!theta.is_zero(), ErrorCode::DivisionByZero, "theta = 0");
  CycNum cube = theta * theta * theta;
  const bool twisted = theta.apply(t.sigma()) == t.zp() * theta;
  const bool ok = twisted && t.membership(cube, SubfieldTag::K) && !t.membership(theta, SubfieldTag::K);
  return ThetaCert{theta, cube, ok};
}

/// theta = 3d^2 + 3d + 3 zp d + zp - 4 for the (3, 7) tower.
inline CycNum default_theta(const Tower& t) {
  require(t.p() == 3 && t.r() == 7, ErrorCode::MissingTheta, "no default Kummer generator for this tower");
  const CycNum& d = t.delta();
  return t.from_int(3) * d * d + t.from_int(3) * d + t.from_int(3) * t.zp() * d + t.zp() - t.from_int(4);
}

inline void require_builder_tower(const Tower& t) {
  require(t.p() == 3, ErrorCode::UnsupportedPrime, "builder supports p = 3 only");
  require(t.builder_mode(), ErrorCode::BadGenerator, "builder needs the tower in e = -1 mode");
}

/// omega = Phi(x^2 sigma-bar(x)) for H27 and Phi(x^2 sigma-bar(x) theta)
/// for C9xC3, with Phi(y) = tau-bar(y) / y. The caller is responsible for
/// having checked the criterion.
inline CycNum build_omega(const Tower& t, const CycNum& x, Group group, const std::optional<ThetaCert>& theta) {
  require_builder_tower(t);
  CycNum y = beta(t, x);
  if (group == Group::C9xC3) {
    require(theta.has_value(), ErrorCode::MissingTheta, "C9xC3 needs a Kummer generator theta");
    require(theta->ok, ErrorCode::MissingTheta, "theta failed verification");
    y *= theta->theta;
  }
  CycNum omega = phi(t, y);
  require(omega * omega.apply(t.tau()) == t.one(), ErrorCode::NotReciprocal, "tau-bar(omega) != 1/omega");
  require(!t.membership(omega, SubfieldTag::K), ErrorCode::OmegaDegenerate,
          "omega lies in K, so omega + 1/omega is rational");
  return omega;
}

/// Minimal polynomial of omega + 1/omega over Q.
inline RatPoly trace_cubic(const Tower& t, const CycNum& omega) {
  require(t.p() == 3, ErrorCode::UnsupportedPrime, "builder supports p = 3 only");
  require(!omega.is_zero(), ErrorCode::DivisionByZero, "omega = 0");
  CycNum inv = omega.inv();
  require(omega.apply(t.tau()) == inv, ErrorCode::NotReciprocal, "tau-bar(omega) != 1/omega");
  CycNum s = omega + inv;
  require(t.membership(s, SubfieldTag::F), ErrorCode::Internal, "omega + 1/omega is not in F");
  require(!s.is_rational(), ErrorCode::Degenerate, "omega + 1/omega is rational");
  return conjugate_product(sigma_orbit(t, s), ErrorCode::Degenerate);
}

/// cubic(X^3 - 3X).
inline RatPoly compose_e_poly(const RatPoly& cubic) {
  require(cubic.degree() == 3 && cubic.is_monic(), ErrorCode::Internal, "expected a monic cubic");
  return cubic.compose(RatPoly{0, -3, 0, 1});
}

struct EPolyReport {
  Group group = Group::H27;
  CycNum x;
  CycNum omega;
  RatPoly trace_cubic;
  RatPoly e_poly;
  CriterionVerdict verdict;
  /// True when the build went ahead although the ideal criterion failed.
  bool overridden = false;
  std::optional<PthPowerTestResult> mc_evidence;
  std::optional<ThetaCert> theta;
};

struct BuildOptions {
  bool override_ideal_test = false;
  int mc_trials = 40;
  std::uint64_t seed = 1;
};

inline EPolyReport build(const Tower& t, const CycNum& x, Group group, std::optional<CycNum> theta,
                         const BuildOptions& opts = {}) {
  require_builder_tower(t);
  CriterionVerdict verdict = criterion_verdict(t, x);
  const bool overridden = !verdict.ideal_criterion_holds;
  std::optional<PthPowerTestResult> mc;
  if (overridden) {
    require(opts.override_ideal_test, ErrorCode::CriterionNotSatisfied,
            "ideal criterion fails for this x; pass the override to build on element-level evidence");
    mc = pth_power_mc_test(t, compute_b(t, x, construction_for(group)), opts.mc_trials, opts.seed);
    verdict.notes.push_back(mc->not_pth_power
                                ? "override: built on a Monte-Carlo certificate (q = " + std::to_string(mc->witness) + ")"
                                : "override: no non-cube witness found in " + std::to_string(mc->trials) + " trials");
  }
  std::optional<ThetaCert> cert;
  if (group == Group::C9xC3) {
    cert = verify_theta(t, theta ? *theta : default_theta(t));
    require(cert->ok, ErrorCode::MissingTheta, "theta does not satisfy sigma-bar(theta) = zp*theta with theta^3 in K");
  }
  CycNum omega = build_omega(t, x, group, cert);
  RatPoly cubic = trace_cubic(t, omega);
  RatPoly e_poly = compose_e_poly(cubic);
  return EPolyReport{group, x, omega, cubic, e_poly, std::move(verdict), overridden, mc, cert};
}

}  // namespace p3ext
