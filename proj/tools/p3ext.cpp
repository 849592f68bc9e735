// p3ext: command-line front end for the cyclotomic tower, the chi criterion,
// the p = 3 builder and the Frobenius fingerprint.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "p3ext/p3ext.hpp"

namespace {

using namespace p3ext;

enum Exit : int {
  kOk = 0,
  kOther = 1,
  kTower = 2,
  kParse = 3,
  kFactor = 4,
  kCriterion = 5,
  kBuilder = 6,
  kRefuted = 7,
};

int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::CongruenceViolation:
    case ErrorCode::BadGenerator: return kTower;
    case ErrorCode::ParseError: return kParse;
    case ErrorCode::FactorizationIncomplete: return kFactor;
    case ErrorCode::CriterionNotSatisfied: return kCriterion;
    case ErrorCode::UnsupportedPrime:
    case ErrorCode::MissingTheta:
    case ErrorCode::OmegaDegenerate:
    case ErrorCode::NotReciprocal:
    case ErrorCode::Degenerate: return kBuilder;
    default: return kOther;
  }
}

// Everything needed to re-run a command; serialized into every report.
struct RunConfig {
  std::string command;
  std::uint64_t p = 3, r = 7;
  std::optional<std::int64_t> e;
  std::optional<std::uint64_t> c;
  std::string x;
  std::string group = "h27";
  std::string theta;
  bool override_ideal_test = false;
  int fingerprint = 0;
  long box = 2;
  std::size_t limit = 50;
  std::string poly;
  std::string claimed;
  int budget = 100;
  std::uint64_t start = 2;
  std::uint64_t seed = 1;
  int trials = 40;
  std::string format = "json";
};

Json opt_json(const auto& o) { return o ? Json(*o) : Json(nullptr); }

Json config_json(const RunConfig& c) {
  Json j{{"command", c.command}};
  auto tower_keys = [&] {
    j["p"] = c.p;
    j["r"] = c.r;
    j["e"] = opt_json(c.e);
    j["c"] = opt_json(c.c);
  };
  if (c.command == "tower") tower_keys();
  if (c.command == "check") {
    tower_keys();
    j["x"] = c.x;
    j["trials"] = c.trials;
    j["seed"] = c.seed;
  }
  if (c.command == "build") {
    tower_keys();
    j["x"] = c.x;
    j["group"] = c.group;
    j["theta"] = c.theta;
    j["override_ideal_test"] = c.override_ideal_test;
    j["fingerprint"] = c.fingerprint;
    j["trials"] = c.trials;
    j["seed"] = c.seed;
  }
  if (c.command == "search") {
    tower_keys();
    j["box"] = c.box;
    j["limit"] = c.limit;
  }
  if (c.command == "fingerprint") {
    j["poly"] = c.poly;
    j["claimed"] = c.claimed;
    j["budget"] = c.budget;
    j["start"] = c.start;
  }
  j["format"] = c.format;
  return j;
}

RunConfig config_from_json(const Json& j) {
  const Json& cfg = j.contains("config") ? j.at("config") : j;
  RunConfig c;
  try {
    c.command = cfg.at("command").get<std::string>();
    auto get = [&](const char* key, auto& field) {
      if (cfg.contains(key) && !cfg.at(key).is_null()) field = cfg.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("p", c.p);
    get("r", c.r);
    if (cfg.contains("e") && !cfg.at("e").is_null()) c.e = cfg.at("e").get<std::int64_t>();
    if (cfg.contains("c") && !cfg.at("c").is_null()) c.c = cfg.at("c").get<std::uint64_t>();
    get("x", c.x);
    get("group", c.group);
    get("theta", c.theta);
    get("override_ideal_test", c.override_ideal_test);
    get("fingerprint", c.fingerprint);
    get("box", c.box);
    get("limit", c.limit);
    get("poly", c.poly);
    get("claimed", c.claimed);
    get("budget", c.budget);
    get("start", c.start);
    get("seed", c.seed);
    get("trials", c.trials);
    get("format", c.format);
  } catch (const nlohmann::json::exception& ex) {
    fail(ErrorCode::ParseError, std::string("bad config: ") + ex.what());
  }
  return c;
}

Group parse_group(const std::string& s) {
  if (s == "h27") return Group::H27;
  if (s == "c9c3") return Group::C9xC3;
  fail(ErrorCode::ParseError, "unknown group '" + s + "' (expected h27 or c9c3)");
}

struct Outcome {
  Json report;
  std::string text;
  int code = kOk;
};

Json envelope(const RunConfig& c) { return Json{{"schema", kSchemaVersion}, {"config", config_json(c)}}; }

Outcome run_tower(RunConfig& c) {
  Tower t = build_tower(c.p, c.r, c.e, c.c);
  c.e = t.e();
  c.c = t.c();
  RatPoly f = period_min_poly(t);
  Outcome out{envelope(c), {}};
  out.report["tower"] = tower_json(t);
  out.report["delta"] = t.delta().to_string("z");
  out.report["period_poly"] = poly_json(f);
  out.report["period_poly_text"] = to_text(f);
  out.text = "tower p=" + std::to_string(t.p()) + " r=" + std::to_string(t.r()) + " m=" + std::to_string(t.m()) +
             " e=" + std::to_string(t.e()) + " m_r=" + std::to_string(t.m_r()) + " c=" + std::to_string(t.c()) +
             "\nperiod polynomial: " + to_text(f) + "\n";
  return out;
}

std::string verdict_text(const Json& v) {
  std::ostringstream os;
  os << "x = " << v["x"].get<std::string>() << "\n";
  if (v.contains("gamma")) os << "gamma = " << v["gamma"].get<std::string>() << "\n";
  os << "norm = " << v["norm_value"].get<std::string>() << " (" << v["norm"].get<std::string>() << ")\n";
  for (const auto& pr : v["primes"]) {
    os << "  q = " << pr["q"].dump() << "^" << pr["exponent"].dump() << "  " << pr["class"].get<std::string>();
    if (pr.contains("betas")) os << "  betas " << pr["betas"].dump() << "  chi mod p = " << pr["chi_mod_p"].dump();
    os << "\n";
  }
  os << "ideal_criterion = " << v["ideal_criterion"].dump() << "  h27_ok = " << v["h27_ok"].dump()
     << "  c9c3_ok = " << v["c9c3_ok"].dump() << "\n";
  for (const auto& n : v["notes"]) os << "  note: " << n.get<std::string>() << "\n";
  return os.str();
}

Outcome run_check(RunConfig& c) {
  Tower t = build_tower(c.p, c.r, c.e, c.c);
  c.e = t.e();
  c.c = t.c();
  CycNum x = parse_element(t, c.x);
  CriterionVerdict v = criterion_verdict(t, x);
  auto heis = pth_power_mc_test(t, compute_b(t, x, Construction::Heisenberg), c.trials, c.seed);
  auto semi = pth_power_mc_test(t, compute_b(t, x, Construction::Semidirect), c.trials, c.seed);
  attach_mc_evidence(v, heis, semi, t.p());
  Outcome out{envelope(c), {}};
  out.report["tower"] = tower_json(t);
  out.report["verdict"] = verdict_json(t, c.x, v);
  out.report["mc"] = Json{{"heisenberg", mc_json(heis)}, {"semidirect", mc_json(semi)}};
  out.text = verdict_text(out.report["verdict"]);
  return out;
}

Outcome run_build(RunConfig& c) {
  require(c.p == 3, ErrorCode::UnsupportedPrime, "builder supports p = 3 only");
  if (!c.e) c.e = -1;
  Tower t = build_tower(c.p, c.r, c.e, c.c);
  c.c = t.c();
  const Group group = parse_group(c.group);
  CycNum x = parse_element(t, c.x);
  std::optional<CycNum> theta;
  if (!c.theta.empty()) theta = parse_element(t, c.theta);
  BuildOptions opts;
  opts.override_ideal_test = c.override_ideal_test;
  opts.mc_trials = c.trials;
  opts.seed = c.seed;
  EPolyReport rep = build(t, x, group, theta, opts);
  Outcome out{envelope(c), {}};
  out.report["tower"] = tower_json(t);
  out.report["build"] = epoly_json(t, c.x, rep);
  out.text = "trace cubic: " + to_text(rep.trace_cubic) + "\n" + to_string(rep.group).data() +
             "-polynomial: " + to_text(rep.e_poly) + "\n";
  if (c.fingerprint > 0) {
    GroupFingerprint fp = survey(rep.e_poly, c.fingerprint, 2);
    const Discrimination d = discriminate(fp, group);
    Json fj = fingerprint_json(fp);
    fj["claimed"] = c.group;
    fj["discrimination"] = std::string(to_string(d));
    out.report["fingerprint"] = fj;
    out.text += "fingerprint: " + std::string(to_string(fp.verdict)) + ", " + c.group + " " +
                std::string(to_string(d)) + "\n";
    if (d == Discrimination::Refuted) out.code = kRefuted;
  }
  return out;
}

Outcome run_search(RunConfig& c) {
  Tower t = build_tower(c.p, c.r, c.e, c.c);
  c.e = t.e();
  c.c = t.c();
  auto found = search_candidates(t, c.box, c.limit);
  Json list = Json::array();
  std::string text;
  for (const auto& cand : found) {
    const std::string expr = candidate_expr(cand.u, cand.v, cand.w);
    Json v = verdict_json(t, expr, cand.verdict);
    list.push_back(Json{{"u", cand.u},
                        {"v", cand.v},
                        {"w", cand.w},
                        {"x", expr},
                        {"norm", v["norm"]},
                        {"primes", v["primes"]}});
    text += expr + "    norm " + cand.verdict.factorization.to_string() + "\n";
  }
  Outcome out{envelope(c), {}};
  out.report["tower"] = tower_json(t);
  out.report["count"] = found.size();
  out.report["candidates"] = list;
  out.text = text + std::to_string(found.size()) + " candidate(s)\n";
  return out;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::ParseError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// --poly accepts a file or inline text; either may hold a polynomial
/// expression, a JSON coefficient array, or a build report.
RatPoly load_poly(const std::string& arg) {
  std::string body = arg;
  std::error_code ec;
  if (std::filesystem::is_regular_file(arg, ec)) body = slurp(arg);
  const auto first = body.find_first_not_of(" \t\r\n");
  require(first != std::string::npos, ErrorCode::ParseError, "empty polynomial");
  if (body[first] == '[' || body[first] == '{') {
    Json j;
    try {
      j = Json::parse(body);
    } catch (const nlohmann::json::exception& ex) {
      fail(ErrorCode::ParseError, std::string("bad polynomial JSON: ") + ex.what());
    }
    if (j.is_object() && j.contains("build")) return poly_from_json(j["build"]["e_poly"]);
    if (j.is_object() && j.contains("e_poly")) return poly_from_json(j["e_poly"]);
    return poly_from_json(j);
  }
  return parse_poly(body);
}

Outcome run_fingerprint(RunConfig& c) {
  RatPoly f = load_poly(c.poly);
  require(f.degree() >= 1 && f.is_monic(), ErrorCode::ParseError, "polynomial must be monic of positive degree");
  GroupFingerprint fp = survey(f, c.budget, c.start);
  Outcome out{envelope(c), {}};
  Json fj = fingerprint_json(fp);
  out.text = "samples " + std::to_string(fp.sampled_primes) + ", skipped " + std::to_string(fp.skipped) + "\n";
  for (const auto& [pat, n] : fp.patterns) out.text += "  {" + pattern_key(pat) + "}: " + std::to_string(n) + "\n";
  out.text += "verdict: " + std::string(to_string(fp.verdict)) + "\n";
  if (!c.claimed.empty()) {
    const Discrimination d = discriminate(fp, parse_group(c.claimed));
    fj["claimed"] = c.claimed;
    fj["discrimination"] = std::string(to_string(d));
    out.text += c.claimed + ": " + std::string(to_string(d)) + "\n";
    if (d == Discrimination::Refuted) out.code = kRefuted;
  }
  out.report["polynomial"] = to_text(f);
  out.report["fingerprint"] = fj;
  return out;
}

Outcome dispatch(RunConfig& c) {
  require(c.format == "json" || c.format == "text", ErrorCode::ParseError, "format must be json or text");
  if (c.command == "tower") return run_tower(c);
  if (c.command == "check") return run_check(c);
  if (c.command == "build") return run_build(c);
  if (c.command == "search") return run_search(c);
  if (c.command == "fingerprint") return run_fingerprint(c);
  fail(ErrorCode::ParseError, "unknown command '" + c.command + "'");
}

void add_tower_options(CLI::App* sub, RunConfig& c) {
  sub->add_option("-p", c.p, "odd prime p")->required();
  sub->add_option("-r", c.r, "prime r = 1 (mod p)")->required();
  sub->add_option("-e", c.e, "primitive root mod p, or -1 (builder mode)");
  sub->add_option("-c,--sigma", c.c, "exponent of sigma-bar on zeta_r");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-abelian p^3 extensions of Q from cyclotomic towers"};
  app.require_subcommand(0, 1);
  app.fallthrough();
  RunConfig cfg;
  std::string out_path, config_path;
  app.add_option("--config", config_path, "re-run the configuration embedded in a report");
  app.add_option("--out", out_path, "also write the JSON report to FILE");
  app.add_option("--format", cfg.format, "stdout format: json or text")->capture_default_str();

  auto* tower = app.add_subcommand("tower", "tower data and the period polynomial");
  add_tower_options(tower, cfg);

  auto* check = app.add_subcommand("check", "decide the criterion for an element x");
  add_tower_options(check, cfg);
  check->add_option("-x", cfg.x, "element in zp, zr, d")->required();
  check->add_option("--trials", cfg.trials, "Monte-Carlo trials per variant")->capture_default_str();
  check->add_option("--seed", cfg.seed, "Monte-Carlo seed")->capture_default_str();

  auto* buildc = app.add_subcommand("build", "p = 3 polynomial for H27 or C9xC3");
  add_tower_options(buildc, cfg);
  buildc->add_option("-x", cfg.x, "element in zp, zr, d")->required();
  buildc->add_option("--group", cfg.group, "h27 or c9c3")->capture_default_str();
  buildc->add_option("--theta", cfg.theta, "Kummer generator of L/K (c9c3)");
  buildc->add_flag("--override-ideal-test", cfg.override_ideal_test, "build on Monte-Carlo evidence alone");
  buildc->add_option("--fingerprint", cfg.fingerprint, "survey N primes after building")->capture_default_str();
  buildc->add_option("--trials", cfg.trials, "Monte-Carlo trials")->capture_default_str();
  buildc->add_option("--seed", cfg.seed, "Monte-Carlo seed")->capture_default_str();

  auto* search = app.add_subcommand("search", "scan u*d + v + w*zp for passing candidates");
  add_tower_options(search, cfg);
  search->add_option("--box", cfg.box, "coefficient bound")->capture_default_str();
  search->add_option("--limit", cfg.limit, "stop after N hits")->capture_default_str();

  auto* fpc = app.add_subcommand("fingerprint", "Frobenius cycle-type survey of a polynomial");
  fpc->add_option("--poly", cfg.poly, "polynomial text, JSON array, or a file holding either")->required();
  fpc->add_option("--claimed", cfg.claimed, "h27 or c9c3");
  fpc->add_option("--budget", cfg.budget, "usable primes to sample")->capture_default_str();
  fpc->add_option("--start", cfg.start, "first prime to try")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);  // prints help or the message
    return rc == 0 ? kOk : kParse;
  }

  try {
    if (!config_path.empty()) {
      Json j;
      try {
        j = Json::parse(slurp(config_path));
      } catch (const nlohmann::json::exception& ex) {
        fail(ErrorCode::ParseError, std::string("bad config file: ") + ex.what());
      }
      cfg = config_from_json(j);
    } else if (auto subs = app.get_subcommands(); !subs.empty()) {
      cfg.command = subs.front()->get_name();
    } else {
      std::cout << app.help();
      return kParse;
    }
    Outcome res = dispatch(cfg);
    const std::string json = res.report.dump(2) + "\n";
    if (!out_path.empty()) {
      std::ofstream f(out_path);
      require(static_cast<bool>(f), ErrorCode::Internal, "cannot write " + out_path);
      f << json;
    }
    std::cout << (cfg.format == "text" ? res.text : json);
    return res.code;
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kOther;
  }
}
