#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "config.hpp"
#include "pbp/pbp.h"

namespace {

using pbp::cli::Json;
using pbp::cli::RunConfig;

struct Failure {
  pbp_status status;
  std::string message;
};

void check(pbp_status s) {
  if (s != PBP_OK) throw Failure{s, pbp_last_error()};
}

using PathPtr = std::unique_ptr<pbp_path, decltype(&pbp_path_free)>;
using DriftPtr = std::unique_ptr<pbp_drift, decltype(&pbp_drift_free)>;
using SolutionPtr = std::unique_ptr<pbp_solution, decltype(&pbp_solution_free)>;

PathPtr wrap(pbp_path* p) { return PathPtr(p, pbp_path_free); }
DriftPtr wrap(pbp_drift* p) { return DriftPtr(p, pbp_drift_free); }
SolutionPtr wrap(pbp_solution* p) { return SolutionPtr(p, pbp_solution_free); }

std::string take(char* s) {
  std::string r(s);
  pbp_string_free(s);
  return r;
}

void write_to(const std::string& target, const std::string& text) {
  if (target == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(target, std::ios::binary);
  out << text;
  if (!out) throw Failure{PBP_IO_ERROR, "IoError: cannot write '" + target + "'"};
}

pbp_solve_options options(const RunConfig& cfg) { return pbp_solve_options_with_step(cfg.real("h_base")); }

PathPtr load_driver(const RunConfig& cfg, double horizon) {
  const std::string d = cfg.text("driver");
  pbp_path* p = nullptr;
  if (d.rfind("csv:", 0) == 0) {
    check(pbp_path_read_csv(d.substr(4).c_str(), 1, &p));
    return wrap(p);
  }
  const auto cells = static_cast<int64_t>(std::llround(horizon * static_cast<double>(cfg.integer("steps"))));
  if (d == "zero") {
    check(pbp_path_zero(horizon, cells, &p));
  } else {
    check(pbp_path_brownian(horizon, cells, cfg.count("seed"), cfg.count("stream"), &p));
  }
  return wrap(p);
}

DriftPtr load_drift(const RunConfig& cfg) {
  const Json& d = cfg.values.at("drift");
  Json j = d.is_string() ? Json{{"variant", d.get<std::string>()}} : d;
  for (const char* key : {"center", "target", "y", "t_start", "t_end", "c", "coefficient", "side", "tail"}) {
    if (cfg.has(key)) j[key] = cfg.values.at(key);
  }
  pbp_drift* p = nullptr;
  check(pbp_drift_from_json(j.dump().c_str(), &p));
  return wrap(p);
}

void emit_solution(const RunConfig& cfg, const pbp_solution* sol) {
  pbp_path* raw = nullptr;
  check(pbp_solution_path(sol, &raw));
  const auto path = wrap(raw);
  char* s = nullptr;
  check(pbp_solution_sidecar_json(sol, &s));
  const std::string sidecar = take(s);
  const std::string out = cfg.text("out");
  if (cfg.text("format") == "json") {
    check(pbp_path_to_json(path.get(), &s));
    Json j{{"path", Json::parse(take(s))}, {"diagnostics", Json::parse(sidecar)}};
    write_to(out, j.dump() + "\n");
  } else {
    check(pbp_path_to_csv_string(path.get(), &s));
    write_to(out, take(s));
  }
  if (cfg.has("sidecar")) {
    write_to(cfg.text("sidecar"), sidecar + "\n");
  } else if (out != "-" && cfg.text("format") == "csv") {
    write_to(out + ".json", sidecar + "\n");
  }
}

int gen_driver(const RunConfig& cfg) {
  const double T = cfg.real("T");
  auto path = load_driver(cfg, T);
  if (cfg.integer("refine_levels") > 0) {
    const double a = cfg.has("refine_from") ? cfg.real("refine_from") : 0.0;
    const double b = cfg.has("refine_to") ? cfg.real("refine_to") : T;
    pbp_path* refined = nullptr;
    const uint64_t stream = cfg.count("stream") | (uint64_t{1} << 63);
    check(pbp_path_refine(path.get(), a, b, static_cast<int>(cfg.integer("refine_levels")), cfg.count("seed"), stream,
                          &refined));
    path = wrap(refined);
  }
  char* s = nullptr;
  if (cfg.text("format") == "json") {
    check(pbp_path_to_json(path.get(), &s));
    write_to(cfg.text("out"), take(s) + "\n");
  } else {
    check(pbp_path_to_csv_string(path.get(), &s));
    write_to(cfg.text("out"), take(s));
  }
  return 0;
}

int simulate(const RunConfig& cfg) {
  const double T = cfg.real("T");
  const auto drift = load_drift(cfg);
  const auto driver = load_driver(cfg, T);
  const auto opts = options(cfg);
  const std::string side_s = cfg.text("start_side");
  const pbp_side side = side_s == "above" ? PBP_SIDE_ABOVE : side_s == "below" ? PBP_SIDE_BELOW : PBP_SIDE_NONE;
  double stop = 0.0;
  if (cfg.has("stop_level")) stop = cfg.real("stop_level");
  pbp_solution* raw = nullptr;
  check(pbp_solve(drift.get(), driver.get(), cfg.real("x0"), cfg.has("t0") ? cfg.real("t0") : 0.0,
                  cfg.has("t1") ? cfg.real("t1") : T, side, cfg.has("stop_level") ? &stop : nullptr, &opts, &raw));
  const auto sol = wrap(raw);
  if (cfg.boolean("check_residual")) check(pbp_solution_check(sol.get(), drift.get(), driver.get(), &opts, nullptr));
  emit_solution(cfg, sol.get());
  return 0;
}

int construct(const RunConfig& cfg) {
  const std::string which = cfg.text("case");
  const double horizon = which == "bridge" ? 1.0 : which == "ce1" ? 3.0 : 4.0;
  const auto driver = load_driver(cfg, horizon);
  const auto opts = options(cfg);
  pbp_solution* raw = nullptr;
  Json drift;
  if (which == "bridge") {
    const double y = cfg.has("y") ? cfg.real("y") : 1.0;
    check(pbp_construct_bridge(cfg.text("sign") == "nonneg", y, driver.get(), &opts, &raw));
    drift = Json{{"variant", "bridge_two_sided"}, {"y", y}};
  } else if (which == "ce1") {
    const std::string b = cfg.text("branch");
    const pbp_ce1_branch branch = b == "positive" ? PBP_CE1_POSITIVE : b == "negative" ? PBP_CE1_NEGATIVE : PBP_CE1_AUTO;
    check(pbp_construct_ce1(driver.get(), branch, &opts, &raw));
    drift = Json{{"variant", "ce1"}};
  } else {
    const auto v = cfg.text("variant") == "weak" ? PBP_CE2_WEAK : PBP_CE2_ALTERNATIVE;
    check(pbp_construct_ce2(driver.get(), v, &opts, &raw));
    drift = Json{{"variant", "ce2"}};
  }
  const auto sol = wrap(raw);
  if (cfg.boolean("check_residual")) {
    pbp_drift* d = nullptr;
    check(pbp_drift_from_json(drift.dump().c_str(), &d));
    const auto spec = wrap(d);
    check(pbp_solution_check(sol.get(), spec.get(), driver.get(), &opts, nullptr));
  }
  emit_solution(cfg, sol.get());
  return 0;
}

int residual(const RunConfig& cfg) {
  const auto drift = load_drift(cfg);
  pbp_path* raw = nullptr;
  check(pbp_path_read_csv(cfg.text("candidate").c_str(), 0, &raw));
  const auto candidate = wrap(raw);
  const auto driver = load_driver(cfg, 0.0);
  const auto opts = options(cfg);
  const std::size_t n = pbp_path_size(candidate.get());
  double first = 0.0, last = 0.0;
  check(pbp_path_copy(candidate.get(), &first, nullptr, 1));
  std::vector<double> ts(n);
  check(pbp_path_copy(candidate.get(), ts.data(), nullptr, n));
  last = ts.back();
  const double t0 = cfg.has("t0") ? cfg.real("t0") : first;
  const double t1 = cfg.has("t1") ? cfg.real("t1") : last;
  double r = 0.0;
  check(pbp_residual_sup(drift.get(), candidate.get(), driver.get(), t0, t1, &opts, &r));
  const bool pass = r <= cfg.real("tolerance");
  std::cout << Json{{"residual", r}, {"tolerance", cfg.real("tolerance")}, {"t0", t0}, {"t1", t1}, {"pass", pass}}.dump()
            << "\n";
  return pass ? 0 : 1;
}

int verify_suite(const RunConfig& cfg) {
  Json suite{{"profile", cfg.text("profile")},
             {"seed", cfg.count("seed")},
             {"threads", cfg.integer("threads")},
             {"h_base", cfg.real("h_base")},
             {"driver_steps", cfg.integer("steps")},
             {"cancellation_coefficient", cfg.real("cancellation_coefficient")},
             {"controls", cfg.boolean("controls")},
             {"tests", cfg.values.at("tests")}};
  char* s = nullptr;
  int all_pass = 0;
  check(pbp_verify_suite(suite.dump().c_str(), 1, &s, &all_pass));
  write_to(cfg.text("out"), take(s));
  std::cerr << (all_pass ? "suite: pass" : "suite: FAIL") << "\n";
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  RunConfig cfg;
  try {
    auto parsed = pbp::cli::parse_config(args, std::getenv("PBP_SEED"));
    if (!parsed.config) {
      std::cout << parsed.help;
      return 0;
    }
    cfg = std::move(*parsed.config);
  } catch (const pbp::cli::UsageError& e) {
    std::cerr << "UsageError: " << e.what() << "\n";
    return 2;
  }
  std::cerr << "config " << cfg.to_json().dump() << "\n";
  try {
    if (cfg.command == "gen-driver") return gen_driver(cfg);
    if (cfg.command == "simulate") return simulate(cfg);
    if (cfg.command == "construct") return construct(cfg);
    if (cfg.command == "residual") return residual(cfg);
    return verify_suite(cfg);
  } catch (const Failure& f) {
    std::cerr << f.message << "\n";
    return f.status == PBP_USAGE_ERROR || f.status == PBP_IO_ERROR ? 2 : 1;
  }
}
