#include "pbp/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "pbp/errors.hpp"

namespace pbp {

namespace {

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void check_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& what) {
  require(j.is_object(), what + " must be a JSON object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items()) {
    require(ok.count(key) > 0, "unknown key '" + key + "' in " + what);
  }
}

template <class T>
T get(const Json& j, const char* key, const std::string& what) {
  require(j.contains(key), "missing key '" + std::string(key) + "' in " + what);
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    fail(ErrorKind::usage, "key '" + std::string(key) + "' in " + what + " has the wrong type");
  }
}

template <class T>
T get_or(const Json& j, const char* key, T fallback, const std::string& what) {
  return j.contains(key) ? get<T>(j, key, what) : fallback;
}

Side side_from(const std::string& s) {
  if (s == "above") return Side::above;
  if (s == "below") return Side::below;
  if (s == "none") return Side::none;
  fail(ErrorKind::usage, "side must be 'above' or 'below', got '" + s + "'");
}

Tail tail_from(const std::string& s) {
  if (s == "zero") return Tail::zero;
  if (s == "reciprocal_shifted") return Tail::reciprocal_shifted;
  fail(ErrorKind::usage, "tail must be 'zero' or 'reciprocal_shifted', got '" + s + "'");
}

Comparison comparison_from(const std::string& s) {
  for (auto c : {Comparison::less, Comparison::less_equal, Comparison::greater, Comparison::greater_equal,
                 Comparison::between}) {
    if (s == comparison_symbol(c)) return c;
  }
  fail(ErrorKind::usage, "unknown comparison '" + s + "'");
}

}  // namespace

void write_path_csv(const SamplePath& path, std::ostream& out) {
  out << "t,value\n";
  const auto ts = path.times();
  const auto xs = path.values();
  for (std::size_t i = 0; i < ts.size(); ++i) out << number(ts[i]) << ',' << number(xs[i]) << '\n';
  if (!out) fail(ErrorKind::io, "failed writing CSV");
}

SamplePath read_path_csv(std::istream& in, PathKind kind) {
  std::string line;
  if (!std::getline(in, line)) fail(ErrorKind::io, "empty CSV input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "t,value") fail(ErrorKind::io, "CSV header must be 't,value', got '" + line + "'");
  std::vector<double> ts, xs;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      fail(ErrorKind::io, "CSV line " + std::to_string(lineno) + ": expected two fields");
    }
    const auto parse = [&](std::string_view field) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
      if (ec != std::errc() || ptr != field.data() + field.size()) {
        fail(ErrorKind::io, "CSV line " + std::to_string(lineno) + ": bad number '" + std::string(field) + "'");
      }
      return v;
    };
    const std::string_view sv(line);
    ts.push_back(parse(sv.substr(0, comma)));
    xs.push_back(parse(sv.substr(comma + 1)));
  }
  try {
    return SamplePath(TimeGrid(std::move(ts)), std::move(xs), kind);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::usage) fail(ErrorKind::io, std::string("CSV path rejected: ") + e.what());
    throw;
  }
}

Json path_to_json(const SamplePath& path) {
  Json j;
  j["horizon"] = path.horizon();
  j["kind"] = path.kind() == PathKind::driver ? "driver" : "solution";
  if (path.origin()) {
    j["seed"] = path.origin()->master_seed;
    j["stream"] = path.origin()->stream_id;
  }
  j["times"] = std::vector<double>(path.times().begin(), path.times().end());
  j["values"] = std::vector<double>(path.values().begin(), path.values().end());
  return j;
}

SamplePath path_from_json(const Json& j) {
  const std::string what = "path JSON";
  check_keys(j, {"horizon", "kind", "seed", "stream", "times", "values"}, what);
  const auto kind_s = get<std::string>(j, "kind", what);
  require(kind_s == "driver" || kind_s == "solution", "path kind must be 'driver' or 'solution'");
  auto ts = get<std::vector<double>>(j, "times", what);
  auto xs = get<std::vector<double>>(j, "values", what);
  require(!ts.empty() && get<double>(j, "horizon", what) == ts.back(), "path horizon must equal the last time");
  std::optional<RngSpec> origin;
  if (j.contains("seed") || j.contains("stream")) {
    origin = RngSpec{get<std::uint64_t>(j, "seed", what), get<std::uint64_t>(j, "stream", what)};
  }
  return SamplePath(TimeGrid(std::move(ts)), std::move(xs), kind_s == "driver" ? PathKind::driver : PathKind::solution,
                    origin);
}

Json drift_to_json(const DriftSpec& spec) {
  Json j;
  j["variant"] = spec.name();
  std::visit(
      [&](const auto& d) {
        using D = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<D, drift::BridgeTwoSided>) {
          j["y"] = d.y;
          j["t_start"] = d.t_start;
          j["t_end"] = d.t_end;
        } else if constexpr (std::is_same_v<D, drift::Bes3>) {
          j["center"] = d.center;
          j["side"] = side_name(d.side);
        } else if constexpr (std::is_same_v<D, drift::BridgeOneSided>) {
          j["center"] = d.center;
          j["target"] = d.target;
          j["t_start"] = d.t_start;
          j["t_end"] = d.t_end;
          j["side"] = side_name(d.side);
        } else if constexpr (std::is_same_v<D, drift::NoWeak>) {
          j["tail"] = tail_name(d.tail);
          j["coefficient"] = d.coefficient;
        } else if constexpr (std::is_same_v<D, drift::Constant>) {
          j["c"] = d.c;
        }
      },
      spec.variant());
  return j;
}

DriftSpec drift_from_json(const Json& j) {
  const std::string what = "drift JSON";
  require(j.is_object(), what + " must be a JSON object");
  const auto v = get<std::string>(j, "variant", what);
  if (v == "bridge_two_sided") {
    check_keys(j, {"variant", "y", "t_start", "t_end"}, what);
    return DriftSpec(drift::BridgeTwoSided{get_or(j, "y", 1.0, what), get_or(j, "t_end", 1.0, what),
                                           get_or(j, "t_start", 0.0, what)});
  }
  if (v == "bes3") {
    check_keys(j, {"variant", "center", "side"}, what);
    return DriftSpec(drift::Bes3{get_or(j, "center", 0.0, what),
                                 side_from(get_or<std::string>(j, "side", "above", what))});
  }
  if (v == "bridge_one_sided") {
    check_keys(j, {"variant", "center", "target", "t_start", "t_end", "side"}, what);
    return DriftSpec(drift::BridgeOneSided{get<double>(j, "center", what), get<double>(j, "target", what),
                                           get_or(j, "t_start", 0.0, what), get_or(j, "t_end", 1.0, what),
                                           side_from(get<std::string>(j, "side", what))});
  }
  if (v == "no_weak") {
    check_keys(j, {"variant", "tail", "coefficient"}, what);
    return DriftSpec(drift::NoWeak{tail_from(get_or<std::string>(j, "tail", "zero", what)),
                                   get_or(j, "coefficient", 2.0, what)});
  }
  if (v == "ce1" || v == "ce2" || v == "ce2_modified") {
    check_keys(j, {"variant"}, what);
    if (v == "ce1") return DriftSpec(drift::CE1{});
    if (v == "ce2") return DriftSpec(drift::CE2{});
    return DriftSpec(drift::CE2Modified{});
  }
  if (v == "constant") {
    check_keys(j, {"variant", "c"}, what);
    return DriftSpec(drift::Constant{get_or(j, "c", 0.0, what)});
  }
  fail(ErrorKind::usage, "unknown drift variant '" + v + "'");
}

Json options_to_json(const SolveOptions& o) {
  Json j;
  j["h_base"] = o.h_base;
  j["max_refine_depth"] = o.max_refine_depth;
  j["sing_guard"] = o.sing_guard;
  j["pin_window"] = o.pin_window;
  j["boot_floor"] = o.boot_floor;
  j["step_growth_cap"] = o.step_growth_cap;
  j["pin_tolerance"] = o.pin_tolerance;
  j["quad_cells_per_step"] = o.quad_cells_per_step;
  return j;
}

SolveOptions options_from_json(const Json& j, SolveOptions o) {
  const std::string what = "solver options";
  check_keys(j,
             {"h_base", "max_refine_depth", "sing_guard", "pin_window", "boot_floor", "step_growth_cap",
              "pin_tolerance", "quad_cells_per_step"},
             what);
  if (j.contains("h_base")) {
    const double cap_ratio = o.step_growth_cap / o.h_base;
    o.h_base = get<double>(j, "h_base", what);
    o.step_growth_cap = cap_ratio * o.h_base;
  }
  o.max_refine_depth = get_or(j, "max_refine_depth", o.max_refine_depth, what);
  o.sing_guard = get_or(j, "sing_guard", o.sing_guard, what);
  o.pin_window = get_or(j, "pin_window", o.pin_window, what);
  o.boot_floor = get_or(j, "boot_floor", o.boot_floor, what);
  o.step_growth_cap = get_or(j, "step_growth_cap", o.step_growth_cap, what);
  o.pin_tolerance = get_or(j, "pin_tolerance", o.pin_tolerance, what);
  o.quad_cells_per_step = get_or(j, "quad_cells_per_step", o.quad_cells_per_step, what);
  o.validate();
  return o;
}

Json sidecar_to_json(const SolutionPath& sol) {
  Json j;
  j["start"] = sol.start();
  j["horizon"] = sol.horizon();
  j["nodes"] = sol.path.size();
  Json segs = Json::array();
  for (const auto& s : sol.segments) {
    segs.push_back(Json{{"t0", s.window.t0}, {"t1", s.window.t1}, {"role", s.role}, {"drift", drift_to_json(s.drift)}});
  }
  j["segments"] = segs;
  Json hits = Json::array();
  for (const auto& h : sol.hits) hits.push_back(Json{{"level", h.level}, {"time", h.time}});
  j["hits"] = hits;
  Json log = Json::array();
  for (const auto& b : sol.branch_log) {
    Json e{{"label", b.label}};
    e["value"] = b.value ? Json(*b.value) : Json(nullptr);
    e["detail"] = b.detail;
    log.push_back(e);
  }
  j["branch_log"] = log;
  Json pins = Json::array();
  for (const auto& p : sol.pins) pins.push_back(Json{{"time", p.time}, {"target", p.target}, {"raw", p.raw}});
  j["pins"] = pins;
  j["residual"] = sol.residual ? Json(*sol.residual) : Json(nullptr);
  j["refined_steps"] = sol.refined_steps;
  return j;
}

Json report_to_json(const VerificationReport& r, bool include_runtime) {
  Json j;
  j["test"] = r.test_name;
  j["n"] = r.n_paths;
  j["seed"] = r.master_seed;
  j["statistic"] = r.statistic;
  if (r.comparison == Comparison::between) {
    j["threshold"] = Json::array({r.threshold, r.threshold_upper});
  } else {
    j["threshold"] = r.threshold;
  }
  j["comparison"] = comparison_symbol(r.comparison);
  j["pass"] = r.pass;
  j["control"] = r.control;
  j["failures"] = r.per_path_failures;
  Json details = Json::object();
  for (const auto& [k, v] : r.details) details[k] = std::isfinite(v) ? Json(v) : Json(number(v));
  j["details"] = details;
  if (include_runtime) j["runtime_s"] = r.runtime_seconds;
  return j;
}

VerificationReport report_from_json(const Json& j) {
  const std::string what = "report JSON";
  check_keys(j, {"test", "n", "seed", "statistic", "threshold", "comparison", "pass", "control", "failures", "details",
                 "runtime_s"},
             what);
  VerificationReport r;
  r.test_name = get<std::string>(j, "test", what);
  r.n_paths = get<std::int64_t>(j, "n", what);
  r.master_seed = get<std::uint64_t>(j, "seed", what);
  r.statistic = get<double>(j, "statistic", what);
  r.comparison = comparison_from(get<std::string>(j, "comparison", what));
  if (r.comparison == Comparison::between) {
    const auto th = get<std::vector<double>>(j, "threshold", what);
    require(th.size() == 2, "interval threshold needs two bounds");
    r.threshold = th[0];
    r.threshold_upper = th[1];
  } else {
    r.threshold = get<double>(j, "threshold", what);
  }
  r.pass = get<bool>(j, "pass", what);
  r.control = get_or(j, "control", false, what);
  r.per_path_failures = get<std::vector<std::uint64_t>>(j, "failures", what);
  if (j.contains("details")) {
    for (const auto& [k, v] : j.at("details").items()) {
      r.details[k] = v.is_string() ? std::stod(v.get<std::string>()) : v.get<double>();
    }
  }
  r.runtime_seconds = get_or(j, "runtime_s", 0.0, what);
  return r;
}

SuiteConfig suite_config_from_json(const Json& j) {
  const std::string what = "suite config";
  require(j.is_object() && !j.empty(), "suite config is empty");
  check_keys(j, {"profile", "seed", "threads", "h_base", "driver_steps", "cancellation_coefficient", "controls", "tests"},
             what);
  SuiteConfig c;
  const auto profile = get_or<std::string>(j, "profile", "full", what);
  require(profile == "quick" || profile == "full", "profile must be 'quick' or 'full'");
  c.profile = profile == "quick" ? Profile::quick : Profile::full;
  c.seed = get_or(j, "seed", c.seed, what);
  c.threads = get_or(j, "threads", c.threads, what);
  c.h_base = get_or(j, "h_base", c.h_base, what);
  c.driver_steps = get_or(j, "driver_steps", c.driver_steps, what);
  c.cancellation_coefficient = get_or(j, "cancellation_coefficient", c.cancellation_coefficient, what);
  c.controls = get_or(j, "controls", c.controls, what);
  c.tests = get_or(j, "tests", c.tests, what);
  require(c.threads >= 1, "threads must be >= 1");
  require(c.driver_steps >= 1, "driver_steps must be >= 1");
  require(std::isfinite(c.h_base) && c.h_base > 0.0, "h_base must be positive");
  return c;
}

Json suite_config_to_json(const SuiteConfig& c) {
  Json j;
  j["profile"] = c.profile == Profile::quick ? "quick" : "full";
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["h_base"] = c.h_base;
  j["driver_steps"] = c.driver_steps;
  j["cancellation_coefficient"] = c.cancellation_coefficient;
  j["controls"] = c.controls;
  j["tests"] = c.tests;
  return j;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::io, "cannot open '" + path + "' for writing");
  out << text;
  if (!out) fail(ErrorKind::io, "failed writing '" + path + "'");
}

Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorKind::io, "malformed JSON in " + what + ": " + e.what());
  }
}

}  // namespace pbp
