#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

namespace pbp::cli {

namespace {

const std::vector<std::string> kAll{"gen-driver", "simulate", "construct", "verify-suite", "residual"};
const std::vector<std::string> kSolve{"simulate", "construct", "residual"};

std::string flag_of(const std::string& key) {
  std::string f = key;
  std::replace(f.begin(), f.end(), '_', '-');
  return "--" + f;
}

const KeySpec& spec_of(const std::string& key) {
  for (const auto& s : key_specs()) {
    if (s.key == key) return s;
  }
  throw UsageError("unknown key '" + key + "'");
}

bool applies(const KeySpec& s, const std::string& command) {
  return std::find(s.commands.begin(), s.commands.end(), command) != s.commands.end();
}

Json parse_number(const std::string& key, const std::string& text, ValueType type) {
  const char* b = text.data();
  const char* e = text.data() + text.size();
  if (type == ValueType::real) {
    double v = 0.0;
    const auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e || !std::isfinite(v)) throw UsageError(key + ": expected a real number, got '" + text + "'");
    return v;
  }
  std::int64_t v = 0;
  const auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e) throw UsageError(key + ": expected an integer, got '" + text + "'");
  if (type == ValueType::count && v < 0) throw UsageError(key + ": must be non-negative, got " + text);
  return type == ValueType::count ? Json(static_cast<std::uint64_t>(v)) : Json(v);
}

// Converts a flag string into the JSON value a config file would hold.
Json from_flag(const KeySpec& s, const std::string& text) {
  switch (s.type) {
    case ValueType::text: return text;
    case ValueType::integer:
    case ValueType::count:
    case ValueType::real: return parse_number(s.key, text, s.type);
    case ValueType::boolean:
      if (text == "true" || text == "1") return true;
      if (text == "false" || text == "0") return false;
      throw UsageError(s.key + ": expected true or false, got '" + text + "'");
    case ValueType::text_list: {
      Json list = Json::array();
      std::stringstream ss(text);
      std::string item;
      while (std::getline(ss, item, ',')) {
        if (!item.empty()) list.push_back(item);
      }
      return list;
    }
    case ValueType::drift:
      if (!text.empty() && text.front() == '{') {
        try {
          return Json::parse(text);
        } catch (const nlohmann::json::parse_error&) {
          throw UsageError("drift: malformed JSON '" + text + "'");
        }
      }
      return text;
  }
  return text;
}

void check_type(const KeySpec& s, const Json& v) {
  bool ok = false;
  switch (s.type) {
    case ValueType::text: ok = v.is_string(); break;
    case ValueType::integer: ok = v.is_number_integer(); break;
    case ValueType::count: ok = v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0); break;
    case ValueType::real: ok = v.is_number(); break;
    case ValueType::boolean: ok = v.is_boolean(); break;
    case ValueType::text_list:
      ok = v.is_array() && std::all_of(v.begin(), v.end(), [](const Json& x) { return x.is_string(); });
      break;
    case ValueType::drift: ok = v.is_string() || v.is_object(); break;
  }
  if (!ok) throw UsageError("key '" + s.key + "' has the wrong type");
}

void require_choice(const RunConfig& c, const std::string& key, std::initializer_list<const char*> choices) {
  if (!c.has(key)) return;
  const auto v = c.text(key);
  for (const char* ch : choices) {
    if (v == ch) return;
  }
  std::string list;
  for (const char* ch : choices) list += std::string(list.empty() ? "" : ", ") + ch;
  throw UsageError(key + " must be one of " + list + "; got '" + v + "'");
}

void require_positive(const RunConfig& c, const std::string& key) {
  if (!c.has(key)) return;
  const double v = c.values.at(key).get<double>();
  if (!(v > 0.0)) throw UsageError(key + " must be positive");
}

void set_default(RunConfig& c, const std::string& key, Json v) {
  if (!c.has(key) && applies(spec_of(key), c.command)) c.values[key] = std::move(v);
}

}  // namespace

const std::vector<std::string>& commands() { return kAll; }

const std::vector<KeySpec>& key_specs() {
  static const std::vector<KeySpec> specs{
      {"seed", ValueType::count, "master seed (default from PBP_SEED, else 1)", kAll},
      {"stream", ValueType::count, "substream id of the driver", {"gen-driver", "simulate", "construct"}},
      {"threads", ValueType::integer, "worker threads; results do not depend on it", kAll},
      {"steps", ValueType::integer, "driver cells per unit time", {"gen-driver", "simulate", "construct", "verify-suite"}},
      {"T", ValueType::real, "horizon", {"gen-driver", "simulate"}},
      {"driver", ValueType::text, "zero | brownian | csv:<path>", {"gen-driver", "simulate", "construct", "residual"}},
      {"refine_levels", ValueType::integer, "bridge refinement passes", {"gen-driver"}},
      {"refine_from", ValueType::real, "start of the refined window", {"gen-driver"}},
      {"refine_to", ValueType::real, "end of the refined window", {"gen-driver"}},
      {"drift", ValueType::drift, "variant name or drift JSON object", {"simulate", "residual"}},
      {"center", ValueType::real, "drift parameter", {"simulate", "residual"}},
      {"target", ValueType::real, "drift parameter", {"simulate", "residual"}},
      {"y", ValueType::real, "bridge level", {"simulate", "construct", "residual"}},
      {"t_start", ValueType::real, "drift parameter", {"simulate", "residual"}},
      {"t_end", ValueType::real, "drift parameter", {"simulate", "residual"}},
      {"c", ValueType::real, "constant drift value", {"simulate", "residual"}},
      {"coefficient", ValueType::real, "no-weak drift coefficient", {"simulate", "residual"}},
      {"side", ValueType::text, "drift side: above | below", {"simulate", "residual"}},
      {"tail", ValueType::text, "no-weak drift tail: zero | reciprocal_shifted", {"simulate", "residual"}},
      {"x0", ValueType::real, "initial value", {"simulate"}},
      {"t0", ValueType::real, "window start", {"simulate", "residual"}},
      {"t1", ValueType::real, "window end", {"simulate", "residual"}},
      {"start_side", ValueType::text, "branch when starting on a singularity: none | above | below", {"simulate"}},
      {"stop_level", ValueType::real, "stop at the first crossing of this level", {"simulate"}},
      {"case", ValueType::text, "bridge | ce1 | ce2", {"construct"}},
      {"branch", ValueType::text, "CE1 branch: auto | positive | negative", {"construct"}},
      {"variant", ValueType::text, "CE2 variant: weak | alternative", {"construct"}},
      {"sign", ValueType::text, "bridge sign: nonneg | nonpos", {"construct"}},
      {"candidate", ValueType::text, "CSV file of the candidate path", {"residual"}},
      {"tolerance", ValueType::real, "residual tolerance", {"residual"}},
      {"out", ValueType::text, "output file, - for stdout", {"gen-driver", "simulate", "construct", "verify-suite"}},
      {"sidecar", ValueType::text, "diagnostics JSON file", {"simulate", "construct"}},
      {"format", ValueType::text, "csv | json", {"gen-driver", "simulate", "construct"}},
      {"check_residual", ValueType::boolean, "compute the residual of the result", {"simulate", "construct"}},
      {"h_base", ValueType::real, "solver base step", {"simulate", "construct", "residual", "verify-suite"}},
      {"profile", ValueType::text, "quick | full", {"verify-suite"}},
      {"tests", ValueType::text_list, "comma separated subset of suite tests", {"verify-suite"}},
      {"cancellation_coefficient", ValueType::real, "coefficient used by the cancellation test", {"verify-suite"}},
      {"controls", ValueType::boolean, "also run the negative controls", {"verify-suite"}},
  };
  return specs;
}

std::string RunConfig::text(const std::string& key) const { return values.at(key).get<std::string>(); }
std::int64_t RunConfig::integer(const std::string& key) const { return values.at(key).get<std::int64_t>(); }
std::uint64_t RunConfig::count(const std::string& key) const { return values.at(key).get<std::uint64_t>(); }
double RunConfig::real(const std::string& key) const { return values.at(key).get<double>(); }
bool RunConfig::boolean(const std::string& key) const { return values.at(key).get<bool>(); }
std::vector<std::string> RunConfig::text_list(const std::string& key) const {
  return values.at(key).get<std::vector<std::string>>();
}

Json RunConfig::to_json() const {
  Json j;
  j["command"] = command;
  for (const auto& [k, v] : values.items()) j[k] = v;
  j["seed_source"] = seed_source;
  return j;
}

ParseResult parse_config(const std::vector<std::string>& args, const char* env_seed) {
  CLI::App app{"Pathwise solutions of singular-drift SDEs", "pbp"};
  app.set_help_all_flag("--help-all", "help for every command");
  app.require_subcommand(1);
  std::string config_file;
  app.add_option("--config", config_file, "JSON config file")->check(CLI::ExistingFile);
  std::vector<std::pair<const KeySpec*, std::string>> slots;
  slots.reserve(key_specs().size());
  for (const auto& s : key_specs()) slots.emplace_back(&s, std::string());
  for (auto& [spec, store] : slots) app.add_option(flag_of(spec->key), store, spec->help);
  for (const auto& c : kAll) app.add_subcommand(c)->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    return ParseResult{std::nullopt, app.help()};
  } catch (const CLI::CallForAllHelp&) {
    return ParseResult{std::nullopt, app.help("", CLI::AppFormatMode::All)};
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  RunConfig cfg;
  cfg.command = app.get_subcommands().front()->get_name();

  Json file = Json::object();
  if (!config_file.empty()) {
    std::ifstream in(config_file);
    try {
      file = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw UsageError("config file: " + std::string(e.what()));
    }
    if (!file.is_object()) throw UsageError("config file must hold a JSON object");
  }
  if (file.contains("command")) {
    if (!file["command"].is_string() || file["command"].get<std::string>() != cfg.command) {
      throw UsageError("config file is for command '" + file["command"].dump() + "', not '" + cfg.command + "'");
    }
    file.erase("command");
  }
  for (const auto& [key, value] : file.items()) {
    const auto& s = spec_of(key);
    if (!applies(s, cfg.command)) throw UsageError("key '" + key + "' does not apply to " + cfg.command);
    check_type(s, value);
    cfg.values[key] = value;
  }
  cfg.seed_source = file.contains("seed") ? "file" : "default";
  for (const auto& [spec, store] : slots) {
    if (app.get_option(flag_of(spec->key))->count() == 0) continue;
    if (!applies(*spec, cfg.command)) throw UsageError(flag_of(spec->key) + " does not apply to " + cfg.command);
    cfg.values[spec->key] = from_flag(*spec, store);
    if (spec->key == "seed") cfg.seed_source = "flag";
  }
  if (!cfg.has("seed")) {
    if (env_seed != nullptr && *env_seed != '\0') {
      cfg.values["seed"] = parse_number("PBP_SEED", env_seed, ValueType::count);
      cfg.seed_source = "env";
    } else {
      cfg.values["seed"] = 1;
    }
  }

  set_default(cfg, "stream", 0);
  set_default(cfg, "threads", 1);
  set_default(cfg, "steps", 1024);
  set_default(cfg, "T", 1.0);
  set_default(cfg, "driver", "brownian");
  set_default(cfg, "refine_levels", 0);
  set_default(cfg, "x0", 0.0);
  set_default(cfg, "start_side", "none");
  set_default(cfg, "case", "ce1");
  set_default(cfg, "branch", "auto");
  set_default(cfg, "variant", "weak");
  set_default(cfg, "sign", "nonneg");
  set_default(cfg, "tolerance", 5e-3);
  set_default(cfg, "out", "-");
  set_default(cfg, "format", "csv");
  set_default(cfg, "check_residual", true);
  set_default(cfg, "h_base", 1.0 / 16384.0);
  set_default(cfg, "profile", "full");
  set_default(cfg, "tests", Json::array());
  set_default(cfg, "cancellation_coefficient", 2.0);
  set_default(cfg, "controls", true);

  if (cfg.integer("threads") < 1) throw UsageError("threads must be >= 1");
  if (cfg.has("steps") && cfg.integer("steps") < 1) throw UsageError("steps must be >= 1");
  if (cfg.has("refine_levels") && cfg.integer("refine_levels") < 0) throw UsageError("refine_levels must be >= 0");
  require_positive(cfg, "T");
  require_positive(cfg, "h_base");
  require_positive(cfg, "y");
  require_positive(cfg, "tolerance");
  require_choice(cfg, "start_side", {"none", "above", "below"});
  require_choice(cfg, "case", {"bridge", "ce1", "ce2"});
  require_choice(cfg, "branch", {"auto", "positive", "negative"});
  require_choice(cfg, "variant", {"weak", "alternative"});
  require_choice(cfg, "sign", {"nonneg", "nonpos"});
  require_choice(cfg, "format", {"csv", "json"});
  require_choice(cfg, "profile", {"quick", "full"});
  require_choice(cfg, "side", {"above", "below"});
  if (cfg.has("driver")) {
    const auto d = cfg.text("driver");
    if (d != "zero" && d != "brownian" && d.rfind("csv:", 0) != 0) {
      throw UsageError("driver must be zero, brownian or csv:<path>; got '" + d + "'");
    }
  }
  if ((cfg.command == "simulate" || cfg.command == "residual") && !cfg.has("drift")) {
    throw UsageError(cfg.command + " needs --drift");
  }
  if (cfg.command == "residual") {
    if (!cfg.has("candidate")) throw UsageError("residual needs --candidate");
    if (cfg.text("driver").rfind("csv:", 0) != 0) throw UsageError("residual needs --driver csv:<path>");
  }
  return ParseResult{std::move(cfg), {}};
}

}  // namespace pbp::cli
