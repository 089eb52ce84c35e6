#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace pbp::cli {

using Json = nlohmann::ordered_json;

/// Bad flag, bad config key or bad value; the CLI exits with code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ValueType { text, integer, count, real, boolean, text_list, drift };

struct KeySpec {
  std::string key;
  ValueType type;
  std::string help;
  std::vector<std::string> commands;
};

const std::vector<std::string>& commands();
const std::vector<KeySpec>& key_specs();

/// Fully resolved settings of one invocation.
struct RunConfig {
  std::string command;
  Json values = Json::object();
  /// Where the seed came from: flag, file, env or default.
  std::string seed_source;

  bool has(const std::string& key) const { return values.contains(key); }
  std::string text(const std::string& key) const;
  std::int64_t integer(const std::string& key) const;
  std::uint64_t count(const std::string& key) const;
  double real(const std::string& key) const;
  bool boolean(const std::string& key) const;
  std::vector<std::string> text_list(const std::string& key) const;
  Json to_json() const;
};

struct ParseResult {
  std::optional<RunConfig> config;
  /// Set instead of config when help was requested.
  std::string help;
};

/// Reads `pbp <command> [flags]`, merging an optional JSON config file given
/// with --config. Flags override file values; env_seed, when set, replaces
/// the built-in default seed.
ParseResult parse_config(const std::vector<std::string>& args, const char* env_seed = nullptr);

}  // namespace pbp::cli
