#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "pbp/solver.hpp"
#include "pbp/verify.hpp"

namespace pbp {

using Json = nlohmann::ordered_json;

/// CSV with header `t,value`, one node per line, 17 significant digits.
void write_path_csv(const SamplePath& path, std::ostream& out);
SamplePath read_path_csv(std::istream& in, PathKind kind);

Json path_to_json(const SamplePath& path);
SamplePath path_from_json(const Json& j);

Json drift_to_json(const DriftSpec& spec);
DriftSpec drift_from_json(const Json& j);

Json options_to_json(const SolveOptions& opts);
/// Starts from `base` and overrides the keys present in j.
SolveOptions options_from_json(const Json& j, SolveOptions base = {});

/// Diagnostics of a solution without its node values.
Json sidecar_to_json(const SolutionPath& sol);

Json report_to_json(const VerificationReport& r, bool include_runtime = true);
VerificationReport report_from_json(const Json& j);

/// Rejects empty objects and unknown keys.
SuiteConfig suite_config_from_json(const Json& j);
Json suite_config_to_json(const SuiteConfig& c);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
/// Parses JSON text, turning syntax errors into IoError.
Json parse_json(const std::string& text, const std::string& what);

}  // namespace pbp
