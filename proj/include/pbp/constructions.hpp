#pragma once

#include <optional>
#include <span>

#include "pbp/solver.hpp"

namespace pbp {

enum class Sign { nonneg, nonpos };
enum class Ce1Branch { automatic, positive, negative };
enum class Ce2Variant { weak, alternative };

/// Solution of the two-sided bridge equation on [0,1] from 0 that keeps the
/// requested sign and ends at +y or -y.
SolutionPath bridge_solution(Sign sign, double y, const SamplePath& driver, const SolveOptions& opts);

/// dX = 1/(X - center) dt + dB on `window`, staying on `side` of the center.
SolutionPath bes3_extension(double x_start, double center, Side side, const SamplePath& driver, Window window,
                            const SolveOptions& opts, std::optional<double> stop_level = std::nullopt);

/// X_t = x_start + B_t - B_{t0} at the driver nodes of `window`; stops at the
/// first time the translation reaches `stop_level`, if given.
SolutionPath translate_driver(double x_start, const SamplePath& driver, Window window,
                              std::optional<double> stop_level = std::nullopt);

/// Path-by-path solution of the CE1 table on [0,3]. Automatic mode picks the
/// bridge sign from B_2 - B_1; forced branches must keep |X_2| > 1.
SolutionPath construct_ce1(const SamplePath& driver, Ce1Branch branch, const SolveOptions& opts);

/// Either the nonpositive weak solution of the CE2 table on [0,4] or the
/// alternative path-by-path solution that starts with the nonnegative bridge.
SolutionPath construct_ce2(const SamplePath& driver, Ce2Variant variant, const SolveOptions& opts);

/// Concatenates abutting segments. Junction values must agree within `tolerance`.
SolutionPath glue(std::span<const SolutionPath> segments, double tolerance);

/// Drift table against which a construction is checked.
DriftSpec ce1_drift();
DriftSpec ce2_drift();

}  // namespace pbp
