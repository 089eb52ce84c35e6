#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "pbp/drifts.hpp"
#include "pbp/paths.hpp"

namespace pbp {

struct Window {
  double t0;
  double t1;
};

/// Integrator tuning. Defaults correspond to h_base = 2^-14.
struct SolveOptions {
  double h_base = 1.0 / 16384.0;
  /// Halvings allowed below h_base; the smallest step is h_base * 2^-depth.
  int max_refine_depth = 30;
  /// Closest a step may bring the solution to a reciprocal singularity.
  double sing_guard = 1e-9;
  /// Terminal window of every bridge excluded from residual checks.
  double pin_window = 1e-4;
  /// Initial displacement when starting exactly on a reciprocal singularity.
  double boot_floor = 1e-8;
  /// Bound on |b_recip| * h / |x - a| per accepted step, i.e. the relative
  /// change of the distance to the nearest reciprocal center.
  double step_growth_cap = 128.0 / 16384.0;
  /// Bridge endpoints closer than this to the target are reported as the target.
  double pin_tolerance = 1e-6;
  int quad_cells_per_step = 8;

  /// Options for step h with the growth cap scaled proportionally, so that
  /// halving h refines every part of the discretisation.
  static SolveOptions with_step(double h_base);
  double min_step() const;
  void validate() const;
};

struct Segment {
  Window window;
  DriftSpec drift;
  std::string role;
};

struct Hit {
  double level;
  double time;
};

/// A labelled decision taken while building a solution. Labels used by the
/// constructions: C1, C2, C3, tau, tau0, weak, alt.
struct BranchEntry {
  std::string label;
  std::optional<double> value;
  std::string detail;
};

struct PinRecord {
  double time;
  double target;
  double raw;
};

struct SolutionPath {
  SamplePath path;
  std::vector<Segment> segments;
  std::vector<Hit> hits;
  std::vector<BranchEntry> branch_log;
  std::vector<PinRecord> pins;
  std::optional<double> residual;
  std::size_t refined_steps = 0;

  double start() const noexcept { return path.start(); }
  double horizon() const noexcept { return path.horizon(); }
  double front() const noexcept { return path.values().front(); }
  double back() const noexcept { return path.values().back(); }
  double operator()(double t) const { return path(t); }
};

/// Solves X_t = x0 + int_{t0}^t b(s, X_s) ds + (B_t - B_{t0}) on `window` for
/// the fixed piecewise-linear driver B. `side` selects the branch when x0 sits
/// on a singular point and must agree with one-sided primitives. When
/// `stop_level` is given, integration stops at the first crossing after t0.
SolutionPath solve_pathwise(const DriftSpec& spec, const SamplePath& driver, double x0, Window window,
                            const SolveOptions& opts, Side side = Side::none,
                            std::optional<double> stop_level = std::nullopt);

struct ResidualReport {
  double sup = 0.0;
  double time_of_sup = 0.0;
  std::size_t shifted_abscissae = 0;
  std::vector<Window> excluded;
};

/// Sup over candidate nodes of |X_t - X_{t0} - int b(s, X_s) ds - (B_t - B_{t0})|
/// with composite-midpoint quadrature, geometric subdivision toward singular
/// points, and the [t_end - pin_window, t_end] windows of every bridge skipped
/// (the defect is re-anchored after each skipped window).
ResidualReport residual_report(const DriftSpec& spec, const SamplePath& candidate, const SamplePath& driver,
                               Window window, int quad_cells_per_step, const SolveOptions& opts = {});

double residual_sup(const DriftSpec& spec, const SolutionPath& candidate, const SamplePath& driver,
                    Window window, int quad_cells_per_step, const SolveOptions& opts = {});

/// Earliest time in `window` where the linear interpolant reaches `level`.
std::optional<double> detect_hit(const SamplePath& path, double level, Window window);
std::optional<double> detect_hit(const SolutionPath& path, double level, Window window);

}  // namespace pbp
