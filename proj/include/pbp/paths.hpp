#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pbp/rng.hpp"

namespace pbp {

/// Strictly increasing, finite time points. Driver grids start at 0; solution
/// grids start wherever their window does.
class TimeGrid {
 public:
  explicit TimeGrid(std::vector<double> times);

  std::span<const double> times() const noexcept { return times_; }
  double start() const noexcept { return times_.front(); }
  double horizon() const noexcept { return times_.back(); }
  std::size_t size() const noexcept { return times_.size(); }
  double operator[](std::size_t i) const noexcept { return times_[i]; }

  /// Index i of the cell [t_i, t_{i+1}] holding t (the last cell for t = T).
  std::size_t cell_of(double t) const;
  bool contains(double t) const noexcept { return t >= start() && t <= horizon(); }

 private:
  std::vector<double> times_;
};

enum class PathKind { driver, solution };

/// Continuous path given by node values and linear interpolation in between.
class SamplePath {
 public:
  SamplePath(TimeGrid grid, std::vector<double> values, PathKind kind,
             std::optional<RngSpec> origin = std::nullopt);

  const TimeGrid& grid() const noexcept { return grid_; }
  std::span<const double> times() const noexcept { return grid_.times(); }
  std::span<const double> values() const noexcept { return values_; }
  PathKind kind() const noexcept { return kind_; }
  const std::optional<RngSpec>& origin() const noexcept { return origin_; }
  std::size_t size() const noexcept { return values_.size(); }
  double start() const noexcept { return grid_.start(); }
  double horizon() const noexcept { return grid_.horizon(); }

  double operator()(double t) const;

 private:
  TimeGrid grid_;
  std::vector<double> values_;
  PathKind kind_;
  std::optional<RngSpec> origin_;
};

TimeGrid make_uniform_grid(double horizon, std::int64_t n);

/// Brownian motion sampled on `grid`: zero at the first node, independent
/// N(0, dt) increments drawn from the substream `rng`.
SamplePath sample_brownian(const TimeGrid& grid, RngSpec rng);

/// Identically zero driver on a uniform grid.
SamplePath zero_driver(double horizon, std::int64_t n);

/// Inserts Brownian-bridge midpoints into every cell that meets (a, b),
/// `levels` times over. Original nodes keep their values bit for bit.
SamplePath refine_bridge(const SamplePath& path, double a, double b, int levels, RngSpec rng);

double eval_path(const SamplePath& path, double t);

}  // namespace pbp
