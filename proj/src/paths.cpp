#include "pbp/paths.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "pbp/errors.hpp"

namespace pbp {

namespace {

std::string fmt_time(double t) {
  std::ostringstream os;
  os.precision(17);
  os << t;
  return os.str();
}

}  // namespace

TimeGrid::TimeGrid(std::vector<double> times) : times_(std::move(times)) {
  require(times_.size() >= 2, "time grid needs at least two points");
  for (std::size_t i = 0; i < times_.size(); ++i) {
    require(std::isfinite(times_[i]), "time grid contains a non-finite point");
    if (i > 0) require(times_[i] > times_[i - 1], "time grid must be strictly increasing");
  }
}

std::size_t TimeGrid::cell_of(double t) const {
  if (!contains(t)) fail(ErrorKind::usage, "time " + fmt_time(t) + " outside grid");
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  std::size_t idx = static_cast<std::size_t>(it - times_.begin());
  if (idx == 0) return 0;
  return std::min(idx - 1, times_.size() - 2);
}

SamplePath::SamplePath(TimeGrid grid, std::vector<double> values, PathKind kind,
                       std::optional<RngSpec> origin)
    : grid_(std::move(grid)), values_(std::move(values)), kind_(kind), origin_(origin) {
  require(values_.size() == grid_.size(), "path values and grid differ in length");
  for (double v : values_) {
    if (!std::isfinite(v)) fail(ErrorKind::non_finite, "path contains a non-finite value");
  }
}

double SamplePath::operator()(double t) const {
  const std::size_t i = grid_.cell_of(t);
  const double t0 = grid_[i];
  const double t1 = grid_[i + 1];
  if (t == t0) return values_[i];
  if (t == t1) return values_[i + 1];
  const double w = (t - t0) / (t1 - t0);
  return values_[i] + w * (values_[i + 1] - values_[i]);
}

double eval_path(const SamplePath& path, double t) { return path(t); }

TimeGrid make_uniform_grid(double horizon, std::int64_t n) {
  require(std::isfinite(horizon) && horizon > 0.0, "horizon must be positive");
  require(n >= 1, "grid needs at least one cell");
  std::vector<double> times(static_cast<std::size_t>(n) + 1);
  const double dn = static_cast<double>(n);
  for (std::int64_t k = 0; k <= n; ++k) {
    times[static_cast<std::size_t>(k)] = (horizon * static_cast<double>(k)) / dn;
  }
  times.back() = horizon;
  return TimeGrid(std::move(times));
}

SamplePath sample_brownian(const TimeGrid& grid, RngSpec rng) {
  RandomStream stream(rng);
  std::vector<double> values(grid.size());
  values[0] = 0.0;
  double b = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    b += std::sqrt(grid[i] - grid[i - 1]) * stream.normal();
    values[i] = b;
  }
  return SamplePath(grid, std::move(values), PathKind::driver, rng);
}

SamplePath zero_driver(double horizon, std::int64_t n) {
  TimeGrid grid = make_uniform_grid(horizon, n);
  std::vector<double> values(grid.size(), 0.0);
  return SamplePath(std::move(grid), std::move(values), PathKind::driver);
}

SamplePath refine_bridge(const SamplePath& path, double a, double b, int levels, RngSpec rng) {
  require(path.kind() == PathKind::driver, "bridge refinement applies to driver paths");
  require(levels >= 1, "refinement needs at least one level");
  require(a < b, "refinement interval must be non-empty");
  require(path.grid().contains(a) && path.grid().contains(b), "refinement interval outside horizon");

  RandomStream stream(rng);
  std::vector<double> times(path.times().begin(), path.times().end());
  std::vector<double> values(path.values().begin(), path.values().end());
  for (int level = 0; level < levels; ++level) {
    std::vector<double> nt;
    std::vector<double> nv;
    nt.reserve(times.size() * 2);
    nv.reserve(times.size() * 2);
    for (std::size_t i = 0; i + 1 < times.size(); ++i) {
      nt.push_back(times[i]);
      nv.push_back(values[i]);
      const double t0 = times[i];
      const double t1 = times[i + 1];
      if (t1 <= a || t0 >= b) continue;
      const double mid = 0.5 * (t0 + t1);
      if (!(mid > t0 && mid < t1)) continue;
      const double mean = 0.5 * (values[i] + values[i + 1]);
      nt.push_back(mid);
      nv.push_back(mean + 0.5 * std::sqrt(t1 - t0) * stream.normal());
    }
    nt.push_back(times.back());
    nv.push_back(values.back());
    times = std::move(nt);
    values = std::move(nv);
  }
  return SamplePath(TimeGrid(std::move(times)), std::move(values), PathKind::driver, path.origin());
}

}  // namespace pbp
