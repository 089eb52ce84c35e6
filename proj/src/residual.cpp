#include <algorithm>
#include <cmath>
#include <limits>

#include "pbp/errors.hpp"
#include "pbp/solver.hpp"

namespace pbp {

namespace {

constexpr int kMaxGeometricLevels = 60;

class CellQuadrature {
 public:
  CellQuadrature(const DriftSpec& spec, int cells, double guard) : spec_(spec), cells_(cells), guard_(guard) {}

  // Integral of s -> b(s, x(s)) over [ta, tb] where x is linear from xa to xb.
  // The cell must lie inside one row of the drift table.
  double integrate(double ta, double tb, double xa, double xb) {
    const double dx = xb - xa;
    sing_ = singularity_locations(spec_, ta).points;

    double best = std::numeric_limits<double>::infinity();
    double theta_star = 0.0;
    double d_star = 0.0;
    for (double s : sing_) {
      const double th = dx != 0.0 ? std::clamp((s - xa) / dx, 0.0, 1.0) : 0.0;
      const double d = std::abs(xa + th * dx - s);
      if (d < std::abs(dx) && d / std::abs(dx) < best) {
        best = d / std::abs(dx);
        theta_star = th;
        d_star = d;
      }
    }
    ta_ = ta;
    len_ = tb - ta;
    xa_ = xa;
    dx_ = dx;
    if (!std::isfinite(best)) return midpoint(0.0, 1.0);
    double total = 0.0;
    if (theta_star > 0.0) total += geometric(theta_star, -theta_star, d_star);
    if (theta_star < 1.0) total += geometric(theta_star, 1.0 - theta_star, d_star);
    return total;
  }

  std::size_t shifted() const noexcept { return shifted_; }

 private:
  // Pieces [c + l/2^(k+1), c + l/2^k] shrinking toward c, then the innermost.
  double geometric(double center, double length, double d_star) {
    double total = 0.0;
    double outer = length;
    int k = 0;
    for (; k < kMaxGeometricLevels; ++k) {
      const double inner = 0.5 * outer;
      total += midpoint(center + inner, center + outer);
      outer = inner;
      if (std::abs(outer) * std::abs(dx_) <= 0.25 * d_star) break;
    }
    total += midpoint(center, center + outer);
    return total;
  }

  double midpoint(double th_a, double th_b) {
    if (th_a > th_b) std::swap(th_a, th_b);
    const double w = (th_b - th_a) / cells_;
    double sum = 0.0;
    for (int j = 0; j < cells_; ++j) {
      double th = th_a + (j + 0.5) * w;
      sum += sample(th, w);
    }
    return sum * w * len_;
  }

  double sample(double th, double w) {
    for (int attempt = 0; attempt < 4; ++attempt) {
      const double t = ta_ + th * len_;
      const double x = xa_ + th * dx_;
      const bool on_singular = std::find(sing_.begin(), sing_.end(), x) != sing_.end();
      if (!on_singular) {
        try {
          return eval_drift(spec_, t, x);
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::singular_point) throw;
        }
      }
      ++shifted_;
      th += guard_ * w;
    }
    return 0.0;
  }

  const DriftSpec& spec_;
  int cells_;
  double guard_;
  std::vector<double> sing_;
  double ta_ = 0.0, len_ = 0.0, xa_ = 0.0, dx_ = 0.0;
  std::size_t shifted_ = 0;
};

}  // namespace

ResidualReport residual_report(const DriftSpec& spec, const SamplePath& candidate, const SamplePath& driver,
                               Window window, int quad_cells_per_step, const SolveOptions& opts) {
  require(quad_cells_per_step >= 1, "quad_cells_per_step must be positive");
  require(window.t0 < window.t1, "residual window must be non-empty");
  require(candidate.grid().contains(window.t0) && candidate.grid().contains(window.t1),
          "residual window outside the candidate horizon");
  require(driver.grid().contains(window.t0) && driver.grid().contains(window.t1),
          "residual window outside the driver horizon");

  ResidualReport report;
  for (double te : spec.terminal_times()) {
    const double lo = std::max(window.t0, te - opts.pin_window);
    if (te > window.t0 && lo < window.t1) report.excluded.push_back(Window{lo, std::min(te, window.t1)});
  }

  // Nodes inside the window, with row breakpoints added so that every cell
  // lies within one row of the table.
  std::vector<double> ts{window.t0};
  for (double t : candidate.times()) {
    if (t > window.t0 && t < window.t1) ts.push_back(t);
  }
  for (double t : spec.breakpoints()) {
    if (t > window.t0 && t < window.t1) ts.push_back(t);
  }
  ts.push_back(window.t1);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

  const auto inside_excluded = [&](double t) {
    for (const auto& e : report.excluded) {
      if (t > e.t0 && t < e.t1) return true;
    }
    return false;
  };
  const auto crosses_excluded = [&](double a, double b) {
    for (const auto& e : report.excluded) {
      if (a < e.t1 && b > e.t0) return true;
    }
    return false;
  };

  CellQuadrature quad(spec, quad_cells_per_step, opts.sing_guard);
  double anchor_x = candidate(ts[0]);
  double anchor_b = driver(ts[0]);
  double integral = 0.0;
  bool pending_reset = false;
  double x_prev = anchor_x;
  report.time_of_sup = ts[0];

  for (std::size_t i = 1; i < ts.size(); ++i) {
    const double ta = ts[i - 1];
    const double tb = ts[i];
    const double xb = candidate(tb);
    if (crosses_excluded(ta, tb)) {
      pending_reset = true;
    } else if (!pending_reset) {
      integral += quad.integrate(ta, tb, x_prev, xb);
    }
    x_prev = xb;
    if (inside_excluded(tb)) continue;
    if (pending_reset) {
      anchor_x = xb;
      anchor_b = driver(tb);
      integral = 0.0;
      pending_reset = false;
      continue;
    }
    const double defect = std::abs(xb - anchor_x - integral - (driver(tb) - anchor_b));
    if (defect > report.sup) {
      report.sup = defect;
      report.time_of_sup = tb;
    }
  }
  report.shifted_abscissae = quad.shifted();
  return report;
}

double residual_sup(const DriftSpec& spec, const SolutionPath& candidate, const SamplePath& driver, Window window,
                    int quad_cells_per_step, const SolveOptions& opts) {
  return residual_report(spec, candidate.path, driver, window, quad_cells_per_step, opts).sup;
}

}  // namespace pbp
