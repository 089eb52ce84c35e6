#include "pbp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pbp/errors.hpp"

namespace pbp {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

int side_sign(Side side) { return side == Side::above ? 1 : side == Side::below ? -1 : 0; }

// Piece bordering the point x on the given side, for starts on a gap point.
const Piece* adjacent_piece(const Row& row, double x, Side side) {
  for (const auto& p : row.pieces) {
    if (side == Side::above && p.lo == x && !p.lo_closed) return &p;
    if (side == Side::below && p.hi == x && !p.hi_closed) return &p;
  }
  return nullptr;
}

// Driver restricted to one of its cells; exact at the cell ends.
struct DriverCell {
  double t0, t1, b0, b1, slope;

  double at(double t) const {
    if (t == t0) return b0;
    if (t == t1) return b1;
    return b0 + slope * (t - t0);
  }
};

class Integrator {
 public:
  Integrator(const DriftSpec& spec, const SamplePath& driver, const SolveOptions& opts,
             std::optional<double> stop_level)
      : spec_(spec), driver_(driver), opts_(opts), stop_level_(stop_level), h_min_(opts.min_step()) {}

  SolutionPath run(double x0, Window w, Side side);

 private:
  // Exact flow of x' = bridge(t, x) + constant + driver slope over [ta, tb].
  double linear_flow(const Piece& p, const DriverCell& cell, double ta, double tb, double x) const {
    const double db = cell.at(tb) - cell.at(ta);
    const double drift = p.constant * (tb - ta);
    if (!p.bridge) return x + db + drift;
    const double t_end = p.bridge->t_end;
    const double y = p.bridge->target;
    if (tb >= t_end) return y;
    const double ra = t_end - ta;
    const double rb = t_end - tb;
    const double rate = (db + drift) / (tb - ta);
    return y + (x - y) * (rb / ra) + rate * rb * std::log(ra / rb);
  }

  // One Strang step: half linear flow, exact reciprocal flow, half linear flow.
  // Returns nullopt when the step would cross or touch a reciprocal center.
  std::optional<double> attempt(const Piece& p, const DriverCell& cell, double t, double tn, double x) const {
    if (!p.recip) return linear_flow(p, cell, t, tn, x);
    const double c = p.recip->center;
    const double coef = p.recip->coef;
    const int s0 = sign_of(x - c);
    const double tm = t + 0.5 * (tn - t);
    const double u1 = linear_flow(p, cell, t, tm, x) - c;
    if (sign_of(u1) != s0 || std::abs(u1) < opts_.sing_guard) return std::nullopt;
    const double sq = u1 * u1 + 2.0 * coef * (tn - t);
    if (!(sq >= opts_.sing_guard * opts_.sing_guard)) return std::nullopt;
    const double u2 = s0 * std::sqrt(sq);
    const double x3 = linear_flow(p, cell, tm, tn, c + u2);
    const double u3 = x3 - c;
    if (sign_of(u3) != s0 || std::abs(u3) < opts_.sing_guard) return std::nullopt;
    return x3;
  }

  const Piece* piece_at(const Row& row, double x) const {
    if (const Piece* p = row.find(x)) return p;
    return adjacent_piece(row, x, last_side_);
  }

  void advance(const Row& row, const DriverCell& cell, double a, double b, SolutionPath& out);

  const DriftSpec& spec_;
  const SamplePath& driver_;
  const SolveOptions& opts_;
  std::optional<double> stop_level_;
  double h_min_;

  std::vector<double> ts_;
  std::vector<double> xs_;
  double x_ = 0.0;
  double h_try_ = 0.0;
  double base_len_ = 0.0;
  Side last_side_ = Side::none;
  bool stopped_ = false;
  std::size_t refined_ = 0;
};

void Integrator::advance(const Row& row, const DriverCell& cell, double a, double b, SolutionPath& out) {
  double t = a;
  h_try_ = std::min(h_try_, b - a);
  while (t < b && !stopped_) {
    double h = std::min(h_try_, b - t);
    const bool last = h >= b - t;
    const double tn = last ? b : t + h;
    h = tn - t;

    const Piece* p = piece_at(row, x_);
    static const Piece zero_piece{};
    const Piece& piece = p ? *p : zero_piece;

    if (piece.recip && h > h_min_) {
      const double u = x_ - piece.recip->center;
      if (std::abs(piece.recip->coef) * h > opts_.step_growth_cap * u * u) {
        h_try_ = 0.5 * h;
        continue;
      }
    }

    const auto next = attempt(piece, cell, t, tn, x_);
    if (!next) {
      if (0.5 * h < h_min_) {
        fail(ErrorKind::step_underflow, "refinement exhausted near a singularity of " + spec_.name() +
                                            " at t=" + fmt(t) + ", x=" + fmt(x_));
      }
      h_try_ = 0.5 * h;
      continue;
    }
    double xn = *next;
    if (!std::isfinite(xn)) {
      fail(ErrorKind::non_finite, "solution became non-finite at t=" + fmt(tn));
    }
    if (piece.recip) last_side_ = xn > piece.recip->center ? Side::above : Side::below;

    if (piece.bridge && tn == piece.bridge->t_end) {
      const double raw = xn;
      if (std::abs(raw - piece.bridge->target) < opts_.pin_tolerance) xn = piece.bridge->target;
      out.pins.push_back(PinRecord{tn, piece.bridge->target, raw});
    }

    if (stop_level_) {
      const double lvl = *stop_level_;
      const double prev = x_;
      if (xn == lvl || (prev != lvl && sign_of(prev - lvl) != sign_of(xn - lvl))) {
        const double theta = xn == lvl ? 1.0 : (lvl - prev) / (xn - prev);
        const double t_hit = theta >= 1.0 ? tn : t + theta * (tn - t);
        if (t_hit > ts_.back()) {
          ts_.push_back(t_hit);
          xs_.push_back(lvl);
        } else {
          xs_.back() = lvl;
        }
        out.hits.push_back(Hit{lvl, ts_.back()});
        x_ = lvl;
        stopped_ = true;
        return;
      }
    }

    if (h < base_len_) ++refined_;
    ts_.push_back(tn);
    xs_.push_back(xn);
    x_ = xn;
    t = tn;
    h_try_ = std::min(2.0 * h, base_len_);
  }
}

SolutionPath Integrator::run(double x0, Window w, Side side) {
  const Row& first_row = spec_.row_at(w.t0);
  x_ = x0;
  ts_ = {w.t0};
  xs_ = {x0};
  last_side_ = side;

  // Starting on a gap point of the table: follow the declared side.
  const Piece* start = first_row.find(x0);
  if (start == nullptr) {
    bool singular = false;
    for (const auto& p : first_row.pieces) singular = singular || (p.recip && p.recip->center == x0);
    if (singular) {
      if (side == Side::none) {
        fail(ErrorKind::usage, "x0=" + fmt(x0) + " is a singular point of " + spec_.name() +
                                   "; a side must be declared");
      }
      start = adjacent_piece(first_row, x0, side);
    }
  }
  if (start && start->recip && start->recip->center == x0) {
    x_ = x0 + side_sign(side) * opts_.boot_floor;
    h_try_ = h_min_;
  } else {
    h_try_ = opts_.h_base;
  }

  // Stepping marks: window ends, driver nodes and row breakpoints inside.
  std::vector<double> marks{w.t0, w.t1};
  for (double t : driver_.times()) {
    if (t > w.t0 && t < w.t1) marks.push_back(t);
  }
  for (double t : spec_.breakpoints()) {
    if (t > w.t0 && t < w.t1) marks.push_back(t);
  }
  std::sort(marks.begin(), marks.end());
  marks.erase(std::unique(marks.begin(), marks.end()), marks.end());

  SolutionPath out{SamplePath(TimeGrid({0.0, 1.0}), {0.0, 0.0}, PathKind::solution), {}, {}, {}, {}, {}, 0};
  ts_.reserve(static_cast<std::size_t>((w.t1 - w.t0) / opts_.h_base) + marks.size() + 16);
  xs_.reserve(ts_.capacity());

  for (std::size_t k = 0; k + 1 < marks.size() && !stopped_; ++k) {
    const double m0 = marks[k];
    const double m1 = marks[k + 1];
    const std::size_t ci = driver_.grid().cell_of(0.5 * (m0 + m1));
    const auto times = driver_.times();
    const auto values = driver_.values();
    DriverCell cell{times[ci], times[ci + 1], values[ci], values[ci + 1],
                    (values[ci + 1] - values[ci]) / (times[ci + 1] - times[ci])};
    const Row& row = spec_.row_at(m0);
    const double len = m1 - m0;
    const auto n_sub = static_cast<std::size_t>(std::max(1.0, std::ceil(len / opts_.h_base - 1e-9)));
    base_len_ = len / static_cast<double>(n_sub);
    for (std::size_t j = 0; j < n_sub && !stopped_; ++j) {
      const double a = j == 0 ? m0 : m0 + static_cast<double>(j) * base_len_;
      const double b = j + 1 == n_sub ? m1 : m0 + static_cast<double>(j + 1) * base_len_;
      advance(row, cell, a, b, out);
    }
  }

  out.path = SamplePath(TimeGrid(std::move(ts_)), std::move(xs_), PathKind::solution);
  out.segments.push_back(Segment{Window{w.t0, out.path.horizon()}, spec_, ""});
  out.refined_steps = refined_;
  return out;
}

}  // namespace

SolveOptions SolveOptions::with_step(double h_base) {
  SolveOptions o;
  o.h_base = h_base;
  o.step_growth_cap = 128.0 * h_base;
  return o;
}

double SolveOptions::min_step() const { return std::ldexp(h_base, -max_refine_depth); }

void SolveOptions::validate() const {
  require(std::isfinite(h_base) && h_base > 0.0, "h_base must be positive");
  require(max_refine_depth >= 1 && max_refine_depth <= 60, "max_refine_depth must lie in [1, 60]");
  require(sing_guard > 0.0, "sing_guard must be positive");
  require(pin_window > 0.0, "pin_window must be positive");
  require(boot_floor > sing_guard, "boot_floor must exceed sing_guard");
  require(step_growth_cap > 0.0, "step_growth_cap must be positive");
  require(pin_tolerance > 0.0, "pin_tolerance must be positive");
  require(quad_cells_per_step >= 1, "quad_cells_per_step must be positive");
}

SolutionPath solve_pathwise(const DriftSpec& spec, const SamplePath& driver, double x0, Window window,
                            const SolveOptions& opts, Side side, std::optional<double> stop_level) {
  opts.validate();
  require(window.t0 < window.t1, "solve window must be non-empty");
  require(driver.grid().contains(window.t0) && driver.grid().contains(window.t1),
          "solve window outside the driver horizon");
  require(window.t0 >= spec.window_start(), "solve window starts before the drift window");
  require(spec.end_closed() ? window.t1 <= spec.window_end() : window.t1 <= spec.window_end(),
          "solve window ends after the drift window");
  if (!std::isfinite(x0)) fail(ErrorKind::non_finite, "initial value is not finite");

  const Side intrinsic = spec.intrinsic_side();
  if (intrinsic != Side::none) {
    if (side != Side::none && side != intrinsic) {
      fail(ErrorKind::side_violation, std::string("declared side ") + side_name(side) +
                                          " contradicts the drift's side " + side_name(intrinsic));
    }
    side = intrinsic;
    double center = 0.0;
    if (const auto* b = std::get_if<drift::Bes3>(&spec.variant())) center = b->center;
    if (const auto* b = std::get_if<drift::BridgeOneSided>(&spec.variant())) center = b->center;
    if ((side == Side::above && x0 < center) || (side == Side::below && x0 > center)) {
      fail(ErrorKind::side_violation, "x0=" + fmt(x0) + " lies on the wrong side of " + fmt(center) +
                                          " for " + spec.name());
    }
  }

  Integrator integrator(spec, driver, opts, stop_level);
  return integrator.run(x0, window, side);
}

std::optional<double> detect_hit(const SamplePath& path, double level, Window window) {
  require(window.t0 <= window.t1, "hit window must be ordered");
  require(path.grid().contains(window.t0) && path.grid().contains(window.t1), "hit window outside horizon");
  const auto ts = path.times();
  const auto xs = path.values();
  double t_prev = window.t0;
  double x_prev = path(window.t0);
  if (x_prev == level) return t_prev;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (ts[i] <= window.t0) continue;
    const bool beyond = ts[i] >= window.t1;
    const double t = beyond ? window.t1 : ts[i];
    const double x = beyond ? path(window.t1) : xs[i];
    if (x == level) return t;
    if (sign_of(x - level) != sign_of(x_prev - level)) {
      const double theta = (level - x_prev) / (x - x_prev);
      return t_prev + theta * (t - t_prev);
    }
    t_prev = t;
    x_prev = x;
    if (beyond) break;
  }
  return std::nullopt;
}

std::optional<double> detect_hit(const SolutionPath& path, double level, Window window) {
  return detect_hit(path.path, level, window);
}

}  // namespace pbp
