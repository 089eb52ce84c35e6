#include "pbp/constructions.hpp"

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

void require_cover(const SamplePath& driver, double t_end) {
  require(driver.start() <= 0.0 && driver.horizon() >= t_end,
          "driver must cover [0, " + fmt(t_end) + "]");
}

SolutionPath with_role(SolutionPath sol, const std::string& role) {
  for (auto& s : sol.segments) s.role = role;
  return sol;
}

}  // namespace

DriftSpec ce1_drift() { return DriftSpec(drift::CE1{}); }
DriftSpec ce2_drift() { return DriftSpec(drift::CE2{}); }

SolutionPath bridge_solution(Sign sign, double y, const SamplePath& driver, const SolveOptions& opts) {
  require(std::isfinite(y) && y > 0.0, "bridge target must be positive");
  require_cover(driver, 1.0);
  const DriftSpec spec(drift::BridgeTwoSided{y, 1.0, 0.0});
  const Side side = sign == Sign::nonneg ? Side::above : Side::below;
  return with_role(solve_pathwise(spec, driver, 0.0, Window{0.0, 1.0}, opts, side), "bridge");
}

SolutionPath bes3_extension(double x_start, double center, Side side, const SamplePath& driver, Window window,
                            const SolveOptions& opts, std::optional<double> stop_level) {
  const DriftSpec spec(drift::Bes3{center, side});
  return with_role(solve_pathwise(spec, driver, x_start, window, opts, side, stop_level), "bes3");
}

SolutionPath translate_driver(double x_start, const SamplePath& driver, Window window,
                              std::optional<double> stop_level) {
  require(window.t0 < window.t1, "translation window must be non-empty");
  require(driver.grid().contains(window.t0) && driver.grid().contains(window.t1),
          "translation window outside the driver horizon");
  if (!std::isfinite(x_start)) fail(ErrorKind::non_finite, "translation start is not finite");
  const double b0 = driver(window.t0);
  std::vector<double> ts{window.t0};
  std::vector<double> xs{x_start};
  for (double t : driver.times()) {
    if (t > window.t0 && t < window.t1) {
      ts.push_back(t);
      xs.push_back(x_start + (driver(t) - b0));
    }
  }
  ts.push_back(window.t1);
  xs.push_back(x_start + (driver(window.t1) - b0));

  std::vector<Hit> hits;
  if (stop_level) {
    const double lvl = *stop_level;
    for (std::size_t i = 1; i < ts.size(); ++i) {
      const double a = xs[i - 1] - lvl;
      const double b = xs[i] - lvl;
      if (b == 0.0 || (a != 0.0 && (a > 0.0) != (b > 0.0))) {
        const double t_hit = b == 0.0 ? ts[i] : ts[i - 1] + (a / (a - b)) * (ts[i] - ts[i - 1]);
        ts.resize(i);
        xs.resize(i);
        if (t_hit > ts.back()) {
          ts.push_back(t_hit);
          xs.push_back(lvl);
        } else {
          xs.back() = lvl;
        }
        hits.push_back(Hit{lvl, ts.back()});
        break;
      }
    }
  }
  SamplePath path(TimeGrid(std::move(ts)), std::move(xs), PathKind::solution);
  const double end = path.horizon();
  SolutionPath out{std::move(path), {}, std::move(hits), {}, {}, {}, 0};
  out.segments.push_back(Segment{Window{window.t0, end}, DriftSpec(drift::Constant{0.0}), "translation"});
  return out;
}

SolutionPath glue(std::span<const SolutionPath> segments, double tolerance) {
  require(!segments.empty(), "nothing to glue");
  std::vector<double> ts(segments[0].path.times().begin(), segments[0].path.times().end());
  std::vector<double> xs(segments[0].path.values().begin(), segments[0].path.values().end());
  SolutionPath out{segments[0]};
  for (std::size_t k = 1; k < segments.size(); ++k) {
    const auto& seg = segments[k];
    const double t_join = ts.back();
    require(std::abs(seg.start() - t_join) <= 1e-12 * std::max(1.0, std::abs(t_join)),
            "segments do not abut at t=" + fmt(t_join));
    const double gap = std::abs(seg.front() - xs.back());
    if (gap > tolerance) throw JunctionMismatch(t_join, gap);
    const auto st = seg.path.times();
    const auto sv = seg.path.values();
    ts.insert(ts.end(), st.begin() + 1, st.end());
    xs.insert(xs.end(), sv.begin() + 1, sv.end());
    out.segments.insert(out.segments.end(), seg.segments.begin(), seg.segments.end());
    out.hits.insert(out.hits.end(), seg.hits.begin(), seg.hits.end());
    out.branch_log.insert(out.branch_log.end(), seg.branch_log.begin(), seg.branch_log.end());
    out.pins.insert(out.pins.end(), seg.pins.begin(), seg.pins.end());
    out.refined_steps += seg.refined_steps;
  }
  out.path = SamplePath(TimeGrid(std::move(ts)), std::move(xs), PathKind::solution);
  out.residual.reset();
  return out;
}

SolutionPath construct_ce1(const SamplePath& driver, Ce1Branch branch, const SolveOptions& opts) {
  require_cover(driver, 3.0);
  const double incr = driver(2.0) - driver(1.0);
  if (std::abs(incr) < opts.sing_guard || std::abs(std::abs(incr) - 2.0) < opts.sing_guard) {
    fail(ErrorKind::degenerate_increment, "B_2 - B_1 = " + fmt(incr) + " is within the guard of 0 or +-2");
  }
  const double sign = branch == Ce1Branch::automatic ? (incr > 0.0 ? 1.0 : -1.0)
                      : branch == Ce1Branch::positive ? 1.0
                                                      : -1.0;
  const double margin = std::abs(sign + incr) - 1.0;
  if (std::abs(margin) < opts.sing_guard) {
    fail(ErrorKind::degenerate_increment,
         "|X_2| = 1 within the guard for B_2 - B_1 = " + fmt(incr) + "; branch validity undecidable");
  }
  if (margin < 0.0) {
    fail(ErrorKind::invalid_branch, std::string(sign > 0 ? "positive" : "negative") +
                                        " branch gives X_2 = " + fmt(sign + incr) + " inside (-1, 1)");
  }

  std::vector<SolutionPath> parts;
  parts.push_back(bridge_solution(sign > 0 ? Sign::nonneg : Sign::nonpos, 1.0, driver, opts));
  parts.push_back(translate_driver(parts.back().back(), driver, Window{1.0, 2.0}));
  const double x2 = parts.back().back();
  const double center = x2 > 0.0 ? 1.0 : -1.0;
  parts.push_back(bes3_extension(x2, center, x2 > 0.0 ? Side::above : Side::below, driver, Window{2.0, 3.0}, opts));

  SolutionPath out = glue(parts, opts.sing_guard);
  const char* mode = branch == Ce1Branch::automatic ? "auto" : "forced";
  out.branch_log.push_back(BranchEntry{incr > 0.0 ? "C1" : "C2", incr, "B_2 - B_1"});
  if (std::abs(incr) > 2.0) {
    out.branch_log.push_back(
        BranchEntry{"C3", incr, incr > 0.0 ? "either bridge sign admissible" : "either bridge sign admissible (mirrored)"});
  }
  out.branch_log.push_back(BranchEntry{sign > 0 ? "positive" : "negative", sign, mode});
  return out;
}

namespace {

SolutionPath ce2_weak(const SamplePath& driver, const SolveOptions& opts) {
  std::vector<SolutionPath> parts;
  parts.push_back(bridge_solution(Sign::nonpos, 2.0, driver, opts));
  parts.push_back(bes3_extension(parts.back().back(), 0.0, Side::below, driver, Window{1.0, 4.0}, opts));
  SolutionPath out = glue(parts, opts.sing_guard);
  out.branch_log.push_back(BranchEntry{"weak", std::nullopt, "nonpositive bridge to -2, then 1/x below 0"});
  return out;
}

SolutionPath ce2_alternative(const SamplePath& driver, const SolveOptions& opts) {
  const double incr = driver(3.0) - driver(2.0);
  if (std::abs(incr) < opts.sing_guard) {
    fail(ErrorKind::degenerate_increment, "B_3 - B_2 = " + fmt(incr) + " is within the guard of 0");
  }
  std::vector<SolutionPath> parts;
  std::vector<BranchEntry> log{BranchEntry{"alt", std::nullopt, "nonnegative bridge to 2"},
                               BranchEntry{incr > 0.0 ? "C1" : "C2", incr, "B_3 - B_2"}};
  parts.push_back(bridge_solution(Sign::nonneg, 2.0, driver, opts));

  // Nonpositive continuation below 0 from a zero hit at time t.
  const auto go_negative = [&](double t) {
    if (t < 4.0) parts.push_back(bes3_extension(0.0, 0.0, Side::below, driver, Window{t, 4.0}, opts));
  };

  if (incr > 0.0) {
    const DriftSpec up(drift::BridgeOneSided{2.0, 3.0, 1.0, 2.0, Side::above});
    parts.push_back(with_role(solve_pathwise(up, driver, 2.0, Window{1.0, 2.0}, opts, Side::above), "bridge"));
    parts.push_back(translate_driver(parts.back().back(), driver, Window{2.0, 3.0}, 0.0));
    if (!parts.back().hits.empty()) {
      const double tau = parts.back().hits.front().time;
      log.push_back(BranchEntry{"tau", tau, "B_t - B_2 reached -3"});
      go_negative(tau);
    } else {
      log.push_back(BranchEntry{"tau", std::nullopt, "tau > 3"});
      const double x3 = parts.back().back();
      parts.push_back(bes3_extension(x3, 3.0, Side::above, driver, Window{3.0, 4.0}, opts));
    }
  } else {
    const DriftSpec down(drift::BridgeOneSided{2.0, 1.0, 1.0, 2.0, Side::below});
    parts.push_back(
        with_role(solve_pathwise(down, driver, 2.0, Window{1.0, 2.0}, opts, Side::below, 0.0), "bridge"));
    std::optional<double> tau0;
    if (!parts.back().hits.empty()) tau0 = parts.back().hits.front().time;
    if (!tau0) {
      parts.push_back(translate_driver(parts.back().back(), driver, Window{2.0, 3.0}, 0.0));
      if (!parts.back().hits.empty()) tau0 = parts.back().hits.front().time;
    }
    if (!tau0) {
      parts.push_back(bes3_extension(parts.back().back(), 1.0, Side::below, driver, Window{3.0, 4.0}, opts, 0.0));
      if (!parts.back().hits.empty()) tau0 = parts.back().hits.front().time;
    }
    log.push_back(BranchEntry{"tau0", tau0.value_or(4.0), tau0 ? "first zero after t=1" : "no zero before 4"});
    if (tau0) go_negative(*tau0);
  }
  SolutionPath out = glue(parts, opts.sing_guard);
  out.branch_log.insert(out.branch_log.end(), log.begin(), log.end());
  return out;
}

}  // namespace

SolutionPath construct_ce2(const SamplePath& driver, Ce2Variant variant, const SolveOptions& opts) {
  require_cover(driver, 4.0);
  return variant == Ce2Variant::weak ? ce2_weak(driver, opts) : ce2_alternative(driver, opts);
}

}  // namespace pbp
