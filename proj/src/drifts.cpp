#include "pbp/drifts.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pbp/errors.hpp"

namespace pbp {

const char* side_name(Side side) noexcept {
  switch (side) {
    case Side::none: return "none";
    case Side::above: return "above";
    case Side::below: return "below";
  }
  return "none";
}

const char* tail_name(Tail tail) noexcept {
  return tail == Tail::zero ? "zero" : "reciprocal_shifted";
}

double Piece::value(double t, double x) const noexcept {
  double v = constant;
  if (bridge) v += (bridge->target - x) / (bridge->t_end - t);
  if (recip) v += recip->coef / (x - recip->center);
  return v;
}

const Piece* Row::find(double x) const noexcept {
  for (const auto& p : pieces) {
    if (p.contains(x)) return &p;
  }
  return nullptr;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Piece interval(double lo, bool lo_closed, double hi, bool hi_closed) {
  Piece p;
  p.lo = lo;
  p.hi = hi;
  p.lo_closed = lo_closed;
  p.hi_closed = hi_closed;
  return p;
}

Piece with_recip(Piece p, double coef, double center) {
  p.recip = ReciprocalTerm{coef, center};
  return p;
}

Piece with_bridge(Piece p, double target, double t_end) {
  p.bridge = BridgeTerm{target, t_end};
  return p;
}

std::vector<Piece> two_sided_bridge(double y, double t_end) {
  return {
      with_recip(with_bridge(interval(0.0, false, kInf, false), y, t_end), 1.0, 0.0),
      with_recip(with_bridge(interval(-kInf, false, 0.0, false), -y, t_end), 1.0, 0.0),
  };
}

std::vector<Piece> no_weak(Tail tail, double k) {
  std::vector<Piece> out{
      with_recip(interval(0.0, false, 1.0, true), -1.0 / k, 0.0),
      with_recip(interval(-1.0, true, 0.0, false), -1.0 / k, 0.0),
  };
  if (tail == Tail::reciprocal_shifted) {
    out.push_back(with_recip(interval(1.0, false, kInf, false), 1.0, 1.0));
    out.push_back(with_recip(interval(-kInf, false, -1.0, false), 1.0, -1.0));
  }
  return out;
}

Piece side_of(double center, Side side) {
  return side == Side::above ? interval(center, false, kInf, false) : interval(-kInf, false, center, false);
}

Piece negative_reciprocal() { return with_recip(interval(-kInf, false, 0.0, false), 1.0, 0.0); }

// Last row of CE2 for x > 0: -1/(2(x-2)) on |x-2| <= 1 (x != 2), 1/(x-3)
// above 3, 1/(x-1) on (0,1).
std::vector<Piece> ce2_last_row_positive() {
  return {
      with_recip(interval(1.0, true, 2.0, false), -0.5, 2.0),
      with_recip(interval(2.0, false, 3.0, true), -0.5, 2.0),
      with_recip(interval(3.0, false, kInf, false), 1.0, 3.0),
      with_recip(interval(0.0, false, 1.0, false), 1.0, 1.0),
  };
}

std::vector<Piece> ce2_second_row_positive() {
  return {
      with_recip(with_bridge(interval(2.0, false, kInf, false), 3.0, 2.0), 1.0, 2.0),
      with_recip(with_bridge(interval(0.0, false, 2.0, false), 1.0, 2.0), 1.0, 2.0),
  };
}

struct RowBuilder {
  double t_lo = 0.0;
  double t_hi = kInf;
  bool end_closed = true;
  std::vector<Row> rows;

  void operator()(const drift::BridgeTwoSided& d) {
    require(std::isfinite(d.y) && d.y > 0.0, "bridge target y must be positive");
    require(std::isfinite(d.t_start) && std::isfinite(d.t_end) && d.t_start < d.t_end,
            "bridge window must satisfy t_start < t_end");
    t_lo = d.t_start;
    t_hi = d.t_end;
    end_closed = false;
    rows.push_back(Row{d.t_start, d.t_end, false, two_sided_bridge(d.y, d.t_end)});
  }
  void operator()(const drift::Bes3& d) {
    require(std::isfinite(d.center), "Bessel center must be finite");
    require(d.side != Side::none, "Bessel drift needs a side");
    rows.push_back(Row{0.0, kInf, false, {with_recip(side_of(d.center, d.side), 1.0, d.center)}});
  }
  void operator()(const drift::BridgeOneSided& d) {
    require(std::isfinite(d.center) && std::isfinite(d.target), "bridge parameters must be finite");
    require(d.side != Side::none, "one-sided bridge needs a side");
    require(std::isfinite(d.t_start) && std::isfinite(d.t_end) && d.t_start < d.t_end,
            "bridge window must satisfy t_start < t_end");
    require(d.side == Side::above ? d.target > d.center : d.target < d.center,
            "bridge target must lie on the declared side of the center");
    t_lo = d.t_start;
    t_hi = d.t_end;
    end_closed = false;
    Piece p = with_recip(with_bridge(side_of(d.center, d.side), d.target, d.t_end), 1.0, d.center);
    rows.push_back(Row{d.t_start, d.t_end, false, {p}});
  }
  void operator()(const drift::NoWeak& d) {
    require(std::isfinite(d.coefficient) && d.coefficient != 0.0, "no-weak coefficient must be nonzero");
    rows.push_back(Row{0.0, kInf, false, no_weak(d.tail, d.coefficient)});
  }
  void operator()(const drift::CE1&) {
    t_hi = 3.0;
    rows.push_back(Row{0.0, 1.0, false, two_sided_bridge(1.0, 1.0)});
    rows.push_back(Row{1.0, 2.0, false, {}});
    rows.push_back(Row{2.0, 3.0, true, no_weak(Tail::reciprocal_shifted, 2.0)});
  }
  void operator()(const drift::CE2&) {
    t_hi = 4.0;
    rows.push_back(Row{0.0, 1.0, false, two_sided_bridge(2.0, 1.0)});
    auto second = ce2_second_row_positive();
    second.push_back(negative_reciprocal());
    rows.push_back(Row{1.0, 2.0, false, second});
    rows.push_back(Row{2.0, 3.0, false, {negative_reciprocal()}});
    auto last = ce2_last_row_positive();
    last.push_back(negative_reciprocal());
    rows.push_back(Row{3.0, 4.0, true, last});
  }
  void operator()(const drift::CE2Modified&) {
    t_hi = 4.0;
    rows.push_back(Row{0.0, 1.0, false, two_sided_bridge(2.0, 1.0)});
    rows.push_back(Row{1.0, 2.0, false, ce2_second_row_positive()});
    rows.push_back(Row{2.0, 3.0, false, {}});
    // x <= 0 loses 1/x and gains 1/(x-1), which merges with the (0,1) piece.
    std::vector<Piece> last{
        with_recip(interval(1.0, true, 2.0, false), -0.5, 2.0),
        with_recip(interval(2.0, false, 3.0, true), -0.5, 2.0),
        with_recip(interval(3.0, false, kInf, false), 1.0, 3.0),
        with_recip(interval(-kInf, false, 1.0, false), 1.0, 1.0),
    };
    rows.push_back(Row{3.0, 4.0, true, last});
  }
  void operator()(const drift::Constant& d) {
    require(std::isfinite(d.c), "constant drift must be finite");
    Piece p = interval(-kInf, false, kInf, false);
    p.constant = d.c;
    rows.push_back(Row{0.0, kInf, false, {p}});
  }
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

DriftSpec::DriftSpec(Variant v) : variant_(std::move(v)) {
  RowBuilder builder;
  std::visit(builder, variant_);
  t_lo_ = builder.t_lo;
  t_hi_ = builder.t_hi;
  end_closed_ = builder.end_closed && std::isfinite(builder.t_hi);
  rows_ = std::make_shared<const std::vector<Row>>(std::move(builder.rows));
}

std::string DriftSpec::name() const {
  struct Namer {
    std::string operator()(const drift::BridgeTwoSided&) const { return "bridge_two_sided"; }
    std::string operator()(const drift::Bes3&) const { return "bes3"; }
    std::string operator()(const drift::BridgeOneSided&) const { return "bridge_one_sided"; }
    std::string operator()(const drift::NoWeak&) const { return "no_weak"; }
    std::string operator()(const drift::CE1&) const { return "ce1"; }
    std::string operator()(const drift::CE2&) const { return "ce2"; }
    std::string operator()(const drift::CE2Modified&) const { return "ce2_modified"; }
    std::string operator()(const drift::Constant&) const { return "constant"; }
  };
  return std::visit(Namer{}, variant_);
}

const Row& DriftSpec::row_at(double t) const {
  for (const auto& row : *rows_) {
    if (row.contains(t)) return row;
  }
  fail(ErrorKind::usage, "time " + fmt(t) + " outside the window of drift " + name());
}

std::vector<double> DriftSpec::breakpoints() const {
  std::vector<double> out;
  for (std::size_t i = 1; i < rows_->size(); ++i) out.push_back((*rows_)[i].t_lo);
  return out;
}

std::vector<double> DriftSpec::terminal_times() const {
  std::vector<double> out;
  for (const auto& row : *rows_) {
    for (const auto& p : row.pieces) {
      if (p.bridge && std::find(out.begin(), out.end(), p.bridge->t_end) == out.end()) {
        out.push_back(p.bridge->t_end);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Side DriftSpec::intrinsic_side() const noexcept {
  if (const auto* b = std::get_if<drift::Bes3>(&variant_)) return b->side;
  if (const auto* b = std::get_if<drift::BridgeOneSided>(&variant_)) return b->side;
  return Side::none;
}

bool DriftSpec::strict_singularities() const noexcept { return intrinsic_side() != Side::none; }

double eval_drift(const DriftSpec& spec, double t, double x) {
  require(std::isfinite(t), "drift time must be finite");
  if (!std::isfinite(x)) fail(ErrorKind::non_finite, "drift evaluated at non-finite x");
  const bool past_end = spec.end_closed() ? t > spec.window_end() : t >= spec.window_end();
  if (t < spec.window_start() || past_end) {
    const auto terminals = spec.terminal_times();
    if (t == spec.window_end() && !terminals.empty() && terminals.back() == t) {
      fail(ErrorKind::singular_point, "bridge drift is singular at its terminal time " + fmt(t));
    }
    fail(ErrorKind::usage, "time " + fmt(t) + " outside the window of drift " + spec.name());
  }
  const Row& row = spec.row_at(t);
  if (spec.strict_singularities()) {
    for (const auto& p : row.pieces) {
      if (p.recip && x == p.recip->center) {
        fail(ErrorKind::singular_point, spec.name() + " is singular at x=" + fmt(x));
      }
    }
  }
  const Piece* piece = row.find(x);
  if (piece == nullptr) return 0.0;
  return piece->value(t, x);
}

SingularSet singularity_locations(const DriftSpec& spec, double t, double time_guard) {
  SingularSet out;
  const Row& row = spec.row_at(t);
  for (const auto& p : row.pieces) {
    if (p.recip) out.points.push_back(p.recip->center);
  }
  std::sort(out.points.begin(), out.points.end());
  out.points.erase(std::unique(out.points.begin(), out.points.end()), out.points.end());
  for (double te : spec.terminal_times()) {
    if (te >= t && te - t < time_guard) out.near_terminal = true;
  }
  return out;
}

}  // namespace pbp
