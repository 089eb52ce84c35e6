#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace pbp {

enum class Side { none, above, below };
enum class Tail { zero, reciprocal_shifted };

const char* side_name(Side side) noexcept;
const char* tail_name(Tail tail) noexcept;

namespace drift {

/// 1{x>0}((y-x)/(t_end-t) + 1/x) + 1{x<0}((-y-x)/(t_end-t) + 1/x) on [t_start, t_end).
struct BridgeTwoSided {
  double y = 1.0;
  double t_end = 1.0;
  double t_start = 0.0;
};

/// 1/(x-a) on the declared side of a, zero on the other side.
struct Bes3 {
  double center = 0.0;
  Side side = Side::above;
};

/// (y-x)/(t_end-t) + 1/(x-a) on the declared side of a, zero on the other.
struct BridgeOneSided {
  double center = 0.0;
  double target = 1.0;
  double t_start = 0.0;
  double t_end = 1.0;
  Side side = Side::above;
};

/// -1{x!=0,|x|<=1}/(k x) + 1{|x|>1} f(x). k = 2 is the drift without weak
/// solutions; other k only serve as mutated negative controls.
struct NoWeak {
  Tail tail = Tail::zero;
  double coefficient = 2.0;
};

/// Three-row table on [0,3]: two-sided bridge to +-1, free motion, then the
/// no-weak-solution drift with reciprocal tails.
struct CE1 {};

/// Four-row table on [0,4] with a pathwise unique weak solution but several
/// path-by-path solutions.
struct CE2 {};

/// CE2 with the negative half-line reciprocal removed for t >= 1 and 1/(x-1)
/// added for t >= 3, x <= 0.
struct CE2Modified {};

/// Constant drift; used by tests and as the zero drift.
struct Constant {
  double c = 0.0;
};

}  // namespace drift

struct BridgeTerm {
  double target;
  double t_end;
};

struct ReciprocalTerm {
  double coef;
  double center;
};

/// One branch of a piecewise drift: the formula that applies on an x-interval.
struct Piece {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool lo_closed = false;
  bool hi_closed = false;
  double constant = 0.0;
  std::optional<BridgeTerm> bridge;
  std::optional<ReciprocalTerm> recip;

  bool contains(double x) const noexcept {
    const bool above_lo = lo_closed ? x >= lo : x > lo;
    const bool below_hi = hi_closed ? x <= hi : x < hi;
    return above_lo && below_hi;
  }
  double value(double t, double x) const noexcept;
};

/// Time slab [t_lo, t_hi) (closed at t_hi when hi_closed) with its pieces.
/// Points of the real line not covered by any piece have drift zero.
struct Row {
  double t_lo;
  double t_hi;
  bool hi_closed;
  std::vector<Piece> pieces;

  bool contains(double t) const noexcept { return t >= t_lo && (hi_closed ? t <= t_hi : t < t_hi); }
  const Piece* find(double x) const noexcept;
};

class DriftSpec {
 public:
  using Variant = std::variant<drift::BridgeTwoSided, drift::Bes3, drift::BridgeOneSided, drift::NoWeak,
                               drift::CE1, drift::CE2, drift::CE2Modified, drift::Constant>;

  DriftSpec(Variant v);  // NOLINT: implicit on purpose, specs read like values

  const Variant& variant() const noexcept { return variant_; }
  std::string name() const;

  double window_start() const noexcept { return t_lo_; }
  double window_end() const noexcept { return t_hi_; }
  /// Whether the drift may be evaluated at t = window_end().
  bool end_closed() const noexcept { return end_closed_; }

  const std::vector<Row>& rows() const noexcept { return *rows_; }
  const Row& row_at(double t) const;

  /// Times where the table switches rows (interior of the window).
  std::vector<double> breakpoints() const;
  /// Bridge terminal times where the drift blows up in t.
  std::vector<double> terminal_times() const;
  /// Side that a one-sided primitive is restricted to; none for tables.
  Side intrinsic_side() const noexcept;
  /// Primitives with a declared side treat x == center as an error instead of
  /// following the indicator convention.
  bool strict_singularities() const noexcept;

 private:
  Variant variant_;
  double t_lo_ = 0.0;
  double t_hi_ = std::numeric_limits<double>::infinity();
  bool end_closed_ = true;
  std::shared_ptr<const std::vector<Row>> rows_;
};

double eval_drift(const DriftSpec& spec, double t, double x);

struct SingularSet {
  std::vector<double> points;
  bool near_terminal = false;
};

/// Sorted spatial singular points of x -> eval_drift(spec, t, x), plus a flag
/// raised when a bridge terminal time lies within `time_guard` after t.
SingularSet singularity_locations(const DriftSpec& spec, double t, double time_guard = 0.0);

}  // namespace pbp
