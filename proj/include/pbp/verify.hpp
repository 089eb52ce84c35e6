#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pbp/solver.hpp"

namespace pbp {

enum class Comparison { less, less_equal, greater, greater_equal, between };

const char* comparison_symbol(Comparison c) noexcept;
/// `upper` is only read for Comparison::between (closed interval).
bool meets(double statistic, Comparison c, double threshold, double upper = 0.0) noexcept;

struct VerificationReport {
  std::string test_name;
  std::int64_t n_paths = 0;
  std::uint64_t master_seed = 0;
  double statistic = 0.0;
  double threshold = 0.0;
  double threshold_upper = 0.0;
  Comparison comparison = Comparison::greater_equal;
  bool pass = false;
  /// Negative controls are expected to fail.
  bool control = false;
  std::vector<std::uint64_t> per_path_failures;
  std::map<std::string, double> details;
  double runtime_seconds = 0.0;

  /// Whether the report came out the way it should: pass for tests, fail for controls.
  bool as_expected() const noexcept { return pass != control; }
};

struct VerifyContext {
  SolveOptions opts{};
  int threads = 1;
  /// Driver cells per unit time for Brownian drivers.
  std::int64_t driver_steps = 1024;
};

/// Defect |2(x-a) b(t,x) + 1| over the -1/(2(x-a)) regions of the no-weak
/// drift and of the two tables. `coefficient` replaces 2 in the no-weak
/// drift; anything else is a mutated control.
VerificationReport test_cancellation(std::int64_t n_points, std::uint64_t seed, double coefficient = 2.0,
                                     bool control = false);

/// Fraction of bridge solutions (alternating signs) ending within 1e-2 of the
/// target with constant sign on (1e-3, 1]. The control drops the drift.
VerificationReport test_bridge_properties(std::int64_t n, double y, std::uint64_t seed, const VerifyContext& ctx,
                                          bool control = false);

enum class BoundMode { sup2, inf0 };

/// Worst case of sup X (sup2, nonnegative bridge to 1) or inf X (inf0,
/// one-sided bridge 2 -> 1) over small synthetic drivers. The control aims
/// the bridge at 2.5 (sup2) or -0.5 (inf0).
VerificationReport test_small_driver_bound(std::int64_t n, double amplitude, BoundMode mode, std::uint64_t seed,
                                           const VerifyContext& ctx, bool control = false);

/// KS distance between X_1 of the solution from 0 above 0 and the norm of a
/// standard 3D Gaussian. The control compares with |N(0,1)| instead.
VerificationReport test_bes3_law(std::int64_t n, std::uint64_t seed, const VerifyContext& ctx, bool control = false);

/// Fraction of CE1 constructions that residual-pass, end [0,1] at +-1 and stay
/// outside [-1,1] on [2,3].
VerificationReport test_ce1_validity(std::int64_t n, std::uint64_t seed, const VerifyContext& ctx);

enum class DemoCase { ce1_c3, ce2 };

/// Two distinct residual-passing solutions on the same driver. The ce1_c3
/// control skips the conditioning; the ce2 control compares weak with weak.
VerificationReport demo_nonuniqueness(DemoCase which, std::int64_t n, std::uint64_t seed, const VerifyContext& ctx,
                                      bool control = false);

/// Acceptance rate of the rejection sampler for B_2 - B_1 > 2 over n_raw drivers.
VerificationReport test_conditioning_rate(std::int64_t n_raw, std::uint64_t seed, const VerifyContext& ctx);

/// Smallest residual reduction factor per halving of h_base, three halvings
/// from h0, over bridge, Bes3, CE1 and CE2 on each driver. The control checks
/// the bridge against the zero drift, which does not converge.
VerificationReport test_convergence(std::int64_t n_drivers, std::uint64_t seed, const VerifyContext& ctx,
                                    double h0 = 1.0 / 1024.0, bool control = false);

inline constexpr double kResidualTolerance = 5e-3;

enum class Profile { quick, full };

struct SuiteConfig {
  Profile profile = Profile::full;
  std::uint64_t seed = 1;
  int threads = 1;
  double h_base = 1.0 / 16384.0;
  std::int64_t driver_steps = 1024;
  double cancellation_coefficient = 2.0;
  bool controls = true;
  /// Subset of suite test names; empty runs everything.
  std::vector<std::string> tests;
};

const std::vector<std::string>& suite_test_names();

std::vector<VerificationReport> run_suite(const SuiteConfig& config);

/// True when every test passes and every control fails.
bool suite_verdict(const std::vector<VerificationReport>& reports);

}  // namespace pbp
