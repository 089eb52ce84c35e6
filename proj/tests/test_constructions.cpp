#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "pbp/constructions.hpp"
#include "pbp/errors.hpp"

using namespace pbp;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorKind::io;
}

// Brownian path on [0, T] bent so that B_{b} - B_{a} equals `incr`.
SamplePath with_increment(double T, double a, double b, double incr, std::uint64_t stream) {
  const auto p = sample_brownian(make_uniform_grid(T, static_cast<std::int64_t>(T * 1024)), RngSpec{31, stream});
  const double fix = incr - (p(b) - p(a));
  std::vector<double> v(p.values().begin(), p.values().end());
  const auto ts = p.times();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (ts[i] > a) v[i] += fix * (std::min(ts[i], b) - a) / (b - a);
  }
  return SamplePath(p.grid(), std::move(v), PathKind::driver);
}

bool has_label(const SolutionPath& s, const std::string& label) {
  return std::any_of(s.branch_log.begin(), s.branch_log.end(), [&](const auto& e) { return e.label == label; });
}

const SolveOptions kOpts{};

double ce2_residual(const SolutionPath& s, const SamplePath& d) {
  return residual_sup(ce2_drift(), s, d, Window{0, 4}, kOpts.quad_cells_per_step, kOpts);
}

}  // namespace

TEST(BridgeSolution, ZeroDriverEndsAtTarget) {
  const auto s = bridge_solution(Sign::nonneg, 1.0, zero_driver(1.0, 1024), kOpts);
  EXPECT_NEAR(s.back(), 1.0, 1e-6);
  EXPECT_EQ(s.front(), 0.0);
}

TEST(BridgeSolution, SignsAreMirrorImages) {
  const auto d = sample_brownian(make_uniform_grid(1.0, 1024), RngSpec{2, 2});
  std::vector<double> neg(d.values().begin(), d.values().end());
  for (auto& v : neg) v = -v;
  const SamplePath md(d.grid(), neg, PathKind::driver);
  const auto pos = bridge_solution(Sign::nonneg, 1.0, md, kOpts);
  const auto nps = bridge_solution(Sign::nonpos, 1.0, d, kOpts);
  ASSERT_EQ(pos.path.size(), nps.path.size());
  for (std::size_t i = 0; i < pos.path.size(); ++i) {
    ASSERT_EQ(pos.path.times()[i], nps.path.times()[i]);
    ASSERT_NEAR(pos.path.values()[i], -nps.path.values()[i], 1e-12);
  }
}

TEST(BridgeSolution, LevelTwoOnSeededDrivers) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto d = sample_brownian(make_uniform_grid(1.0, 1024), RngSpec{3, s});
    EXPECT_NEAR(bridge_solution(Sign::nonneg, 2.0, d, kOpts).back(), 2.0, 1e-2);
  }
}

TEST(BesselExtension, ShiftedClosedForm) {
  const auto s = bes3_extension(3.0, 2.0, Side::above, zero_driver(1.0, 1024), Window{0, 1}, kOpts);
  EXPECT_NEAR(s.back(), 2.0 + std::sqrt(3.0), 1e-6);
  EXPECT_EQ(kind_of([] { bes3_extension(1.0, 2.0, Side::above, zero_driver(1.0, 8), Window{0, 1}, kOpts); }),
            ErrorKind::side_violation);
}

TEST(ConstructCe1, PositiveIncrement) {
  const auto d = with_increment(3.0, 1.0, 2.0, 0.7, 1);
  const auto s = construct_ce1(d, Ce1Branch::automatic, kOpts);
  EXPECT_NEAR(s(1.0), 1.0, 1e-2);
  EXPECT_NEAR(s(2.0), 1.7, 1e-2);
  EXPECT_TRUE(has_label(s, "C1"));
  for (std::size_t i = 0; i < s.path.size(); ++i) {
    const double t = s.path.times()[i];
    const double x = s.path.values()[i];
    if (t >= 2.0) ASSERT_GT(x, 1.0);
    if (t >= 1.0 && t <= 2.0) ASSERT_NEAR(x, s(1.0) + d(t) - d(1.0), 1e-12);
  }
  EXPECT_LE(residual_sup(ce1_drift(), s, d, Window{0, 3}, 8, kOpts), 5e-3);
  EXPECT_EQ(s.segments.size(), 3u);
  EXPECT_EQ(s.start(), 0.0);
  EXPECT_EQ(s.horizon(), 3.0);
}

TEST(ConstructCe1, NegativeIncrement) {
  const auto d = with_increment(3.0, 1.0, 2.0, -0.7, 2);
  const auto s = construct_ce1(d, Ce1Branch::automatic, kOpts);
  EXPECT_NEAR(s(1.0), -1.0, 1e-2);
  EXPECT_NEAR(s(2.0), -1.7, 1e-2);
  EXPECT_TRUE(has_label(s, "C2"));
  for (std::size_t i = 0; i < s.path.size(); ++i) {
    if (s.path.times()[i] >= 2.0) ASSERT_LT(s.path.values()[i], -1.0);
  }
}

TEST(ConstructCe1, FreeChoiceOnLargeIncrement) {
  const auto d = with_increment(3.0, 1.0, 2.0, 2.5, 3);
  const auto neg = construct_ce1(d, Ce1Branch::negative, kOpts);
  const auto pos = construct_ce1(d, Ce1Branch::positive, kOpts);
  EXPECT_NEAR(neg(1.0), -1.0, 1e-2);
  EXPECT_NEAR(neg(2.0), 1.5, 1e-2);
  EXPECT_TRUE(has_label(neg, "C3"));
  EXPECT_NEAR(pos(1.0) - neg(1.0), 2.0, 2e-2);
  EXPECT_LE(residual_sup(ce1_drift(), neg, d, Window{0, 3}, 8, kOpts), 5e-3);
  EXPECT_LE(residual_sup(ce1_drift(), pos, d, Window{0, 3}, 8, kOpts), 5e-3);
}

TEST(ConstructCe1, InvalidAndDegenerateBranches) {
  const auto d = with_increment(3.0, 1.0, 2.0, 0.5, 4);
  EXPECT_EQ(kind_of([&] { construct_ce1(d, Ce1Branch::negative, kOpts); }), ErrorKind::invalid_branch);
  const auto flat = with_increment(3.0, 1.0, 2.0, 0.0, 5);
  EXPECT_EQ(kind_of([&] { construct_ce1(flat, Ce1Branch::automatic, kOpts); }), ErrorKind::degenerate_increment);
  const auto two = with_increment(3.0, 1.0, 2.0, 2.0, 6);
  EXPECT_EQ(kind_of([&] { construct_ce1(two, Ce1Branch::negative, kOpts); }), ErrorKind::degenerate_increment);
  EXPECT_EQ(kind_of([&] { construct_ce1(zero_driver(2.0, 8), Ce1Branch::automatic, kOpts); }), ErrorKind::usage);
}

TEST(ConstructCe2, WeakVariantStaysNegative) {
  for (std::uint64_t k = 0; k < 5; ++k) {
    const auto d = sample_brownian(make_uniform_grid(4.0, 4096), RngSpec{7, k});
    const auto s = construct_ce2(d, Ce2Variant::weak, kOpts);
    EXPECT_NEAR(s(1.0), -2.0, 1e-2);
    for (std::size_t i = 0; i < s.path.size(); ++i) {
      if (s.path.times()[i] >= 1.01) ASSERT_LT(s.path.values()[i], 0.0);
    }
    EXPECT_TRUE(has_label(s, "weak"));
    EXPECT_LE(ce2_residual(s, d), 5e-3);
  }
}

TEST(ConstructCe2, AlternativeUpperBranch) {
  // B_3 - B_2 = 0.5 with the path on [2,3] kept well above B_2 - 3.
  std::vector<double> v;
  const auto g = make_uniform_grid(4.0, 4096);
  const auto base = sample_brownian(g, RngSpec{8, 1});
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double t = g[i];
    v.push_back(t <= 2.0 ? base.values()[i] : base(2.0) + 0.5 * std::min(t - 2.0, 1.0) + 0.1 * std::sin(6.0 * t));
  }
  v.back() = v.back();
  const SamplePath d(g, v, PathKind::driver);
  const double b3 = d(3.0) - d(2.0);
  const auto s = construct_ce2(d, Ce2Variant::alternative, kOpts);
  EXPECT_NEAR(s(1.0), 2.0, 1e-2);
  EXPECT_NEAR(s(2.0), 3.0, 1e-2);
  EXPECT_NEAR(s(3.0), 3.0 + b3, 1e-2);
  for (std::size_t i = 0; i < s.path.size(); ++i) {
    if (s.path.times()[i] >= 3.0) ASSERT_GT(s.path.values()[i], 3.0);
  }
  EXPECT_TRUE(has_label(s, "alt"));
  EXPECT_TRUE(has_label(s, "C1"));
  EXPECT_TRUE(has_label(s, "tau"));
  EXPECT_LE(ce2_residual(s, d), 5e-3);
}

TEST(ConstructCe2, AlternativeHitsZeroBeforeThree) {
  const auto g = make_uniform_grid(4.0, 4096);
  const auto base = sample_brownian(g, RngSpec{8, 2});
  std::vector<double> v;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double t = g[i];
    double x = base.values()[i];
    if (t > 2.0) {
      const double u = std::min(t, 3.0) - 2.0;
      x = base(2.0) + (u <= 0.5 ? -8.0 * u : -4.0 + 9.0 * (u - 0.5)) + (t > 3.0 ? base.values()[i] - base(3.0) : 0.0);
    }
    v.push_back(x);
  }
  const SamplePath d(g, v, PathKind::driver);
  ASSERT_GT(d(3.0) - d(2.0), 0.0);
  const auto s = construct_ce2(d, Ce2Variant::alternative, kOpts);
  ASSERT_FALSE(s.hits.empty());
  const double tau = s.hits.front().time;
  EXPECT_NEAR(tau, 2.375, 1e-9);
  for (std::size_t i = 0; i < s.path.size(); ++i) {
    if (s.path.times()[i] > tau) ASSERT_LT(s.path.values()[i], 0.0);
  }
  EXPECT_LE(ce2_residual(s, d), 5e-3);
}

TEST(ConstructCe2, AlternativeLowerBranch) {
  const auto d = with_increment(4.0, 2.0, 3.0, -0.5, 9);
  const auto s = construct_ce2(d, Ce2Variant::alternative, kOpts);
  EXPECT_TRUE(has_label(s, "C2"));
  EXPECT_TRUE(has_label(s, "tau0"));
  EXPECT_NEAR(s(1.0), 2.0, 1e-2);
  if (s.hits.empty() || s.hits.front().time > 2.0) EXPECT_NEAR(s(2.0), 1.0, 1e-2);
  if (s.hits.empty()) {
    EXPECT_NEAR(s(3.0), 0.5, 1e-2);
    for (std::size_t i = 0; i < s.path.size(); ++i) {
      if (s.path.times()[i] >= 3.0) ASSERT_LT(s.path.values()[i], 1.0);
    }
  } else {
    const double tau0 = s.hits.front().time;
    for (std::size_t i = 0; i < s.path.size(); ++i) {
      if (s.path.times()[i] > tau0) ASSERT_LT(s.path.values()[i], 0.0);
    }
  }
  EXPECT_LE(ce2_residual(s, d), 5e-3);
}

TEST(ConstructCe2, DegenerateIncrement) {
  const auto d = with_increment(4.0, 2.0, 3.0, 0.0, 10);
  EXPECT_EQ(kind_of([&] { construct_ce2(d, Ce2Variant::alternative, kOpts); }), ErrorKind::degenerate_increment);
  EXPECT_NO_THROW(construct_ce2(d, Ce2Variant::weak, kOpts));
}

TEST(Glue, ConcatenatesWithoutDuplicateNode) {
  const auto d = sample_brownian(make_uniform_grid(2.0, 64), RngSpec{1, 1});
  const auto a = translate_driver(0.5, d, Window{0, 1});
  const auto b = translate_driver(a.back(), d, Window{1, 2});
  const std::vector<SolutionPath> parts{a, b};
  const auto g = glue(parts, 1e-9);
  EXPECT_EQ(g.path.size(), a.path.size() + b.path.size() - 1);
  EXPECT_EQ(g.segments.size(), 2u);
  EXPECT_EQ(g(2.0), b.back());
}

TEST(Glue, ReportsGap) {
  const auto d = zero_driver(2.0, 4);
  const std::vector<SolutionPath> parts{translate_driver(0.0, d, Window{0, 1}), translate_driver(0.5, d, Window{1, 2})};
  try {
    glue(parts, 1e-9);
    FAIL() << "expected JunctionMismatch";
  } catch (const JunctionMismatch& e) {
    EXPECT_EQ(e.gap(), 0.5);
    EXPECT_EQ(e.kind(), ErrorKind::junction_mismatch);
  }
  EXPECT_EQ(kind_of([] { glue(std::vector<SolutionPath>{}, 1e-9); }), ErrorKind::usage);
}

TEST(TranslateDriver, StopsAtLevel) {
  const SamplePath d(TimeGrid({0.0, 1.0, 2.0}), {0.0, -1.0, -3.0}, PathKind::driver);
  const auto s = translate_driver(2.0, d, Window{0, 2}, 0.0);
  ASSERT_EQ(s.hits.size(), 1u);
  EXPECT_DOUBLE_EQ(s.hits[0].time, 1.5);
  EXPECT_EQ(s.back(), 0.0);
  EXPECT_EQ(s.horizon(), 1.5);
}
