#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "pbp/constructions.hpp"
#include "pbp/errors.hpp"
#include "pbp/io.hpp"

using namespace pbp;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorKind::usage;
}

SamplePath random_path(std::uint64_t k) {
  RandomStream rs(RngSpec{77, k});
  const auto n = 2 + static_cast<std::int64_t>(rs.next_u64() % 500);
  const double T = 0.1 + 5.0 * rs.uniform();
  return sample_brownian(make_uniform_grid(T, n), RngSpec{78, k});
}

}  // namespace

TEST(PathCsv, RoundTripIsBitExact) {
  for (std::uint64_t k = 0; k < 50; ++k) {
    const auto p = random_path(k);
    std::stringstream ss;
    write_path_csv(p, ss);
    const auto q = read_path_csv(ss, PathKind::driver);
    ASSERT_EQ(p.size(), q.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      ASSERT_EQ(p.times()[i], q.times()[i]);
      ASSERT_EQ(p.values()[i], q.values()[i]);
    }
  }
}

TEST(PathCsv, HeaderAndFormat) {
  const SamplePath p(TimeGrid({0.0, 0.5}), {0.0, 0.1}, PathKind::driver);
  std::stringstream ss;
  write_path_csv(p, ss);
  EXPECT_EQ(ss.str(), "t,value\n0,0\n0.5,0.10000000000000001\n");
}

TEST(PathCsv, MalformedInputIsIoError) {
  for (const char* text : {"", "time,value\n0,0\n", "t,value\n0,abc\n", "t,value\n0\n", "t,value\n0,0\n0,1\n",
                           "t,value\n0,0,1\n"}) {
    std::stringstream ss(text);
    EXPECT_EQ(kind_of([&] { read_path_csv(ss, PathKind::driver); }), ErrorKind::io) << text;
  }
}

TEST(PathJson, RoundTrip) {
  for (std::uint64_t k = 0; k < 20; ++k) {
    const auto p = random_path(k);
    const auto j = path_to_json(p);
    const auto q = path_from_json(Json::parse(j.dump()));
    ASSERT_EQ(p.size(), q.size());
    for (std::size_t i = 0; i < p.size(); ++i) ASSERT_EQ(p.values()[i], q.values()[i]);
    ASSERT_TRUE(q.origin().has_value());
    EXPECT_EQ(*q.origin(), (RngSpec{78, k}));
    EXPECT_EQ(j["kind"], "driver");
  }
}

TEST(DriftJson, RoundTripEveryVariant) {
  const std::vector<DriftSpec> specs{DriftSpec(drift::BridgeTwoSided{2.0, 1.5, 0.5}),
                                     DriftSpec(drift::Bes3{1.0, Side::below}),
                                     DriftSpec(drift::BridgeOneSided{2.0, 3.0, 1.0, 2.0, Side::above}),
                                     DriftSpec(drift::NoWeak{Tail::reciprocal_shifted, 2.0}),
                                     DriftSpec(drift::CE1{}),
                                     DriftSpec(drift::CE2{}),
                                     DriftSpec(drift::CE2Modified{}),
                                     DriftSpec(drift::Constant{-0.25})};
  for (const auto& s : specs) {
    const auto j = drift_to_json(s);
    const auto back = drift_from_json(Json::parse(j.dump()));
    EXPECT_EQ(drift_to_json(back), j);
    EXPECT_EQ(back.name(), s.name());
  }
}

TEST(DriftJson, StrictKeys) {
  EXPECT_EQ(kind_of([] { drift_from_json(Json::parse(R"({"variant":"bes3","centre":1})")); }), ErrorKind::usage);
  EXPECT_EQ(kind_of([] { drift_from_json(Json::parse(R"({"variant":"nope"})")); }), ErrorKind::usage);
  EXPECT_EQ(kind_of([] { drift_from_json(Json::parse("[1]")); }), ErrorKind::usage);
  EXPECT_EQ(drift_from_json(Json::parse(R"({"variant":"bes3"})")).name(), "bes3");
}

TEST(OptionsJson, StepRescalesGrowthCap) {
  const auto o = options_from_json(Json::parse(R"({"h_base":0.001953125})"));
  EXPECT_EQ(o.h_base, 1.0 / 512.0);
  EXPECT_DOUBLE_EQ(o.step_growth_cap, 128.0 / 512.0);
  const auto j = options_to_json(SolveOptions{});
  const auto back = options_from_json(j);
  EXPECT_EQ(options_to_json(back), j);
}

TEST(Sidecar, CarriesBranchLog) {
  const auto d = sample_brownian(make_uniform_grid(3.0, 3072), RngSpec{5, 5});
  const auto s = construct_ce1(d, Ce1Branch::automatic, SolveOptions{});
  const auto j = sidecar_to_json(s);
  EXPECT_EQ(j["start"], 0.0);
  EXPECT_EQ(j["horizon"], 3.0);
  EXPECT_EQ(j["segments"].size(), 3u);
  EXPECT_EQ(j["segments"][0]["role"], "bridge");
  EXPECT_FALSE(j["branch_log"].empty());
  EXPECT_TRUE(j["residual"].is_null());
  EXPECT_EQ(j["nodes"], s.path.size());
}

TEST(ReportJson, RoundTrip) {
  VerificationReport r;
  r.test_name = "demo";
  r.n_paths = 12;
  r.master_seed = 9;
  r.statistic = 0.02;
  r.threshold = 0.015;
  r.threshold_upper = 0.032;
  r.comparison = Comparison::between;
  r.pass = true;
  r.per_path_failures = {3, 5};
  r.details["ratio"] = 1.5;
  r.details["bad"] = INFINITY;
  r.runtime_seconds = 1.25;
  const auto j = report_to_json(r);
  EXPECT_EQ(j["threshold"], Json::array({0.015, 0.032}));
  EXPECT_EQ(j["comparison"], "in");
  const auto back = report_from_json(Json::parse(j.dump()));
  EXPECT_EQ(report_to_json(back), j);
  EXPECT_FALSE(report_to_json(r, false).contains("runtime_s"));
}

TEST(SuiteConfigJson, Validation) {
  EXPECT_EQ(kind_of([] { suite_config_from_json(Json::object()); }), ErrorKind::usage);
  EXPECT_EQ(kind_of([] { suite_config_from_json(Json::parse(R"({"seed":1,"colour":2})")); }), ErrorKind::usage);
  const auto c = suite_config_from_json(Json::parse(R"({"seed":4,"profile":"quick","tests":["bridge"]})"));
  EXPECT_EQ(c.seed, 4u);
  EXPECT_EQ(c.profile, Profile::quick);
  ASSERT_EQ(c.tests.size(), 1u);
  EXPECT_EQ(suite_config_from_json(suite_config_to_json(c)).tests, c.tests);
}

TEST(Files, MissingFileAndBadJson) {
  EXPECT_EQ(kind_of([] { read_text_file("/nonexistent/dir/file.csv"); }), ErrorKind::io);
  EXPECT_EQ(kind_of([] { parse_json("{", "config"); }), ErrorKind::io);
}
