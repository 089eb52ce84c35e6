#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "pbp/pbp.h"

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  pbp_string_free(s);
  return out;
}

}  // namespace

TEST(CApi, StatusNames) {
  EXPECT_STREQ(pbp_status_name(PBP_OK), "Ok");
  EXPECT_STREQ(pbp_status_name(PBP_INVALID_BRANCH), "InvalidBranch");
  EXPECT_STREQ(pbp_status_name(PBP_STEP_UNDERFLOW), "StepUnderflow");
  EXPECT_NE(std::strlen(pbp_version()), 0u);
}

TEST(CApi, NullArgumentsAreUsageErrors) {
  pbp_path* p = nullptr;
  EXPECT_EQ(pbp_path_zero(1.0, 4, nullptr), PBP_USAGE_ERROR);
  EXPECT_EQ(pbp_path_zero(-1.0, 4, &p), PBP_USAGE_ERROR);
  EXPECT_EQ(p, nullptr);
  EXPECT_NE(std::strlen(pbp_last_error()), 0u);
  double v = 0.0;
  EXPECT_EQ(pbp_path_eval(nullptr, 0.0, &v), PBP_USAGE_ERROR);
}

TEST(CApi, BesselFromOne) {
  pbp_path* z = nullptr;
  ASSERT_EQ(pbp_path_zero(1.0, 1024, &z), PBP_OK);
  pbp_drift* d = nullptr;
  ASSERT_EQ(pbp_drift_from_json(R"({"variant":"bes3","center":0,"side":"above"})", &d), PBP_OK);
  pbp_solution* s = nullptr;
  ASSERT_EQ(pbp_solve(d, z, 1.0, 0.0, 1.0, PBP_SIDE_NONE, nullptr, nullptr, &s), PBP_OK);
  pbp_path* sp = nullptr;
  ASSERT_EQ(pbp_solution_path(s, &sp), PBP_OK);
  double end = 0.0;
  ASSERT_EQ(pbp_path_eval(sp, 1.0, &end), PBP_OK);
  EXPECT_NEAR(end, std::sqrt(3.0), 1e-6);
  double res = -1.0;
  ASSERT_EQ(pbp_solution_check(s, d, z, nullptr, &res), PBP_OK);
  EXPECT_LE(res, 1e-6);
  const auto side = take([&] {
    char* out = nullptr;
    pbp_solution_sidecar_json(s, &out);
    return out;
  }());
  EXPECT_NE(side.find("\"residual\""), std::string::npos);
  EXPECT_EQ(pbp_solve(d, z, 1.0, 0.0, 1.0, PBP_SIDE_BELOW, nullptr, nullptr, &s), PBP_SIDE_VIOLATION);
  pbp_path_free(sp);
  pbp_solution_free(s);
  pbp_drift_free(d);
  pbp_path_free(z);
}

TEST(CApi, Ce1InvalidBranch) {
  std::vector<double> t{0.0, 1.0, 2.0, 3.0};
  std::vector<double> v{0.0, 0.0, 0.5, 0.5};
  pbp_path* drv = nullptr;
  ASSERT_EQ(pbp_path_from_arrays(t.data(), v.data(), t.size(), 1, &drv), PBP_OK);
  pbp_solution* s = nullptr;
  EXPECT_EQ(pbp_construct_ce1(drv, PBP_CE1_NEGATIVE, nullptr, &s), PBP_INVALID_BRANCH);
  EXPECT_NE(std::string(pbp_last_error()).find("InvalidBranch"), std::string::npos);
  ASSERT_EQ(pbp_construct_ce1(drv, PBP_CE1_AUTO, nullptr, &s), PBP_OK);
  pbp_path* sp = nullptr;
  ASSERT_EQ(pbp_solution_path(s, &sp), PBP_OK);
  double x1 = 0.0;
  pbp_path_eval(sp, 1.0, &x1);
  EXPECT_NEAR(x1, 1.0, 1e-2);
  pbp_path_free(sp);
  pbp_solution_free(s);
  pbp_path_free(drv);
}

TEST(CApi, PathSerialisation) {
  pbp_path* b = nullptr;
  ASSERT_EQ(pbp_path_brownian(1.0, 16, 3, 4, &b), PBP_OK);
  EXPECT_EQ(pbp_path_size(b), 17u);
  const auto json = take([&] {
    char* out = nullptr;
    pbp_path_to_json(b, &out);
    return out;
  }());
  pbp_path* c = nullptr;
  ASSERT_EQ(pbp_path_from_json(json.c_str(), &c), PBP_OK);
  std::vector<double> vb(17), vc(17);
  pbp_path_copy(b, nullptr, vb.data(), vb.size());
  pbp_path_copy(c, nullptr, vc.data(), vc.size());
  EXPECT_EQ(vb, vc);
  const auto csv = take([&] {
    char* out = nullptr;
    pbp_path_to_csv_string(b, &out);
    return out;
  }());
  EXPECT_EQ(csv.rfind("t,value\n", 0), 0u);
  EXPECT_EQ(pbp_path_from_json("{", &c), PBP_IO_ERROR);
  pbp_path_free(c);
  pbp_path_free(b);
}

TEST(CApi, SuiteRunsAndRejectsEmptyConfig) {
  char* out = nullptr;
  int all = 0;
  EXPECT_EQ(pbp_verify_suite("{}", 0, &out, &all), PBP_USAGE_ERROR);
  ASSERT_EQ(pbp_verify_suite(R"({"seed":1,"profile":"quick","tests":["cancellation"]})", 0, &out, &all), PBP_OK);
  const auto lines = take(out);
  EXPECT_EQ(all, 1);
  EXPECT_NE(lines.find("\"test\":\"cancellation_control\""), std::string::npos);
  EXPECT_EQ(lines.find("runtime_s"), std::string::npos);
  ASSERT_EQ(pbp_suite_config_resolve(R"({"seed":2})", &out), PBP_OK);
  EXPECT_NE(take(out).find("\"profile\""), std::string::npos);
}
