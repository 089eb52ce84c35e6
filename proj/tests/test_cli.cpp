#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "config.hpp"

using pbp::cli::parse_config;
using pbp::cli::UsageError;

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Run run_cli(const std::string& args) {
  const auto dir = fs::temp_directory_path();
  const auto out = dir / "pbp_cli_out.txt";
  const auto err = dir / "pbp_cli_err.txt";
  const std::string cmd = std::string(PBP_CLI_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  return Run{WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

fs::path temp_file(const std::string& name, const std::string& text) {
  const auto p = fs::temp_directory_path() / name;
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST(ParseConfig, ConstructExample) {
  const auto r = parse_config({"construct", "--case", "ce1", "--seed", "7", "--steps", "16384", "--out", "x.csv"});
  ASSERT_TRUE(r.config.has_value());
  const auto& c = *r.config;
  EXPECT_EQ(c.command, "construct");
  EXPECT_EQ(c.text("case"), "ce1");
  EXPECT_EQ(c.count("seed"), 7u);
  EXPECT_EQ(c.integer("steps"), 16384);
  EXPECT_EQ(c.text("out"), "x.csv");
  EXPECT_EQ(c.text("branch"), "auto");
  EXPECT_EQ(c.seed_source, "flag");
}

TEST(ParseConfig, FlagOverridesFile) {
  const auto f = temp_file("pbp_cfg.json", R"({"command":"construct","seed":3,"case":"ce2"})");
  const auto r = parse_config({"construct", "--config", f.string(), "--seed", "9"});
  ASSERT_TRUE(r.config);
  EXPECT_EQ(r.config->count("seed"), 9u);
  EXPECT_EQ(r.config->text("case"), "ce2");
  const auto g = parse_config({"construct", "--config", f.string()});
  EXPECT_EQ(g.config->count("seed"), 3u);
  EXPECT_EQ(g.config->seed_source, "file");
}

TEST(ParseConfig, SeedFallsBackToEnvironment) {
  EXPECT_EQ(parse_config({"gen-driver"}, "42").config->count("seed"), 42u);
  EXPECT_EQ(parse_config({"gen-driver"}, "42").config->seed_source, "env");
  EXPECT_EQ(parse_config({"gen-driver"}).config->count("seed"), 1u);
}

TEST(ParseConfig, Rejections) {
  EXPECT_THROW(parse_config({"construct", "--steps", "-1"}), UsageError);
  EXPECT_THROW(parse_config({"construct", "--bogus", "1"}), UsageError);
  EXPECT_THROW(parse_config({"construct", "--profile", "quick"}), UsageError);
  EXPECT_THROW(parse_config({"construct", "--case", "ce3"}), UsageError);
  EXPECT_THROW(parse_config({"simulate"}), UsageError);
  const auto f = temp_file("pbp_cfg_bad.json", R"({"seed":3,"colour":1})");
  EXPECT_THROW(parse_config({"construct", "--config", f.string()}), UsageError);
  const auto g = temp_file("pbp_cfg_cmd.json", R"({"command":"simulate"})");
  EXPECT_THROW(parse_config({"construct", "--config", g.string()}), UsageError);
}

TEST(Binary, SimulateBesselEndsAtSqrtThree) {
  const auto r = run_cli("simulate --drift bes3 --x0 1 --driver zero --T 1");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto last = r.out.substr(r.out.rfind('\n', r.out.size() - 2) + 1);
  EXPECT_NEAR(std::stod(last.substr(last.find(',') + 1)), std::sqrt(3.0), 1e-6);
  EXPECT_NE(r.err.find("config {"), std::string::npos);
}

TEST(Binary, InvalidBranchExitsOne) {
  const auto drv = temp_file("pbp_drv.csv", "t,value\n0,0\n1,0\n2,0.5\n3,0.5\n");
  const auto r = run_cli("construct --case ce1 --branch negative --driver csv:" + drv.string());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("InvalidBranch"), std::string::npos);
}

TEST(Binary, UsageAndIoErrorsExitTwo) {
  EXPECT_EQ(run_cli("construct --steps -1").code, 2);
  EXPECT_EQ(run_cli("construct --nope").code, 2);
  EXPECT_EQ(run_cli("construct --driver csv:/nonexistent/d.csv").code, 2);
}

TEST(Binary, ConstructWritesSidecar) {
  const auto out = fs::temp_directory_path() / "pbp_ce1.csv";
  const auto r = run_cli("construct --case ce1 --seed 7 --out " + out.string());
  ASSERT_EQ(r.code, 0) << r.err;
  const auto side = slurp(out.string() + ".json");
  EXPECT_NE(side.find("\"branch_log\""), std::string::npos);
  EXPECT_EQ(slurp(out).rfind("t,value\n", 0), 0u);
}

TEST(Binary, GenDriverIsReproducible) {
  const auto a = run_cli("gen-driver --seed 5 --T 2 --steps 64");
  const auto b = run_cli("gen-driver --seed 5 --T 2 --steps 64");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, run_cli("gen-driver --seed 6 --T 2 --steps 64").out);
}
