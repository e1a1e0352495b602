#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "psr/cli.hpp"

using namespace psr;
using nlohmann::json;

namespace {

struct Outcome {
  int status = 0;
  std::string out, err;
  json report() const { return json::parse(out); }
};

Outcome call(std::vector<std::string> args) {
  args.insert(args.begin(), "psr");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Outcome o;
  o.status = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

std::filesystem::path scratch_dir(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("psr_cli_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace

TEST(Cli, ClassifyWeierstrass) {
  const auto o = call({"classify", "--weierstrass", "3,0.5", "--json"});
  ASSERT_EQ(o.status, 0) << o.err;
  const json j = o.report();
  EXPECT_EQ(j["schema_version"], kReportSchemaVersion);
  EXPECT_EQ(j["command"], "classify");
  const json& r = j["result"];
  EXPECT_NEAR(r["discriminant"].get<double>(), 20.25, 1e-12);
  EXPECT_NEAR(r["j_invariant"].get<double>(), 27.0 / 20.25, 1e-12);
  EXPECT_EQ(r["connected_components"], 2);
  EXPECT_FALSE(r["psr_component"]["predicate"].empty());
}

TEST(Cli, CurvatureAtCatalogPoint) {
  const auto o = call({"curvature-at", "--catalog", "a", "--point", "1,1,1", "--json"});
  ASSERT_EQ(o.status, 0) << o.err;
  const json r = o.report()["result"];
  EXPECT_NEAR(r["scal"].get<double>(), -6.0, 1e-12);
  EXPECT_NEAR(r["scal_corollary"].get<double>(), -6.0, 1e-10);
  EXPECT_EQ(r["g"].size(), 3u);
}

TEST(Cli, TextOutput) {
  const auto o = call({"curvature-at", "--poly", "x*(x*y-z^2)", "--point", "2,1,1"});
  ASSERT_EQ(o.status, 0);
  EXPECT_NE(o.out.find("scal = -7.5"), std::string::npos) << o.out;
}

TEST(Cli, ValidationFailuresExitTwo) {
  EXPECT_EQ(call({"classify", "--poly", "x^2*y + z"}).status, kExitInvalid);
  EXPECT_EQ(call({"classify", "--catalog", "nope"}).status, kExitInvalid);
  EXPECT_EQ(call({"frobnicate"}).status, kExitInvalid);
  EXPECT_EQ(call({"classify", "--catalog", "a", "--poly", "x*y*z"}).status, kExitInvalid);
  EXPECT_EQ(call({"curvature-at", "--catalog", "a", "--point", "1,1"}).status, kExitInvalid);
  EXPECT_EQ(call({"curvature-at", "--catalog", "a", "--point", "1,x,1"}).status, kExitInvalid);
  EXPECT_EQ(call({"classify", "--weierstrass", "3"}).status, kExitInvalid);
  EXPECT_EQ(call({"scal-range", "--catalog", "a", "--workers", "0"}).status, kExitInvalid);
}

TEST(Cli, ErrorCodeInJson) {
  const auto o = call({"weierstrass-reduce", "--weierstrass", "3,2", "--json"});
  EXPECT_EQ(o.status, kExitInvalid);
  const json j = o.report();
  EXPECT_EQ(j["error"]["code"], "non_positive_discriminant");
  EXPECT_EQ(j["exit_status"], kExitInvalid);
}

TEST(Cli, NumericalFailureExitsThree) {
  // singular Hessian at a point with h > 0
  const auto o = call({"curvature-at", "--poly", "x^3+y^3+z^3", "--point", "1,1,0", "--json"});
  EXPECT_EQ(o.status, kExitNumerical);
  EXPECT_EQ(o.report()["error"]["code"], "degenerate_hessian");
}

TEST(Cli, WeierstrassReduce) {
  const auto o = call({"weierstrass-reduce", "--weierstrass", "12,0", "--json"});
  ASSERT_EQ(o.status, 0) << o.err;
  const json r = o.report()["result"];
  EXPECT_NEAR(r["b_tilde"].get<double>(), 0.0, 1e-15);
  EXPECT_NEAR(r["R"].get<double>(), 0.0, 1e-15);
  EXPECT_LT(r["normalization_error"].get<double>(), 1e-10);
  EXPECT_LT(r["r_form_error"].get<double>(), 1e-10);

  const auto back = call({"weierstrass-reduce", "--rform", "2.5", "--json"});
  ASSERT_EQ(back.status, 0);
  EXPECT_NEAR(back.report()["result"]["R"].get<double>(), 2.5, 1e-10);
}

TEST(Cli, OutDirectoryAndCsv) {
  const auto dir = scratch_dir("out");
  const auto o = call({"scal-range", "--catalog", "d", "--grid", "11", "--csv", "--out", dir.string()});
  ASSERT_EQ(o.status, 0) << o.err;
  ASSERT_TRUE(std::filesystem::exists(dir / "report.json"));
  ASSERT_TRUE(std::filesystem::exists(dir / "scal.csv"));
  std::ifstream in(dir / "report.json");
  const json j = json::parse(in);
  EXPECT_NEAR(j["result"]["min"].get<double>(), -26.0 / 3.0, 1e-10);
  std::filesystem::remove_all(dir);
}

TEST(Cli, ConfigFileBelowFlags) {
  const auto dir = scratch_dir("config");
  {
    std::ofstream cfg(dir / "run.toml");
    cfg << "catalog = \"b\"\npoint = \"1,1,0\"\n";
  }
  const auto from_file = call({"curvature-at", "--config", (dir / "run.toml").string(), "--json"});
  ASSERT_EQ(from_file.status, 0) << from_file.err;
  EXPECT_NEAR(from_file.report()["result"]["scal"].get<double>(), -7.5, 1e-10);
  const auto flag_wins =
      call({"curvature-at", "--config", (dir / "run.toml").string(), "--point", "2,1,1", "--json"});
  ASSERT_EQ(flag_wins.status, 0) << flag_wins.err;
  EXPECT_EQ(flag_wins.report()["result"]["point"], json::parse("[2.0, 1.0, 1.0]"));
  std::filesystem::remove_all(dir);
}

TEST(Cli, DeterministicAcrossWorkers) {
  const auto one = call({"scal-range", "--catalog", "c", "--grid", "21", "--workers", "1", "--json"});
  const auto three = call({"scal-range", "--catalog", "c", "--grid", "21", "--workers", "3", "--json"});
  ASSERT_EQ(one.status, 0);
  EXPECT_EQ(one.out, three.out);
  const auto g1 = call({"geodesic-probe", "--catalog", "a", "--directions", "4", "--lmax", "5", "--json"});
  const auto g2 =
      call({"geodesic-probe", "--catalog", "a", "--directions", "4", "--lmax", "5", "--workers", "2", "--json"});
  ASSERT_EQ(g1.status, 0) << g1.err;
  EXPECT_EQ(g1.out, g2.out);
  EXPECT_EQ(g1.report()["result"]["verdict"], "complete-evidence");
}

TEST(Cli, HyperbolicScan) {
  const auto o = call({"hyperbolic-scan", "--catalog", "a", "--grid", "9", "--json"});
  ASSERT_EQ(o.status, 0) << o.err;
  const json r = o.report()["result"];
  EXPECT_EQ(r["components"].size(), 4u);  // one per sign pattern with xyz > 0
}
