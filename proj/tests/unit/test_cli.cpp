#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli/cli.hpp"

namespace grasskit::cli {
namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  args.insert(args.begin(), "grasskit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("grasskit_cli_test_" + name);
  std::ofstream(path) << text;
  return path;
}

TEST(Cli, GeodesicCsv) {
  const Result r = call({"geodesic", "--p", "2", "--n", "4", "--dir", "type2", "1", "2", "--steps", "4",
                         "--tmax", "2"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,w_product,dist,in_BG");
  int rows = 0;
  while (std::getline(in, line)) {
    double t = 0;
    double w = 0;
    ASSERT_EQ(std::sscanf(line.c_str(), "%lf,%lf", &t, &w), 2);
    EXPECT_NEAR(w, std::pow(std::cos(t / std::sqrt(2.0)), 2), 1e-14);
    ++rows;
  }
  EXPECT_EQ(rows, 5);
}

TEST(Cli, GeodesicDirectionErrors) {
  EXPECT_EQ(call({"geodesic", "--p", "2", "--n", "4", "--dir", "type1", "3", "1"}).code, kExitInvalid);
  EXPECT_EQ(call({"geodesic", "--p", "2", "--n", "4", "--dir", "type2", "1", "1"}).code, kExitInvalid);
  EXPECT_EQ(call({"geodesic", "--p", "2", "--n", "4", "--dir", "spiral"}).code, kExitInvalid);
  EXPECT_EQ(call({"geodesic", "--p", "2", "--n", "4", "--dir", "matrix", "0", "0", "0", "0"}).code, kExitInvalid);
  EXPECT_EQ(call({"geodesic", "--p", "2", "--n", "4"}).code, kExitInvalid);
}

TEST(Cli, DistJson) {
  const Result r = call({"dist", "--p", "1", "--n", "2", "--frame-a", "1", "0", "--frame-b", "0", "1"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_NEAR(doc["dist"].get<double>(), std::acos(0.0), 1e-15);
  EXPECT_EQ(call({"dist", "--p", "1", "--n", "2", "--frame-a", "1", "--frame-b", "0", "1"}).code, kExitInvalid);
}

TEST(Cli, CanonicalJson) {
  const Result r = call({"canonical", "--p", "2", "--n", "4", "--matrix", "3", "0", "0", "4"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["r"], 2);
  EXPECT_NEAR(doc["lambda"][0].get<double>(), 4.0, 1e-14);
  EXPECT_NEAR(doc["lambda"][1].get<double>(), 3.0, 1e-14);
  EXPECT_NEAR(doc["speed"].get<double>(), 5.0, 1e-14);
}

TEST(Cli, RegionChecks) {
  const Result ok = call({"region-check", "--check", "no-closed", "--p", "2", "--n", "4", "--epsilon", "0.6",
                          "--samples", "5", "--seed", "3"});
  EXPECT_EQ(ok.code, kExitOk) << ok.err;
  EXPECT_EQ(nlohmann::json::parse(ok.out)["check"], "no_closed_geodesic");

  const Result failed = call({"region-check", "--check", "union", "--epsilon", "0.3", "--samples", "500"});
  EXPECT_EQ(failed.code, kExitCheckFailed);
  EXPECT_FALSE(nlohmann::json::parse(failed.out)["passed"].get<bool>());

  EXPECT_EQ(call({"region-check", "--check", "bogus"}).code, kExitInvalid);
  EXPECT_EQ(call({"region-check", "--check", "condition-i", "--p", "2", "--n", "5"}).code, kExitInvalid);
}

TEST(Cli, FlowConfig) {
  const auto cfg = temp_file("flow.cfg", "# cap map\ntarget = s2\nregion = half-equator\nepsilon = 0.2\n"
                                         "initial = cap\nm = 8\nbudget = 20000\n");
  const auto prefix = (std::filesystem::temp_directory_path() / "grasskit_cli_test_flow").string();
  const Result r = call({"flow", "--config", cfg.string(), "--out", prefix});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["classification"], "collapsed to constant");
  std::ifstream csv(prefix + ".csv");
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header, "step,energy,tension_norm,diameter,in_region");
  std::ifstream json(prefix + ".json");
  std::stringstream saved;
  saved << json.rdbuf();
  EXPECT_EQ(saved.str(), r.out);

  const auto bad = temp_file("bad.cfg", "target = s2\ncolour = red\n");
  EXPECT_EQ(call({"flow", "--config", bad.string()}).code, kExitInvalid);
  const auto off = temp_file("off.cfg", "target = s2\nregion = half-equator\ninitial = equator\nm = 4\n");
  EXPECT_EQ(call({"flow", "--config", off.string()}).code, kExitInvalid);
  EXPECT_EQ(call({"flow", "--config", "/nonexistent/grasskit.cfg"}).code, kExitInvalid);
}

TEST(Cli, FlowConstantNeedsNoSteps) {
  const auto cfg = temp_file("const.cfg", "target = s2\ninitial = constant\nm = 6\n");
  const Result r = call({"flow", "--config", cfg.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["classification"], "collapsed to constant");
  EXPECT_EQ(doc["steps"], 0);
}

TEST(Cli, SlopeScan) {
  EXPECT_EQ(call({"slope-scan", "--sampler", "affine"}).code, kExitOk);
  const Result sc = call({"slope-scan", "--sampler", "sincos", "--beta0", "2"});
  ASSERT_EQ(sc.code, kExitOk);
  EXPECT_GE(nlohmann::json::parse(sc.out)["worst_case"]["min_w_product"].get<double>(), 0.5);
  EXPECT_EQ(call({"slope-scan", "--sampler", "quadratic"}).code, kExitCheckFailed);

  const auto grid = temp_file("grid.txt", "0 0 ; 0.1 0 0 0.1\n1 1 ; 0.2 0 0 0.2\n");
  EXPECT_EQ(call({"slope-scan", "--grid", grid.string()}).code, kExitOk);
  const auto codim1 = temp_file("grid1.txt", "0 0 ; 0.1 0.1\n");
  EXPECT_EQ(call({"slope-scan", "--grid", codim1.string()}).code, kExitInvalid);
  EXPECT_EQ(call({"slope-scan", "--sampler", "affine", "--grid", grid.string()}).code, kExitInvalid);
}

TEST(Cli, VerifySuites) {
  const Result r = call({"verify", "--suite", "grassmann"});
  ASSERT_EQ(r.code, kExitOk) << r.out;
  const auto doc = nlohmann::json::parse(r.out);
  bool has_diameter = false;
  for (const auto& c : doc["checks"]) has_diameter = has_diameter || c["name"] == "grassmann: diameter(2,4) = pi";
  EXPECT_TRUE(has_diameter);
  EXPECT_EQ(call({"verify", "--suite", "algebra"}).code, kExitOk);
  EXPECT_EQ(call({"verify", "--suite", "nope"}).code, kExitInvalid);
  EXPECT_THROW(verify_suite("nope"), std::invalid_argument);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(call({}).code, kExitInvalid);
  EXPECT_EQ(call({"frobnicate"}).code, kExitInvalid);
  EXPECT_EQ(call({"--help"}).code, kExitOk);
}

}  // namespace
}  // namespace grasskit::cli
