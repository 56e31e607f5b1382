#include <gtest/gtest.h>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "bestsubset/cli.hpp"
#include "bestsubset/numeric.hpp"

using namespace bestsubset;
using nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out, err;
  json report() const { return json::parse(out); }
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class CliFiles : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("best_subset_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const auto path = dir_ / name;
    std::ofstream(path) << text;
    return path.string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::filesystem::path dir_;
};

}  // namespace

TEST(CliMoments, FourthOrderCoefficients) {
  const Outcome r = run({"moments", "--m", "4", "--n", "10"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = r.report();
  EXPECT_EQ(j["coefficients"], json::parse("[10, 240]"));
  EXPECT_EQ(j["schema_version"], kSchemaVersion);
  EXPECT_EQ(j["seed"], 0);
  EXPECT_EQ(j["polynomials"][1]["c"], "3n^2 - 6n");
  EXPECT_EQ(j["bound_check"]["per_k"], json::parse("[true, true]"));
}

TEST(CliMoments, Evaluation) {
  const Outcome r = run({"moments", "--m", "2", "--n", "10", "--theta", "0.5", "--seed", "4"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NEAR(r.report()["central_moment"].get<double>(), 2.5, 1e-14);
  EXPECT_EQ(r.report()["seed"], 4);
}

TEST(CliMoments, OddOrderNeedsTheta) {
  EXPECT_EQ(run({"moments", "--m", "3", "--n", "10"}).code, 2);
  const Outcome r = run({"moments", "--m", "3", "--n", "10", "--theta", "0.2"});
  ASSERT_EQ(r.code, 0);
  // n q (1 - 2 theta)
  EXPECT_NEAR(r.report()["central_moment"].get<double>(), 10 * 0.16 * 0.6, 1e-14);
  EXPECT_FALSE(r.report().contains("coefficients"));
}

TEST(CliMoments, HugeCoefficientsAsStrings) {
  const Outcome r = run({"moments", "--m", "40", "--n", "1000000"});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.report()["coefficients"][19].is_string());
  EXPECT_EQ(run({"moments", "--m", "0", "--n", "3"}).code, 2);
  EXPECT_EQ(run({"moments", "--m", "4"}).code, 2);
}

TEST_F(CliFiles, AnalyzeShutoutKeepsLeader) {
  const std::string counts = write("c.csv", "algorithm,count\n1,10\n2,0\n3,0\n");
  const Outcome r = run({"analyze", "--counts", counts, "--method", "finite", "--delta", "0.05"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = r.report();
  const auto members = j["members"].get<std::vector<std::string>>();
  EXPECT_NE(std::find(members.begin(), members.end(), "1"), members.end());
  EXPECT_EQ(j["m"], 6);
  EXPECT_NEAR(j["delta_1"].get<double>() + j["delta_2"].get<double>(), 0.05, 1e-15);
  EXPECT_EQ(j["labels"].size(), 3u);
  EXPECT_TRUE(j.contains("vacuous"));
  EXPECT_NE(r.err.find("subset"), std::string::npos);
}

TEST_F(CliFiles, AnalyzeRejectsBadDelta) {
  const std::string counts = write("c.csv", "algorithm,count\na,3\nb,1\n");
  const Outcome r = run({"analyze", "--counts", counts, "--delta", "1.5"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("--delta"), std::string::npos);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
  EXPECT_TRUE(r.out.empty());
}

TEST_F(CliFiles, AnalyzeValidationExitCodes) {
  EXPECT_EQ(run({"analyze"}).code, 2);
  EXPECT_EQ(run({"analyze", "--counts", path("missing.csv")}).code, 2);
  const std::string bad = write("bad.csv", "algorithm,count\na,1\na,2\n");
  const Outcome dup = run({"analyze", "--counts", bad});
  EXPECT_EQ(dup.code, 2);
  EXPECT_NE(dup.err.find("duplicate label 'a'"), std::string::npos);
  const std::string ok = write("ok.csv", "algorithm,count\na,30\nb,3\n");
  EXPECT_EQ(run({"analyze", "--counts", ok, "--m", "5"}).code, 2);
  EXPECT_EQ(run({"analyze", "--counts", ok, "--method", "bayes"}).code, 2);
  EXPECT_EQ(run({"analyze", "--counts", ok, "--delta-split", "1"}).code, 2);
  EXPECT_EQ(run({"analyze", "--counts", ok, "--m", "8"}).report()["m"], 8);
  EXPECT_EQ(run({"bogus"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
}

TEST_F(CliFiles, AnalyzeScoresWithTieAudit) {
  const std::string scores =
      write("s.csv", "dataset,a,b,c\n1,0.9,0.9,0.1\n2,0.8,0.2,0.1\n3,0.1,0.2,0.3\n4,,0.1,0.2\n");
  const Outcome r = run({"analyze", "--scores", scores, "--direction", "higher_better", "--tie-policy",
                     "first", "--method", "asymptotic"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = r.report();
  EXPECT_EQ(j["counts"], json::parse("[2, 0, 1]"));
  EXPECT_EQ(j["tie_audit"]["tied_rows"], 1);
  EXPECT_EQ(j["tie_audit"]["dropped_rows"], 1);
  EXPECT_EQ(j["tie_audit"]["policy"], "first");
}

TEST_F(CliFiles, AnalyzeMScanIsDiagnosticOnly) {
  const std::string counts = write("c.csv", "algorithm,count\na,300\nb,120\nc,80\n");
  const Outcome plain = run({"analyze", "--counts", counts});
  const Outcome scanned = run({"analyze", "--counts", counts, "--m-scan", "12"});
  ASSERT_EQ(scanned.code, 0);
  EXPECT_EQ(scanned.report()["width"], plain.report()["width"]);
  EXPECT_EQ(scanned.report()["m_scan"]["widths"].size(), 6u);
}

TEST_F(CliFiles, SimulateHeaderAndDeterminism) {
  const std::vector<std::string> args = {"simulate", "--dist",  "zipf:s=1,A=20", "--n-grid",
                                         "100",      "--reps",  "200",           "--methods",
                                         "finite",   "--delta", "0.05",          "--seed",
                                         "7"};
  const Outcome a = run(args), b = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  const json j = a.report();
  EXPECT_NEAR(j["distribution"]["p1"].get<double>(), 0.278, 5e-4);
  EXPECT_EQ(j["seed"], 7);
  EXPECT_EQ(j["schema_version"], kSchemaVersion);
  EXPECT_EQ(j["rows"].size(), 1u);
}

TEST_F(CliFiles, SimulateOracleNotLargerThanFinite) {
  const std::string csv = path("plot.csv");
  const Outcome r = run({"simulate", "--dist", "zipf:s=1,A=20", "--n-grid", "100", "--reps", "200",
                     "--methods", "finite,oracle", "--delta", "0.05", "--seed", "7",
                     "--oracle-reps", "20000", "--plot-data", csv});
  ASSERT_EQ(r.code, 0) << r.err;
  double finite = -1, oracle = -1;
  for (const auto& row : r.report()["rows"]) {
    (row["method"] == "finite" ? finite : oracle) = row["mean_size"].get<double>();
  }
  EXPECT_LE(oracle, finite);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "method,n,coverage,mean_size,se_coverage,se_size");
}

TEST_F(CliFiles, SimulateThreadCountDoesNotChangeOutput) {
  auto args = [](const std::string& threads) {
    return std::vector<std::string>{"simulate", "--dist", "simplex:A=8", "--n-grid", "40,90",
                                    "--reps", "150", "--methods", "finite,asymptotic,oracle",
                                    "--oracle-reps", "2000", "--seed", "3", "--threads", threads};
  };
  const Outcome one = run(args("1"));
  ASSERT_EQ(one.code, 0) << one.err;
  EXPECT_EQ(one.out, run(args("4")).out);
}

TEST_F(CliFiles, SimulateValidation) {
  EXPECT_EQ(run({"simulate", "--dist", "gauss:A=3"}).code, 2);
  EXPECT_EQ(run({"simulate", "--dist", "zipf:s=1,A=0"}).code, 2);
  EXPECT_EQ(run({"simulate", "--reps", "0"}).code, 2);
  EXPECT_EQ(run({"simulate", "--methods", "magic"}).code, 2);
  // uniform weights tie every symbol, so the oracle is undefined
  const Outcome tied = run({"simulate", "--dist", "zipf:s=0,A=4", "--methods", "oracle", "--reps", "5"});
  EXPECT_EQ(tied.code, 2);
  EXPECT_NE(tied.err.find("tied maxima"), std::string::npos);
}

TEST_F(CliFiles, BaselinesNeedInput) {
  const Outcome r = run({"baselines", "--delta", "0.05"});
  EXPECT_EQ(r.code, 2);
}

TEST_F(CliFiles, BaselinesConstantPermutation) {
  std::string text = "dataset,a,b,c,d\n";
  for (int i = 0; i < 10; ++i) text += "d" + std::to_string(i) + ",0.9,0.7,0.5,0.3\n";
  const Outcome r = run({"baselines", "--scores", write("s.csv", text), "--delta", "0.05"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = r.report();
  EXPECT_TRUE(j["friedman"]["reject"].get<bool>());
  EXPECT_NEAR(j["friedman"]["chi2"].get<double>(), 30.0, 1e-12);
  EXPECT_TRUE(j["friedman"]["iman_f"].is_null());  // +inf has no JSON form
  EXPECT_EQ(j["nemenyi"]["pairs"].size(), 6u);
  EXPECT_EQ(j["rank_verification"]["comparisons"][0]["leader"], "a");
}

TEST_F(CliFiles, BaselinesTiedCountsVerifyNothing) {
  const std::string counts =
      write("c.csv", "algorithm,count\ncat,8\nxgb,8\nlgbm,7\nrf,3\nsvm,2\nmlp,2\n");
  const Outcome r = run({"baselines", "--counts", counts});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.report()["rank_verification"]["verified_prefix_length"], 0);
}

TEST_F(CliFiles, BaselinesTwoAlgorithmCd) {
  std::string text = "dataset,a,b\n";
  for (int i = 0; i < 100; ++i) text += std::to_string(i) + (i % 3 ? ",1,2\n" : ",2,1\n");
  const Outcome r = run({"baselines", "--scores", write("s.csv", text)});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(r.report()["nemenyi"]["cd"].get<double>(), 1.96 / 10, 1e-3);
}

TEST_F(CliFiles, OutputFlagWritesFile) {
  const std::string out = path("m.json");
  const Outcome r = run({"moments", "--m", "2", "--n", "5", "--output", out});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(out);
  EXPECT_EQ(json::parse(in)["coefficients"], json::parse("[5]"));
}

TEST(CliHelp, ExitsZero) {
  const Outcome r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("analyze"), std::string::npos);
}
