#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "cli.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = treecap::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override { unsetenv("TREECAP_OUT_DIR"); }
  void TearDown() override { unsetenv("TREECAP_OUT_DIR"); }
};

}  // namespace

TEST_F(CliTest, ChainCapacity) {
  Result r = run_cli({"cap", "--chain", "4"});
  EXPECT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["cap"], 0.25);
}

TEST_F(CliTest, LemmaSuiteReportsPassPerLemma) {
  Result r = run_cli({"lemmas", "--suite", "blowups", "--seed", "7", "--instances", "100"});
  EXPECT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["schema"], 1);
  ASSERT_EQ(j["lemmas"].size(), 4u);
  for (const auto& l : j["lemmas"]) {
    EXPECT_EQ(l["pass"], true) << l.dump();
    EXPECT_EQ(l["instances"], 100);
  }
}

TEST_F(CliTest, HankelRatioCsvRow) {
  Result r = run_cli({"hankel", "--ratio", "--degree", "8", "--seed", "1"});
  EXPECT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string header, row, extra;
  std::getline(lines, header);
  std::getline(lines, row);
  EXPECT_FALSE(std::getline(lines, extra));
  EXPECT_EQ(header, "symbol_id,degree,form_norm,x_estimate,ratio");
  double ratio = std::stod(row.substr(row.rfind(',') + 1));
  EXPECT_TRUE(std::isfinite(ratio));
  EXPECT_GT(ratio, 0.0);
  EXPECT_EQ(row.substr(0, 4), "0,8,");
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run_cli({}).code, 2);
  EXPECT_EQ(run_cli({"nonsense"}).code, 2);
  Result r = run_cli({"cap", "--unknown-flag"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
  EXPECT_EQ(run_cli({"cap", "--format", "xml"}).code, 2);
  EXPECT_EQ(run_cli({"cap", "--max-level", "40"}).code, 2);
  EXPECT_EQ(run_cli({"lemmas", "--suite", "nope"}).code, 2);
  EXPECT_EQ(run_cli({"main-estimate", "--alpha", "0.5"}).code, 2);
  EXPECT_EQ(run_cli({"condenser", "--format", "csv"}).code, 2);
}

TEST_F(CliTest, HelpIsNotAnError) { EXPECT_EQ(run_cli({"--help"}).code, 0); }

TEST_F(CliTest, DeterministicOutput) {
  for (std::vector<std::string> args : {std::vector<std::string>{"cap", "--seed", "9"},
                                        std::vector<std::string>{"condenser", "--seed", "3"},
                                        std::vector<std::string>{"blowup", "--seed", "5", "--rho", "0.4"}}) {
    Result a = run_cli(args);
    Result b = run_cli(args);
    EXPECT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
  }
}

TEST_F(CliTest, CsvHeadersAlwaysPresent) {
  Result tree = run_cli({"tree", "--max-level", "1", "--format", "csv"});
  EXPECT_EQ(tree.out, "id,level,idx\n0,0,0\n1,1,0\n2,1,1\n");
  Result lemmas = run_cli({"lemmas", "--suite", "capacity", "--instances", "0", "--format", "csv"});
  EXPECT_EQ(lemmas.code, 0);
  EXPECT_EQ(lemmas.out.substr(0, lemmas.out.find('\n')), "lemma,instances,applicable,violations,worst_ratio,pass");
}

TEST_F(CliTest, TreeJsonLayout) {
  Result r = run_cli({"tree", "--max-level", "2"});
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["max_level"], 2);
  EXPECT_EQ(j["nodes"].size(), 7u);
  EXPECT_EQ(j["nodes"][6]["idx"], 3);
}

TEST_F(CliTest, OutputDirectoryOverride) {
  auto dir = std::filesystem::temp_directory_path() / "treecap_cli_test";
  std::filesystem::remove_all(dir);
  setenv("TREECAP_OUT_DIR", dir.c_str(), 1);
  Result r = run_cli({"cap", "--chain", "5", "--out", "elsewhere/chain.json"});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(dir / "chain.json");
  ASSERT_TRUE(in.good());
  auto j = nlohmann::json::parse(in);
  EXPECT_EQ(j["cap"], 0.2);
  std::filesystem::remove_all(dir);
}

TEST_F(CliTest, OutFileWithoutOverride) {
  auto path = std::filesystem::temp_directory_path() / "treecap_cli_out.json";
  std::filesystem::remove(path);
  Result r = run_cli({"cap", "--chain", "2", "--out", path.string()});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(std::filesystem::exists(path));
  std::filesystem::remove(path);
}

TEST_F(CliTest, MainEstimateReport) {
  Result r = run_cli({"main-estimate", "--degree", "6"});
  EXPECT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j["reports"].size(), 1u);
  EXPECT_EQ(j["reports"][0]["bookkeeping_ok"], true);
  EXPECT_EQ(j["params"]["alpha"], 0.9);
}

TEST_F(CliTest, FieldsAndStegenga) {
  Result f = run_cli({"fields", "--instances", "5"});
  EXPECT_EQ(f.code, 0) << f.err;
  EXPECT_EQ(nlohmann::json::parse(f.out)["intest"].size(), 8u);
  Result s = run_cli({"stegenga", "--instances", "4", "--theta-count", "1", "--max-level", "11"});
  EXPECT_EQ(s.code, 0) << s.err;
  auto j = nlohmann::json::parse(s.out);
  EXPECT_EQ(j["band"]["ratios"].size(), 4u);
}

TEST_F(CliTest, ParallelMatchesSerial) {
  Result a = run_cli({"hankel", "--ratio", "--degree", "4", "--instances", "4"});
  Result b = run_cli({"hankel", "--ratio", "--degree", "4", "--instances", "4", "--parallel"});
  EXPECT_EQ(a.out, b.out);
}
