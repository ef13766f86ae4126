#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using sdlab::cli::run;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("sdlab_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, NoArgumentsPrintsUsage) {
  const Result r = invoke({});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
}

TEST_F(CliTest, UnknownSubcommandOrFlag) {
  EXPECT_EQ(invoke({"spin"}).code, 1);
  const Result r = invoke({"scan-f", "--beta", "1/3", "--bogus", "1"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
}

TEST_F(CliTest, ScanFWritesHitRows) {
  const std::string out = path("hits.csv");
  const Result r = invoke({"scan-f", "--n", "3", "--rho", "2", "--beta", "1/3", "--c", "0.3", "--jmax", "10",
                           "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream csv(slurp(out));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line.rfind("# sdlab scan-f ", 0), 0u);
  EXPECT_NE(line.find("beta=1/3"), std::string::npos);
  EXPECT_NE(line.find("seed=0"), std::string::npos);
  std::getline(csv, line);
  EXPECT_EQ(line, "j,f_value,frac_distance");
  std::getline(csv, line);
  EXPECT_EQ(line.substr(0, 2), "2,");
  std::getline(csv, line);
  EXPECT_EQ(line.substr(0, 2), "3,");
}

TEST_F(CliTest, ChainSmallJFailsCoefficientStep) {
  const std::string out = path("chain.json");
  const Result r = invoke({"chain", "--n", "3", "--rho", "2", "--j", "50", "--k", "31", "--c", "0.01",
                           "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string text = slurp(out);
  EXPECT_EQ(text.rfind("// sdlab chain ", 0), 0u);
  const auto j = nlohmann::json::parse(text, nullptr, true, true);
  EXPECT_EQ(j["steps"].size(), 14u);
  EXPECT_FALSE(j["final_pass"].get<bool>());
  EXPECT_EQ(j["first_failure"], "coefficient");
  EXPECT_TRUE(j["steps"][13]["pass"].get<bool>());
  EXPECT_TRUE(j["steps"][0]["lhs"].is_string());
}

TEST_F(CliTest, ChainLargeJPasses) {
  const std::string out = path("chain.json");
  ASSERT_EQ(invoke({"chain", "--n", "3", "--rho", "2", "--j", "5000", "--k", "31", "--c", "0.01", "--out", out}).code, 0);
  const auto j = nlohmann::json::parse(slurp(out), nullptr, true, true);
  EXPECT_TRUE(j["final_pass"].get<bool>());
}

TEST_F(CliTest, PrecisionFloorExitsTwo) {
  const Result r = invoke({"limsup", "--beta", "golden", "--psi", "power:1,3", "--qmax", "1000000",
                           "--out", path("h.csv")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("precision"), std::string::npos);
}

TEST_F(CliTest, ValidationErrorsExitOne) {
  EXPECT_EQ(invoke({"scan-f", "--beta", "1/2", "--rho", "2", "--out", path("a.csv")}).code, 1);
  EXPECT_EQ(invoke({"scan-f", "--beta", "1/3", "--precision", "64", "--out", path("a.csv")}).code, 1);
  EXPECT_EQ(invoke({"critical", "--form", "47", "--out", path("a.csv")}).code, 1);
  EXPECT_EQ(invoke({"limsup", "--out", path("a.csv")}).code, 1);
}

TEST_F(CliTest, ConfigFileFlagsWin) {
  const std::string cfg = path("run.cfg");
  std::ofstream(cfg) << "# scan settings\nn = 3\nrho = 2\nbeta = 1/3\nc = 5   # overridden\njmax = 10\n";
  const std::string out = path("hits.csv");
  const Result r = invoke({"scan-f", "--config", cfg, "--c", "0.3", "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string text = slurp(out);
  EXPECT_NE(text.find(" c=0.3 "), std::string::npos);
  EXPECT_NE(text.find(" jmax=10 "), std::string::npos);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 4);
}

TEST_F(CliTest, ConfigUnknownKeyRejected) {
  const std::string cfg = path("bad.cfg");
  std::ofstream(cfg) << "rho = 2\njmx = 10\n";
  const Result r = invoke({"scan-f", "--config", cfg, "--beta", "1/3", "--out", path("a.csv")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("jmx"), std::string::npos);
}

TEST_F(CliTest, FlagsInConfig) {
  const std::string cfg = path("flag.cfg");
  std::ofstream(cfg) << "no-prune = true\n";
  const std::string out = path("hits.csv");
  ASSERT_EQ(invoke({"scan-f", "--config", cfg, "--rho", "2", "--beta", "1/3", "--c", "0.3", "--jmax", "10",
                    "--out", out}).code, 0);
  EXPECT_NE(slurp(out).find("no-prune=true"), std::string::npos);
}

TEST_F(CliTest, RerunIsByteIdentical) {
  const std::vector<std::string> base{"critical", "--samples", "6", "--qmax", "3000", "--c", "0.5,1",
                                      "--seed", "7", "--threads", "3"};
  auto args = base;
  args.insert(args.end(), {"--out", path("a.csv"), "--summary", path("a.json")});
  ASSERT_EQ(invoke(args).code, 0);
  const std::string csv1 = slurp(path("a.csv"));
  const std::string js1 = slurp(path("a.json"));
  ASSERT_EQ(invoke(args).code, 0);
  EXPECT_EQ(slurp(path("a.csv")), csv1);
  EXPECT_EQ(slurp(path("a.json")), js1);
  const auto j = nlohmann::json::parse(js1, nullptr, true, true);
  EXPECT_EQ(j["stats"].size(), 2u);
  EXPECT_EQ(j["form"], 48);
}

TEST_F(CliTest, EverySubcommandRuns) {
  const std::vector<std::vector<std::string>> runs{
      {"limsup", "--beta", "golden", "--psi", "power:0.5,1", "--qmax", "100", "--tail", "1,20", "--u", "0.5,0.25",
       "--summary", path("s.json")},
      {"eq-size", "--psi", "power:0.2,1", "--targets", "cosine:0.1,0.05", "--qmax", "30"},
      {"overlap", "--qmax", "20", "--psi", "power:0.3,1", "--summary", path("s.json")},
      {"density", "--u", "0.5,0.25", "--qmax", "40", "--summary", path("s.json")},
      {"divisor-series", "--grid", "100,1000", "--y", "2", "--z", "1"},
      {"chain", "--jmin", "10", "--jmax", "10000", "--c", "1", "--rho", "2.5"},
      {"reduce49", "--beta", "golden", "--c", "0.5", "--qmax", "30"},
      {"critical", "--samples", "2", "--qmax", "100", "--form", "411"},
      {"scan-f", "--samples", "2", "--jmax", "1000", "--c", "1,2", "--summary", path("s.json")},
  };
  for (auto args : runs) {
    const std::string name = args[0];
    args.insert(args.end(), {"--out", path("o.txt")});
    const Result r = invoke(args);
    EXPECT_EQ(r.code, 0) << name << ": " << r.err;
    const std::string text = slurp(path("o.txt"));
    EXPECT_TRUE(text.rfind("# sdlab " + name, 0) == 0 || text.rfind("// sdlab " + name, 0) == 0) << name;
  }
  const auto summary = nlohmann::json::parse(slurp(path("s.json")), nullptr, true, true);
  EXPECT_EQ(summary["command"], "scan-f");
  EXPECT_EQ(summary["stats"].size(), 2u);
}

TEST_F(CliTest, Reduce49Golden) {
  const std::string out = path("r.json");
  ASSERT_EQ(invoke({"reduce49", "--beta", "golden", "--c", "0.5", "--qmax", "30", "--out", out}).code, 0);
  const auto j = nlohmann::json::parse(slurp(out), nullptr, true, true);
  EXPECT_EQ(j["direct"], nlohmann::json::parse("[1, 3, 11]"));
  EXPECT_EQ(j["reduced_exact"], nlohmann::json::parse("[1, 5, 21]"));
  EXPECT_TRUE(j["bijection_ok"].get<bool>());
}
