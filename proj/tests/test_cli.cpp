#include <gtest/gtest.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "cli_config.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / ("leaklab_cli_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

fs::path write_file(const std::string& name, const std::string& body) {
  const fs::path p = scratch_dir() / name;
  std::ofstream(p) << body;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun cli(const std::string& args) {
  const fs::path out = scratch_dir() / "stdout.txt";
  const fs::path err = scratch_dir() / "stderr.txt";
  const std::string command = std::string(LEAKLAB_CLI_PATH) + " " + args + " > " +
                              out.string() + " 2> " + err.string();
  const int status = std::system(command.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

}  // namespace

TEST(LoadConfig, ValidFile) {
  const auto path = write_file("ok.json", R"({"experiment": "attack", "seed": 3, "n": 16})");
  const json j = leaklab_cli::load_config(path.string());
  EXPECT_EQ(j["seed"], 3);
}

TEST(LoadConfig, UnknownKeyNamed) {
  const auto path = write_file("typo.json", R"({"epsilonn": 1.0})");
  try {
    leaklab_cli::load_config(path.string());
    FAIL() << "no error";
  } catch (const leaklab_cli::ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("epsilonn"), std::string::npos);
  }
  EXPECT_THROW(leaklab_cli::load_config((scratch_dir() / "missing.json").string()),
               leaklab_cli::ConfigError);
  EXPECT_THROW(leaklab_cli::load_config(write_file("bad.json", "{oops").string()),
               leaklab_cli::ConfigError);
}

TEST(LoadConfig, FlagsOverrideFile) {
  const json merged =
      leaklab_cli::apply_overrides(json{{"seed", 3}, {"n", 16}}, json{{"seed", 9}});
  EXPECT_EQ(merged["seed"], 9);
  EXPECT_EQ(merged["n"], 16);
  EXPECT_THROW(leaklab_cli::apply_overrides(json{{"seed", 3}}, json{{"sead", 1}}),
               leaklab_cli::ConfigError);
}

TEST(Cli, BisectionSucceeds) {
  const CliRun r = cli("verify-bisection --d 6");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["verdict"], "Holds");
}

TEST(Cli, ConfigSeedOverriddenByFlag) {
  const auto path = write_file("fld.json", R"({"seed": 3, "n": 32, "trials": 5})");
  const CliRun r = cli("verify-fldspread --config " + path.string() + " --seed 9");
  ASSERT_EQ(r.code, 0) << r.err;
  const json s = json::parse(r.out);
  EXPECT_EQ(s["config"]["seed"], 9);
  EXPECT_EQ(s["config"]["n"], 32);
}

TEST(Cli, ViolationExitsTwo) {
  const CliRun r = cli("verify-regularity --n 32 --trials 5 --seed 1 --claimed 1.01");
  EXPECT_EQ(r.code, 2) << r.err;
  EXPECT_EQ(json::parse(r.out)["verdict"], "Violated");
}

TEST(Cli, UsageErrorsExitOneWithOneLine) {
  for (const std::string args : {"attack --bogus 1", "attack --trials 10",
                                 "attack --seed 1 --learner oracle",
                                 "online-game --seed 1 --d 0"}) {
    const CliRun r = cli(args);
    EXPECT_EQ(r.code, 1) << args;
    EXPECT_EQ(r.err.rfind("leaklab: error: ", 0), 0u) << r.err;
    EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1) << r.err;
    EXPECT_TRUE(r.out.empty());
  }
  const auto typo = write_file("typo2.json", R"({"epsilonn": 1.0})");
  const CliRun r = cli("attack --config " + typo.string());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("epsilonn"), std::string::npos);
}

TEST(Cli, DpCalcSubsample) {
  const CliRun r = cli("dp-calc subsample --epsilon 1 --delta 1e-5 --m 100 --n 1000");
  ASSERT_EQ(r.code, 0) << r.err;
  const json s = json::parse(r.out);
  EXPECT_NEAR(s["epsilon"].get<double>(), 0.171828182846, 1e-12);
}

TEST(Cli, OutputFileAndArtifacts) {
  const fs::path out = scratch_dir() / "game.json";
  const CliRun r = cli("online-game --d 8 --rounds 200 --seed 7 --output " + out.string());
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(json::parse(slurp(out))["experiment"], "online-game");
  EXPECT_TRUE(fs::exists(scratch_dir() / "game.transcript.csv"));

  const CliRun csv = cli("online-game --d 8 --rounds 20 --seed 7 --format csv");
  ASSERT_EQ(csv.code, 0);
  EXPECT_EQ(csv.out.rfind("round,", 0), 0u) << csv.out.substr(0, 80);
}

TEST(Cli, OutputIsJobIndependent) {
  const CliRun a = cli("attack --trials 300 --seed 5 --jobs 1");
  const CliRun b = cli("attack --trials 300 --seed 5 --jobs 3");
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, ReportFlagsViolations) {
  const fs::path ok = scratch_dir() / "ok_summary.json";
  const fs::path bad = scratch_dir() / "bad_summary.json";
  ASSERT_EQ(cli("verify-bisection --d 5 --output " + ok.string()).code, 0);
  ASSERT_EQ(cli("verify-bisection --d 5 --kind orderonly --output " + bad.string()).code, 2);
  const CliRun good = cli("report " + ok.string());
  EXPECT_EQ(good.code, 0) << good.err;
  EXPECT_NE(good.out.find("verify-bisection"), std::string::npos);
  EXPECT_EQ(cli("report " + ok.string() + " " + bad.string()).code, 2);
}
