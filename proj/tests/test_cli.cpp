#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <gtest/gtest.h>

#include "dcgroup/cli.hpp"

using namespace dcg;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "dcgroup");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "dcgroup_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p);
  f << text;
}

}  // namespace

TEST(Cli, MixBoundPrintsInteger) {
  auto r = invoke({"mix-bound", "--c", "1/2", "--eps", "1/10"});
  EXPECT_EQ(r.code, cli::kOk);
  EXPECT_EQ(r.out, "12801\n");
  EXPECT_EQ(invoke({"mix-bound", "--c", "1/4", "--eps", "1/20"}).out, "1843201\n");
  EXPECT_EQ(invoke({"mix-bound", "--c", "0.5", "--eps", "1"}).out, "129\n");
  EXPECT_EQ(invoke({"mix-bound", "--c", "0.5", "--eps", "0.1"}).out, "12801\n");
}

TEST(Cli, DcEnvelopeAndValues) {
  auto r = invoke({"dc", "--group", "q8", "--n", "3"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["tool"], "dcgroup");
  EXPECT_EQ(j["command"], "dc");
  EXPECT_EQ(j["seed"], cli::kDefaultSeed);
  EXPECT_TRUE(j.contains("caps"));
  EXPECT_EQ(j["result"]["points"][0]["value"], "5/8");
}

TEST(Cli, RunsAreByteIdentical) {
  std::vector<std::string> args{"dc", "--group", "dinf", "--seq", "walk", "--n", "4..6", "--mc-trials", "2000", "--seed", "7"};
  auto a = invoke(args), b = invoke(args);
  ASSERT_EQ(a.code, cli::kOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  auto j = nlohmann::json::parse(a.out);
  EXPECT_EQ(j["result"]["montecarlo"].size(), 3u);
  args.back() = "8";
  EXPECT_NE(invoke(args).out, a.out);
}

TEST(Cli, ConfigErrorsExitOne) {
  EXPECT_EQ(invoke({"dc", "--group", "bogus"}).code, cli::kConfig);
  EXPECT_EQ(invoke({"dc", "--group", "Z", "--n", "5..2"}).code, cli::kConfig);
  EXPECT_EQ(invoke({"dc", "--group", "Z", "--seq", "spiral"}).code, cli::kConfig);
  EXPECT_EQ(invoke({"mix-bound", "--c", "0", "--eps", "1/10"}).code, cli::kConfig);
  EXPECT_EQ(invoke({"dc", "--config", scratch("missing.json").string()}).code, cli::kConfig);
  EXPECT_EQ(invoke({"frobnicate"}).code, cli::kConfig);
  auto r = invoke({"verify", "nonsense"});
  EXPECT_EQ(r.code, cli::kConfig);
  EXPECT_NE(r.err.find("unknown verify target"), std::string::npos);
}

TEST(Cli, ResourceCapExitsTwo) {
  auto r = invoke({"dc", "--group", "f2", "--n", "0..10", "--ball-cap", "1000"});
  EXPECT_EQ(r.code, cli::kResource);
  EXPECT_NE(r.err.find("last completed: 5"), std::string::npos) << r.err;
}

TEST(Cli, FailedVerificationExitsThree) {
  auto r = invoke({"verify", "cr-eq-dc", "--group", "dinf", "--n", "10", "--tol", "0.000001"});
  EXPECT_EQ(r.code, cli::kVerification);
  EXPECT_NE(r.err.find("verification failed"), std::string::npos);
  EXPECT_EQ(invoke({"verify", "cr-eq-dc", "--group", "a4", "--n", "4", "--tol", "0"}).code, cli::kOk);
}

TEST(Cli, VerifyCatalogPasses) {
  auto r = invoke({"verify", "catalog"});
  EXPECT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_TRUE(nlohmann::json::parse(r.out)["result"]["pass"].get<bool>());
}

TEST(Cli, VerifyRandomWalkUniformity) {
  auto step = scratch("z12_step.txt");
  write_file(step, "# group: z12\n# mode: exact\ne\t1/2\na\t1/4\na^-1\t1/4\n");
  auto r = invoke({"verify", "rw-uniform", "--group", "z12", "--step", step.string(), "--subgroup", "a^3", "--eps", "1/20"});
  EXPECT_EQ(r.code, cli::kOk) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j["result"]["pass"].get<bool>());
}

TEST(Cli, ConfigFileWithFlagOverride) {
  auto cfg = scratch("cfg.json");
  write_file(cfg, R"({"group": "s3", "n": "2", "seed": 99, "ball_cap": 500})");
  auto r = invoke({"dc", "--config", cfg.string()});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["seed"], 99);
  EXPECT_EQ(j["caps"]["ball_cap"], 500);
  // Radius-2 ball {e, s1, s2, s1 s2, s2 s1}: 15 of 25 ordered pairs commute.
  EXPECT_EQ(j["result"]["points"][0]["value"], "3/5");

  auto o = invoke({"dc", "--config", cfg.string(), "--group", "q8", "--seed", "5"});
  auto jo = nlohmann::json::parse(o.out);
  EXPECT_EQ(jo["seed"], 5);
  EXPECT_EQ(jo["config"]["group"], "q8");
  EXPECT_EQ(jo["caps"]["ball_cap"], 500);

  write_file(cfg, "{not json");
  EXPECT_EQ(invoke({"dc", "--config", cfg.string()}).code, cli::kConfig);
}

TEST(Cli, JsonAndCsvFiles) {
  auto json = scratch("cr.json"), csv = scratch("cr.csv");
  auto r = invoke({"cr", "--group", "dinf", "--n", "1..5", "--json", json.string(), "--csv", csv.string()});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream jf(json);
  auto j = nlohmann::json::parse(jf);
  EXPECT_EQ(j["result"]["points"].size(), 5u);
  std::ifstream cf(csv);
  std::string header;
  std::getline(cf, header);
  EXPECT_EQ(header.substr(0, 8), "n,value,");
}

TEST(Cli, MeasureRoundTrip) {
  auto r = invoke({"measure", "--group", "Z", "--seq", "walk", "--n", "2"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  std::istringstream in(r.out);
  Measure m = read_measure(in);
  EXPECT_EQ(m.size(), 5u);
  EXPECT_EQ(m.weight(m.group().identity()).exact(), Rational(1, 3));
  EXPECT_EQ(invoke({"measure", "--group", "Z", "--n", "1..3"}).code, cli::kConfig);
}

TEST(Cli, IndexCurveOnLattice) {
  auto r = invoke({"index-curve", "--group", "Z", "--subgroup", "t^2", "--n", "1..4"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["result"]["points"].size(), 4u);
  EXPECT_EQ(j["result"]["points"][0]["mass"], "1/3");
}

TEST(Cli, IndependenceCheck) {
  auto d = invoke({"verify", "independence", "--group", "dinf", "--tol", "0.02"});
  EXPECT_EQ(d.code, cli::kOk) << d.err;
  EXPECT_EQ(nlohmann::json::parse(d.out)["config"]["n"], "150..200");
  auto r = invoke({"verify", "independence", "--group", "dinf", "--n", "40..50", "--walk-n", "120..130", "--tol", "0.05"});
  EXPECT_EQ(r.code, cli::kOk) << r.err << r.out;
}

TEST(Cli, BinaryExitCodes) {
#ifdef DCGROUP_CLI_PATH
  std::string bin = DCGROUP_CLI_PATH;
  auto status = [&](const std::string& args) {
    int s = std::system((bin + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
  };
  EXPECT_EQ(status("mix-bound --c 1/2 --eps 1/10"), 0);
  EXPECT_EQ(status("dc --group bogus"), 1);
  EXPECT_EQ(status("dc --group f2 --n 0..10 --ball-cap 1000"), 2);
  EXPECT_EQ(status("verify cr-eq-dc --group dinf --n 10 --tol 0.000001"), 3);
#else
  GTEST_SKIP() << "binary path not configured";
#endif
}
