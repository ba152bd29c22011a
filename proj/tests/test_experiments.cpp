#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "vexlab/experiments.hpp"

using namespace vexlab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("vexlab_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

json verdict_cfg(double q) {
  json j = json::parse(R"({
    "scenario": "verdict", "seed": 3,
    "domain": {"kind": "ball_analytic", "center": [0, 0, 0], "radius": 1, "N": 3},
    "p": {"kind": "constant", "value": 2}
  })");
  j["q"] = {{"kind", "constant"}, {"value", q}};
  return j;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int config_exit(const json& j) {
  try {
    parse_config(j, ".");
  } catch (const Error& e) {
    return exit_code_for(e.code());
  }
  return kExitOk;
}

}  // namespace

TEST(Config, ParsesAndDefaults) {
  const auto c = parse_config(verdict_cfg(7), "/tmp");
  EXPECT_EQ(c.scenario, Scenario::Verdict);
  EXPECT_EQ(c.seed, 3u);
  for (const char* s : {"spaces-check", "solve", "cascade", "pohozaev", "verdict", "sweep"})
    EXPECT_STREQ(to_string(parse_scenario(s)), s);
}

TEST(Config, ErrorsMapToExitTwo) {
  EXPECT_EQ(config_exit(json::array()), kExitConfig);
  auto j = verdict_cfg(7);
  j["scenario"] = "nonsense";
  EXPECT_EQ(config_exit(j), kExitConfig);
  j = verdict_cfg(7);
  j.erase("p");
  EXPECT_EQ(config_exit(j), kExitConfig);
  j = verdict_cfg(7);
  j["domain"]["kind"] = "torus";
  EXPECT_EQ(config_exit(j), kExitConfig);
  j = verdict_cfg(7);
  j["p"] = {{"kind", "tabulated"}, {"file", "/nonexistent/p.txt"}};
  EXPECT_EQ(config_exit(j), kExitConfig);
  j = verdict_cfg(7);
  j["scenario"] = "sweep";
  EXPECT_EQ(config_exit(j), kExitConfig);  // missing sweep block
  j["sweep"] = {{"scenario", "verdict"}, {"axes", {{"/q/value", json::array()}}}};
  EXPECT_EQ(config_exit(j), kExitConfig);  // empty axis
}

TEST(Config, TypeIsAnAliasForKind) {
  auto j = verdict_cfg(7);
  j["q"] = {{"type", "constant"}, {"value", 7}};
  EXPECT_NO_THROW(parse_config(j, "."));
}

TEST(ExitCodes, Mapping) {
  EXPECT_EQ(exit_code_for(ErrorCode::ConfigError), kExitConfig);
  EXPECT_EQ(exit_code_for(ErrorCode::InvalidDomain), kExitConfig);
  EXPECT_EQ(exit_code_for(ErrorCode::CollapseToZero), kExitNonConvergence);
}

TEST(Seeds, DeriveSeedIsDeterministicAndSpread) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    EXPECT_EQ(derive_seed(42, i), derive_seed(42, i));
    seen.insert(derive_seed(42, i));
  }
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
}

TEST(Run, VerdictReport) {
  auto c = parse_config(verdict_cfg(7), ".");
  c.out_dir = scratch("verdict");
  ASSERT_EQ(run(c), kExitOk);
  const json rep = json::parse(slurp(c.out_dir / "report.json"));
  EXPECT_EQ(rep.at("schema"), kReportSchema);
  EXPECT_TRUE(rep.at("results").at("applies").get<bool>());
  EXPECT_EQ(rep.at("results").at("case"), "i");
  EXPECT_TRUE(rep.at("metadata").contains("started_utc"));
}

TEST(Run, SpacesCheckPasses) {
  const json j = json::parse(R"({
    "scenario": "spaces-check", "seed": 7,
    "domain": {"kind": "polygon", "vertices": [[0, 0], [1, 0], [1, 1], [0, 1]]},
    "mesh": {"h": 0.1},
    "p": {"kind": "affine", "a": 2, "b": [1, 0]},
    "q": {"kind": "constant", "value": 4},
    "field": {"kind": "sine", "amplitude": 2.0}
  })");
  auto c = parse_config(j, ".");
  c.out_dir = scratch("spaces");
  ASSERT_EQ(run(c), kExitOk);
  const json rep = json::parse(slurp(c.out_dir / "report.json"));
  EXPECT_TRUE(rep.at("results").at("pass").get<bool>());
}

TEST(Run, SweepWritesOneRowPerPoint) {
  auto j = verdict_cfg(4);
  j["scenario"] = "sweep";
  j["sweep"] = {{"scenario", "verdict"}, {"axes", {{"/q/value", {4, 5, 6, 7}}}}, {"workers", 3}};
  auto c = parse_config(j, ".");
  c.out_dir = scratch("sweep");
  ASSERT_EQ(run(c), kExitOk);
  std::istringstream csv(slurp(c.out_dir / "sweep.csv"));
  std::string header, line;
  std::getline(csv, header);
  EXPECT_NE(header.find("/q/value"), std::string::npos);
  std::vector<std::string> rows;
  while (std::getline(csv, line))
    if (!line.empty()) rows.push_back(line);
  ASSERT_EQ(rows.size(), 4u);
  const json rep = json::parse(slurp(c.out_dir / "report.json"));
  const std::vector<std::string> expected{"none", "none", "ii", "i"};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(rep.at("runs")[i].at("results").at("case"), expected[i]);
}

TEST(Run, DeterministicApartFromMetadata) {
  auto j = verdict_cfg(4);
  j["scenario"] = "sweep";
  j["sweep"] = {{"scenario", "verdict"}, {"axes", {{"/q/value", {5, 7}}}}, {"workers", 2}};
  const auto c = parse_config(j, ".");
  auto a = execute(c), b = execute(c);
  EXPECT_EQ(a.files.at("sweep.csv"), b.files.at("sweep.csv"));
  a.report.erase("metadata");
  b.report.erase("metadata");
  EXPECT_EQ(a.report.dump(), b.report.dump());
}

TEST(Run, SolveNonConvergenceExitsThree) {
  const json j = json::parse(R"({
    "scenario": "solve", "seed": 1,
    "domain": {"kind": "interval", "a": 0, "b": 1},
    "mesh": {"h": 0.01},
    "p": {"kind": "constant", "value": 3},
    "q": {"kind": "constant", "value": 2},
    "source": {"kind": "sine", "amplitude": 50},
    "solver": {"max_iters": 1, "method": "gradient", "epsilon": 0.01}
  })");
  auto c = parse_config(j, ".");
  c.out_dir = scratch("solve3");
  EXPECT_EQ(run(c), kExitNonConvergence);
  const json rep = json::parse(slurp(c.out_dir / "report.json"));
  EXPECT_FALSE(rep.at("converged").get<bool>());
}

#ifdef VEXLAB_CLI_PATH
TEST(Cli, EndToEnd) {
  const fs::path dir = scratch("cli");
  const fs::path cfg = dir / "cfg.json";
  std::ofstream(cfg) << verdict_cfg(7).dump();
  const std::string cli = VEXLAB_CLI_PATH;
  const auto call = [&](const std::string& args) {
    const int s = std::system((cli + " " + args + " > /dev/null 2>&1").c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
  };
  EXPECT_EQ(call("verdict --config " + cfg.string() + " --out " + (dir / "out").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "out" / "report.json"));
  EXPECT_EQ(call("verdict --config " + (dir / "missing.json").string()), 2);
  EXPECT_EQ(call("bogus --config " + cfg.string()), 2);
  std::ofstream(dir / "bad.json") << "{not json";
  EXPECT_EQ(call("verdict --config " + (dir / "bad.json").string()), 2);
}
#endif
