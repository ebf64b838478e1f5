#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tpump/errors.hpp"
#include "tpump/harness.hpp"

using namespace tpump;
namespace fs = std::filesystem;

namespace {

Config small_config() {
  Config c;
  c.set("n_sites", "6");
  c.set("omega", "0.3");
  c.set("n_periods", "1");
  c.set("samples_per_period", "20");
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("tpump_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(TPUMP_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Config, ParsesAndRejects) {
  const Config c = Config::parse("schema_version = 1\n# comment\nn_sites = 12  # trailing\nmodel=kink\n");
  EXPECT_EQ(c.integer("n_sites"), 12);
  EXPECT_EQ(c.get("model"), "kink");
  EXPECT_EQ(c.number("g0"), 10.0);
  EXPECT_THROW(Config::parse("n_sites = 9\n"), ConfigError);
  EXPECT_THROW(Config::parse("schema_version = 2\n"), ConfigError);
  EXPECT_THROW(Config::parse("schema_version = 1\nbogus = 3\n"), ConfigError);
  EXPECT_THROW(Config::parse("schema_version = 1\nn_sites\n"), ConfigError);
  Config d;
  d.set("J", "abc");
  EXPECT_THROW(d.number("J"), ConfigError);
  d.set("entropy", "maybe");
  EXPECT_THROW(d.flag("entropy"), ConfigError);
  d.set("deltas", "0, 0.5,1");
  EXPECT_EQ(d.numbers("deltas"), (std::vector<double>{0.0, 0.5, 1.0}));
}

TEST(Config, HashTracksContent) {
  Config a, b;
  EXPECT_EQ(a.hash(), b.hash());
  EXPECT_EQ(a.hash().size(), 16u);
  b.set("omega", "0.03");
  EXPECT_NE(a.hash(), b.hash());
  EXPECT_EQ(Config::parse(a.canonical()).hash(), a.hash());
}

TEST(Config, WorkerCountFromEnvironment) {
  setenv("TPUMP_WORKERS", "3", 1);
  EXPECT_EQ(worker_count(), 3);
  setenv("TPUMP_WORKERS", "zero", 1);
  EXPECT_THROW(worker_count(), ConfigError);
  setenv("TPUMP_WORKERS", "0", 1);
  EXPECT_THROW(worker_count(), ConfigError);
  unsetenv("TPUMP_WORKERS");
  EXPECT_GE(worker_count(), 1);
}

TEST(Seeds, SplitStreamsAreDistinctAndStable) {
  EXPECT_EQ(split_seed(7, 3), split_seed(7, 3));
  EXPECT_NE(split_seed(7, 3), split_seed(7, 4));
  EXPECT_NE(split_seed(7, 3), split_seed(8, 3));
}

TEST(Pump, TrajectoryCsvIsReproducible) {
  const Config cfg = small_config();
  const PumpConfig pc = pump_config(cfg);
  const fs::path d = scratch("csv");
  write_trajectory_csv(d / "a.csv", pump_run(pc));
  write_trajectory_csv(d / "b.csv", pump_run(pc));
  const std::string a = slurp(d / "a.csv");
  EXPECT_EQ(a, slurp(d / "b.csv"));
  std::istringstream in(a);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "# config_hash=" + cfg.hash());
  std::getline(in, line);
  EXPECT_EQ(line, "t,j,X_j,Y_j,x,S_partition1,S_partition2,norm");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 21u * 6u);
}

TEST(Pump, RecordInvariants) {
  const ResultRecord rec = pump_run(pump_config(small_config()));
  EXPECT_GT(rec.overlap2, 0.8);
  ASSERT_EQ(rec.samples.size(), 21u);
  ASSERT_EQ(rec.displacement.size(), 1u);
  EXPECT_LT(rec.max_norm_drift, 1e-8);
  for (const auto& s : rec.samples) {
    EXPECT_EQ(s.X.size(), 6u);
    EXPECT_GE(s.s1, -1e-12);
    EXPECT_LE(s.s1, 1.0 + 1e-12);
    EXPECT_GE(s.s2, -1e-12);
    EXPECT_LE(s.s2, 1.0 + 1e-12);
  }
  EXPECT_GE(rec.fidelity, 0.0);
  EXPECT_LE(rec.fidelity, 1.0 + 1e-12);
  const auto j = manifest_json(small_config(), pump_config(small_config()), rec);
  EXPECT_EQ(j["config_hash"], small_config().hash());
}

TEST(Pump, AdiabaticTransportAtSlowDrive) {
  Config c = small_config();
  c.set("omega", "0.05");
  c.set("entropy", "false");
  const ResultRecord rec = pump_run(pump_config(c));
  ASSERT_EQ(rec.displacement.size(), 1u);
  EXPECT_NEAR(rec.displacement[0], -3.0, 0.05);
  EXPECT_GT(rec.fidelity, 0.95);
}

TEST(Sweep, DisorderDeterministicAcrossWorkerCounts) {
  Config c = small_config();
  const PumpConfig pc = pump_config(c);
  setenv("TPUMP_WORKERS", "1", 1);
  const SweepResult one = run_disorder_sweep(pc, {0.0, 0.8}, DisorderTarget::G, 0.0, 3, 1);
  setenv("TPUMP_WORKERS", "2", 1);
  const SweepResult two = run_disorder_sweep(pc, {0.0, 0.8}, DisorderTarget::G, 0.0, 3, 1);
  unsetenv("TPUMP_WORKERS");
  ASSERT_EQ(one.points.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(one.points[i].count, 3u);
    EXPECT_EQ(one.points[i].failures, 0u);
    for (std::size_t r = 0; r < 3; ++r) {
      EXPECT_EQ(one.points[i].runs[r].seed, two.points[i].runs[r].seed);
      EXPECT_EQ(one.points[i].runs[r].fidelity, two.points[i].runs[r].fidelity);
    }
    EXPECT_LE(one.points[i].min, one.points[i].mean + 1e-12);
    EXPECT_GE(one.points[i].max, one.points[i].mean - 1e-12);
  }
  // delta = 0 shares one run
  EXPECT_LT(one.points[0].stddev, 1e-12);
  EXPECT_EQ(one.points[0].runs[0].fidelity, one.points[0].runs[2].fidelity);
  EXPECT_NE(one.points[1].runs[0].fidelity, one.points[1].runs[1].fidelity);
}

TEST(Sweep, DefaultFrequencies) {
  const auto w = default_omegas();
  ASSERT_EQ(w.size(), 25u);
  EXPECT_NEAR(w.front(), 0.01, 1e-12);
  EXPECT_NEAR(w.back(), 0.6, 1e-12);
  for (std::size_t i = 1; i < w.size(); ++i) EXPECT_NEAR(w[i] / w[i - 1], w[1] / w[0], 1e-9);
}

TEST(Cli, ExitCodes) {
  const fs::path d = scratch("cli");
  const std::string out = " --output_dir " + d.string();
  EXPECT_EQ(run_cli("chern" + out), 0);
  const auto chern = nlohmann::json::parse(slurp(d / "chern.json"));
  EXPECT_EQ(chern["bands"][0]["chern"], -1);
  EXPECT_EQ(run_cli("chern --band 0" + out), 0);
  EXPECT_EQ(nlohmann::json::parse(slurp(d / "chern.json"))["chern"], -1);
  EXPECT_EQ(run_cli("chern --no-such-flag 1" + out), 2);
  EXPECT_EQ(run_cli("chern --grid many" + out), 2);
  EXPECT_EQ(run_cli("pump --n_sites 7" + out), 2);
  EXPECT_EQ(run_cli("chern --Jx 0 --Jy 0" + out), 3);
  EXPECT_EQ(run_cli("dualize --model cluster --n_sites 6" + out), 0);
  EXPECT_TRUE(fs::exists(d / "dualize.json"));
  // the analytic away states sit below the 0.95 overlap threshold
  EXPECT_EQ(run_cli("table1-check" + out), 1);
  EXPECT_TRUE(fs::exists(d / "table1.json"));
}

TEST(Cli, ConfigFileAndOverride) {
  const fs::path d = scratch("cfg");
  {
    std::ofstream f(d / "run.cfg");
    f << "schema_version = 1\nn_sites = 6\nomega = 0.3\nn_periods = 1\nsamples_per_period = 10\n";
  }
  EXPECT_EQ(run_cli("pump --config " + (d / "run.cfg").string() + " --entropy false --output_dir " + d.string()), 0);
  EXPECT_TRUE(fs::exists(d / "trajectory.csv"));
  const auto m = nlohmann::json::parse(slurp(d / "manifest.json"));
  EXPECT_EQ(m["config"]["entropy"], "false");
  {
    std::ofstream f(d / "bad.cfg");
    f << "n_sites = 6\n";
  }
  EXPECT_EQ(run_cli("pump --config " + (d / "bad.cfg").string()), 2);
}
