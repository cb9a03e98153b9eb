#include <gtest/gtest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "phasebin/analytic_states.hpp"
#include "phasebin/number_distribution.hpp"

namespace fs = std::filesystem;
using namespace phasebin;

namespace {

const fs::path kWork = fs::temp_directory_path() / "phasebin_cli_test";

int run(const std::string& args) {
  const std::string cmd = std::string(PHASEBIN_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

NumberDistribution read_dist(const fs::path& p) {
  std::ifstream f(p);
  return read_distribution_csv(f);
}

/// Every output file except the manifest, by name.
std::map<std::string, std::string> outputs(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().filename() != "manifest.json") out[e.path().filename().string()] = slurp(e.path());
  }
  return out;
}

}  // namespace

TEST(Cli, ThermalAllMethods) {
  const fs::path dir = kWork / "thermal";
  fs::remove_all(dir);
  ASSERT_EQ(run("--out " + dir.string() + " --ntraj 200000 pn --state thermal --nbar 10"), 0);
  for (const char* m : {"binned", "quadrature", "wigner-average", "analytic"}) {
    EXPECT_TRUE(fs::exists(dir / (std::string("pn_") + m + ".csv"))) << m;
  }
  const auto summary = nlohmann::json::parse(slurp(dir / "db_summary.json"));
  bool found = false;
  for (const auto& row : summary) {
    if (row["q"] == "binned-closed-form") {
      EXPECT_NEAR(row["distance"].get<double>(), db_thermal(10.0), 1e-15);
      found = true;
    }
    if (row["q"] == "binned-exact") EXPECT_NEAR(row["distance"].get<double>(), db_thermal(10.0), 1e-10);
  }
  EXPECT_TRUE(found);
  const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  EXPECT_EQ(manifest["status"], "ok");
  EXPECT_EQ(manifest["seed"], 1);
  EXPECT_EQ(manifest["version"], PHASEBIN_VERSION);
}

TEST(Cli, VacuumBinnedVersusExact) {
  const fs::path dir = kWork / "vacuum";
  fs::remove_all(dir);
  ASSERT_EQ(run("--out " + dir.string() + " --ntraj 1000000 pn --state vacuum --methods binned analytic"), 0);
  const auto b = read_dist(dir / "pn_binned.csv");
  const auto a = read_dist(dir / "pn_analytic.csv");
  EXPECT_NEAR(b.at(0), 0.8647, 5 * b.error_at(0) + 1e-4);
  EXPECT_EQ(a.at(0), 1.0);
}

TEST(Cli, UnknownMethodIsUsageError) {
  const fs::path dir = kWork / "bad";
  fs::remove_all(dir);
  EXPECT_EQ(run("--out " + dir.string() + " pn --state thermal --methods telepathy"), 2);
  const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  EXPECT_NE(manifest["status"].get<std::string>().find("usage"), std::string::npos);
  EXPECT_NE(run("pn --state nonsense"), 0);
}

TEST(Cli, OutputsIndependentOfThreadsAndReproducibleFromManifest) {
  const fs::path a = kWork / "det_a";
  const fs::path b = kWork / "det_b";
  const fs::path c = kWork / "det_c";
  for (const auto& d : {a, b, c}) fs::remove_all(d);
  const std::string common = " --ntraj 300000 --seed 5 pn --state squeezed --beta2 9 --s 0.5 --theta 1 --n-max 40";
  ASSERT_EQ(run("--threads 1 --out " + a.string() + common), 0);
  ASSERT_EQ(run("--threads 4 --out " + b.string() + common), 0);
  EXPECT_EQ(outputs(a), outputs(b));
  // Re-run the recorded argv into a fresh directory.
  const auto manifest = nlohmann::json::parse(slurp(a / "manifest.json"));
  std::string args;
  const auto argv = manifest["argv"].get<std::vector<std::string>>();
  for (std::size_t i = 1; i < argv.size(); ++i) args += " " + (argv[i] == a.string() ? c.string() : argv[i]);
  ASSERT_EQ(run(args), 0);
  EXPECT_EQ(outputs(a), outputs(c));
}

TEST(Cli, DiagnoseAndScaling) {
  const fs::path dir = kWork / "diag";
  fs::remove_all(dir);
  ASSERT_EQ(run("--out " + dir.string() + " diagnose --state thermal --nbar 10 --n 5 --r-max 8 --points 2000"), 0);
  const std::string s = slurp(dir / "smoothness.csv");
  EXPECT_NE(s.find("5,fail,4.7"), std::string::npos) << s;
  const fs::path sc = kWork / "scaling";
  fs::remove_all(sc);
  ASSERT_EQ(run("--out " + sc.string() + " scaling --sweep thermal-nbar"), 0);
  const auto fit = nlohmann::json::parse(slurp(sc / "scaling_fit.json"));
  EXPECT_NEAR(fit["exponent"].get<double>(), -4.0, 0.1);
}

TEST(Cli, SampleThenDiagnoseFromFile) {
  const fs::path dir = kWork / "sample";
  fs::remove_all(dir);
  ASSERT_EQ(run("--out " + dir.string() + " --ntraj 100000 sample --state coherent --beta2 16"), 0);
  ASSERT_TRUE(fs::exists(dir / "ensemble.csv"));
  const fs::path d2 = kWork / "sample_diag";
  fs::remove_all(d2);
  ASSERT_EQ(run("--out " + d2.string() + " diagnose --ensemble " + (dir / "ensemble.csv").string() + " --n 16"), 0);
  EXPECT_TRUE(fs::exists(d2 / "profile.csv"));
}

TEST(Cli, BoseHubbardRun) {
  const fs::path dir = kWork / "bh";
  fs::remove_all(dir);
  fs::create_directories(dir);
  {
    std::ofstream cfg(dir / "config.json");
    cfg << R"({"U": 0.25, "n1_initial": 20, "t_final": 0.2, "dt": 1e-4, "n_traj": 5000, "output_times": [0.1]})";
  }
  ASSERT_EQ(run("--out " + (dir / "out").string() + " bose-hubbard --config " + (dir / "config.json").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "out" / "populations.csv"));
  EXPECT_TRUE(fs::exists(dir / "out" / "pn_t0_mode2_exact.csv"));
  EXPECT_TRUE(fs::exists(dir / "out" / "wigner2d_t1_mode1.csv"));
  const auto report = nlohmann::json::parse(slurp(dir / "out" / "report.json"));
  EXPECT_EQ(report["comparisons"].size(), 4u);
}
