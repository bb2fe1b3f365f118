#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(QTOA_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::vector<std::vector<std::string>> csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

std::string temp_path(const std::string& name) {
  return (testing::TempDir().empty() ? std::string("/tmp/") : testing::TempDir()) + name;
}

}  // namespace

TEST(CliSolvePhase, NearDoubleRootExample) {
  const auto r = run("solve-phase --b 0.0728 --q0-over-sigma -1.5588");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j["feasible"].get<bool>());
  EXPECT_NEAR(j["a"].get<double>(), 0.1618, 2e-3);
  // sigma = 6 by default, so the discriminant carries a factor 36 relative to the
  // 768 pi b^2 sigma^2 term scale of about 460.
  EXPECT_LT(std::abs(j["discriminant"].get<double>()), 1e-3 * 768 * M_PI * 0.0728 * 0.0728 * 36);
}

TEST(CliSolvePhase, InfeasibleAndInvalid) {
  EXPECT_EQ(run("solve-phase --b 0 --q0-over-sigma -1").code, 3);
  EXPECT_EQ(run("solve-phase --q0-over-sigma -1").code, 2);
  EXPECT_EQ(run("solve-phase --b abc").code, 2);
  EXPECT_EQ(run("solve-phase --b 0.1 --method secant").code, 2);
  EXPECT_EQ(run("no-such-command").code, 2);
}

TEST(CliSolvePhase, GeneralBasis) {
  const auto r = run("solve-phase --q0-over-sigma -1 --basis odd:0:1,even:0:1,even:0:2 --order 3");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["coefficients"].size(), 3u);
  for (const auto& v : j["residuals"]) EXPECT_LT(std::abs(v.get<double>()), 1e-8);
  EXPECT_EQ(run("solve-phase --q0-over-sigma -2 --basis odd:0:1,even:0:1 --order 2").code, 3);
}

TEST(CliQfactor, HeaderQuarteringAndSinglePoint) {
  const auto r = run("qfactor --sweep-var k_sigma --min 30 --max 60 --points 2 --scale linear");
  ASSERT_EQ(r.code, 0);
  const auto rows = csv(r.out);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"k_sigma", "q_np", "q_wp"}));
  EXPECT_EQ(rows[1][2], "");
  const double q30 = std::stod(rows[1][1]), q60 = std::stod(rows[2][1]);
  EXPECT_LT(std::abs(q60 - q30 / 4) / (q30 / 4), 1e-10);

  const auto one = run("qfactor --min 50 --max 50 --points 1");
  ASSERT_EQ(one.code, 0);
  EXPECT_EQ(csv(one.out).size(), 2u);
}

TEST(CliQfactor, PhasedSweepReportsBothColumns) {
  // Thermal caption configuration: u = -0.9 sqrt(3), double-root phase.
  const auto r = run("qfactor --q0-over-sigma -1.5588457268119895 --phase double-root "
                     "--min 12.1 --max 1210 --points 5");
  ASSERT_EQ(r.code, 0);
  const auto rows = csv(r.out);
  ASSERT_EQ(rows.size(), 6u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_GT(std::stod(rows[i][1]), 0.0);
    EXPECT_NE(rows[i][2], "");
  }
}

TEST(CliQfactor, UnitSystemsAgree) {
  // SI neutron packet swept in energy over a factor 4 (K doubles) vs. the
  // dimensionless sweep over the same K range.
  const auto si = run("--units SI --sigma 1.1e-10 --q0 -1.8333333333333333e-10 qfactor "
                      "--sweep-var E0 --min 0.025 --max 0.1 --points 3 --scale log");
  ASSERT_EQ(si.code, 0);
  const auto a = csv(si.out);
  ASSERT_EQ(a.size(), 4u);
  const double k1 = std::stod(a[1][0]);
  char args[256];
  std::snprintf(args, sizeof args,
                "qfactor --q0-over-sigma -1.6666666666666667 --min %.17g --max %.17g --points 3",
                k1, 2 * k1);
  const auto nat = run(args);
  ASSERT_EQ(nat.code, 0);
  const auto b = csv(nat.out);
  for (std::size_t i = 1; i < 4; ++i)
    for (std::size_t c = 0; c < 2; ++c)
      EXPECT_LT(std::abs(std::stod(a[i][c]) - std::stod(b[i][c])) / std::stod(b[i][c]), 1e-10);
}

TEST(CliToa, BothMethodsAgreeWithoutPhase) {
  const auto r = run("toa --method both");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["tau_class"].get<double>(), 0.5, 1e-15);
  EXPECT_LE(j["discrepancy"].get<double>(), 3.0 * j["asymptotic_error_estimate"].get<double>());
}

TEST(CliToa, PhasedExactRatio) {
  const auto r = run("toa --method exact --phase double-root");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j["ratio"].is_number());
  EXPECT_TRUE(j["error_estimate"].is_number());
}

TEST(CliToa, DivergentSeries) {
  EXPECT_EQ(run("toa --method asymptotic --k-sigma 0.5").code, 4);
  EXPECT_EQ(run("toa --method exact --k-sigma 0.5 --q0-over-sigma -2").code, 0);
  EXPECT_EQ(run("toa --method fastest").code, 2);
}

TEST(CliDist, CsvSidecarAndWidthOrdering) {
  const std::string np = temp_path("np.csv"), wp = temp_path("wp.csv");
  ASSERT_EQ(run("--out " + np + " dist --fwhm").code, 0);
  ASSERT_EQ(run("--out " + wp + " --phase double-root dist --fwhm").code, 0);
  std::ifstream f(np);
  std::string header;
  std::getline(f, header);
  EXPECT_EQ(header, "tau,pi_non,pi_nod,pi_total");
  auto side = [](const std::string& p) {
    std::ifstream s(p + ".json");
    return nlohmann::json::parse(s);
  };
  const auto jn = side(np), jw = side(wp);
  EXPECT_NEAR(jn["grid_mass"].get<double>(), 1.0, 1e-3);
  EXPECT_NEAR(jw["grid_mass"].get<double>(), 1.0, 1e-3);
  EXPECT_LT(jw["fwhm"].get<double>(), jn["fwhm"].get<double>());
}

TEST(CliDist, WidthFallsWithEnergy) {
  double prev = INFINITY;
  for (const char* E0 : {"100", "200", "400"}) {
    const std::string path = temp_path(std::string("e") + E0 + ".csv");
    ASSERT_EQ(run("--out " + path + " --E0 " + E0 + " --phase double-root dist --fwhm").code, 0);
    std::ifstream s(path + ".json");
    const double w = nlohmann::json::parse(s)["fwhm"].get<double>();
    EXPECT_LT(w, prev);
    prev = w;
  }
}

TEST(CliDist, NarrowGridFails) {
  EXPECT_EQ(run("dist --grid-factor 0.2 --points 101 --fwhm --sidecar /dev/null").code, 4);
}

TEST(CliDist, Deterministic) {
  const auto a = run("--phase double-root dist --points 301 --grid-factor 5");
  const auto b = run("--phase double-root dist --points 301 --grid-factor 5");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(csv(a.out).size(), 302u);
}

TEST(CliImprint, KickMatchesDirectPhase) {
  const auto r = run("imprint-demo --gamma 0.5");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_LT(j["max_pointwise_difference"].get<double>(), 1e-12);
  EXPECT_NEAR(j["norm_out"].get<double>(), j["norm_in"].get<double>(), 1e-12);
  EXPECT_LE(j["toa_difference"].get<double>(), j["toa_tolerance"].get<double>());
}

TEST(CliConfig, FileValuesAndFlagOverride) {
  const std::string path = temp_path("run.json");
  {
    std::ofstream f(path);
    f << R"({"units": "natural", "k_sigma": 40, "q0_over_sigma": -2,
             "phase": {"kind": "none"},
             "sweep": {"variable": "k_sigma", "min": 40, "max": 40, "points": 1}})";
  }
  const auto from_file = run("--config " + path + " qfactor");
  ASSERT_EQ(from_file.code, 0);
  auto rows = csv(from_file.out);
  EXPECT_NEAR(std::stod(rows[1][0]), 40.0, 1e-12);
  const auto overridden = run("--config " + path + " qfactor --min 80 --max 80");
  rows = csv(overridden.out);
  EXPECT_NEAR(std::stod(rows[1][0]), 80.0, 1e-12);
  EXPECT_EQ(run("--config /nonexistent.json qfactor").code, 2);
}

TEST(CliJson, FormatSwitch) {
  const auto r = run("--format json qfactor --min 20 --max 40 --points 2");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["k_sigma"].size(), 2u);
  EXPECT_TRUE(j["q_wp"][0].is_null());
  EXPECT_EQ(run("--format xml qfactor").code, 2);
}
