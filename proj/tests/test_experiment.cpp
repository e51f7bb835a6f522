#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "dude/experiment.hpp"

using namespace dude;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

fs::path scratch_dir(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("dude_test_" + name);
  fs::remove_all(d);
  return d;
}

}  // namespace

TEST(ParallelReplications, SlotOrderAndErrors) {
  const auto v = parallel_replications<std::size_t>(37, [](std::size_t k) { return k * k; });
  for (std::size_t k = 0; k < v.size(); ++k) EXPECT_EQ(v[k], k * k);
  EXPECT_THROW(parallel_replications<int>(8,
                                          [](std::size_t k) {
                                            if (k == 5) throw std::runtime_error("boom");
                                            return 0;
                                          }),
               std::runtime_error);
}

TEST(LinkPowers, SinrMatchesDirectSum) {
  Deployment d;
  d.bs = {{0, 0}, {300, 0}, {0, 400}};
  d.tier = {Tier::macro, Tier::femto, Tier::femto};
  d.users = {{100, 50}};
  const ScenarioConfig c;
  const auto pw = c.powers();
  const auto ch = c.channel();
  const auto lp = link_powers(d, pw, ch, nullptr);
  std::vector<double> p(3), g(3);
  for (std::size_t b = 0; b < 3; ++b) {
    g[b] = path_gain(distance(d.users[0], d.bs[b]), ch);
    p[b] = tier_power(d.tier[b], pw) * g[b];
  }
  EXPECT_NEAR(lp.sinr_dl(0, 1, ch.noise_mw), sinr(p[1], {p[0], p[2]}, ch.noise_mw), 1e-12 * lp.sinr_dl(0, 1, ch.noise_mw));
  EXPECT_NEAR(lp.sinr_ul(0, 1, ch.noise_mw), sinr(pw.device_mw * g[1], {p[0], p[2]}, ch.noise_mw),
              1e-12 * lp.sinr_ul(0, 1, ch.noise_mw));
}

TEST(SharingCounts, ActiveUsersAndExtras) {
  const auto n = sharing_counts({0, 0, 1, 0, 1}, 2, 3);
  EXPECT_EQ(n, (std::vector<std::size_t>{2, 2, 1, 3, 2}));
}

TEST(DeployReplication, SanityOnDefaultMap) {
  auto c = mode_defaults(Mode::deploy);
  const auto m = deploy_replication(c, 0, true);
  ASSERT_GT(m.n_users, 0u);
  EXPECT_NEAR(m.case_frequencies[0] + m.case_frequencies[1] + m.case_frequencies[2] + m.case_frequencies[3], 1.0,
              1e-9);
  EXPECT_EQ(m.case_frequencies[2], 0.0);
  EXPECT_LE(m.mean_distance_ul_dude, m.mean_distance_ul_rp);
  EXPECT_EQ(m.distances_ul_dude.size(), m.n_users);
  const auto again = deploy_replication(c, 0, false);
  EXPECT_EQ(again.sinr_ul_dude_db, m.sinr_ul_dude_db);
}

TEST(CompareReplication, BudgetsAndShapes) {
  auto c = mode_defaults(Mode::compare);
  c.iterations = 500;
  const auto r = compare_replication(c, 0);
  ASSERT_EQ(r.rates_dl.rows(), 50u);
  for (std::size_t b = 0; b < r.rates_dl.cols(); ++b) {
    EXPECT_LE(r.baseline.y_dl.col_sum(b), 1.0 + 1e-12);
    EXPECT_LE(r.ssa.y_ul.col_sum(b), 1.0 + 1e-8);
  }
  EXPECT_GT(r.ssa.se_dl, 0.0);
  c.user_count = 0;
  c.lambda_users = 0.0;
  EXPECT_THROW(compare_replication(c, 0), std::runtime_error);
}

TEST(ModeDefaults, Tables) {
  EXPECT_EQ(mode_defaults(Mode::deploy).replications, 450u);
  EXPECT_DOUBLE_EQ(mode_defaults(Mode::ssa).femto_ratio, 10.0);
  EXPECT_DOUBLE_EQ(mode_defaults(Mode::ssa).lambda_users, 200.0);
  EXPECT_EQ(mode_defaults(Mode::compare).user_count, 50u);
  EXPECT_EQ(testcase_defaults(2, 0).allocation_formula, "original");
}

TEST(RunScenario, WritesOutputsAndIsDeterministic) {
  auto c = mode_defaults(Mode::compare);
  c.iterations = 300;
  c.replications = 2;
  c.grid_resolution = 40;
  const auto a = scratch_dir("a"), b = scratch_dir("b");
  c.out_dir = a.string();
  const auto sa = run_scenario(c, {Mode::compare});
  c.out_dir = b.string();
  const auto sb = run_scenario(c, {Mode::compare});
  for (const char* f : {"metrics.csv", "trace.csv", "allocations_dl.csv", "allocations_ul.csv", "coverage_dl.svg",
                        "coverage_ul.svg", "coverage_dl.csv", "summary.txt"}) {
    ASSERT_TRUE(fs::exists(a / f)) << f;
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  }
  EXPECT_EQ(sa, sb);
  EXPECT_NE(sa.find("mode compare"), std::string::npos);
  EXPECT_NE(slurp(a / "config.txt").find("out_dir=" + a.string()), std::string::npos);
}

TEST(RunScenario, TestcaseReportsOscillation) {
  auto c = testcase_defaults(1, 0);
  c.out_dir = scratch_dir("tc1").string();
  const auto s = run_scenario(c, {Mode::testcase, 1, 0});
  EXPECT_NE(s.find("oscillating dl:"), std::string::npos);
  EXPECT_TRUE(fs::exists(fs::path(c.out_dir) / "trace.csv"));
}
