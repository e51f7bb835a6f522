#pragma once

#include <filesystem>
#include <sstream>
#include <stdexcept>
#include <string>

#include "config.hpp"
#include "io.hpp"
#include "metrics.hpp"
#include "scenario.hpp"
#include "testcases.hpp"

namespace dude {

enum class Mode { deploy, ssa, msa, compare, testcase };

struct RunRequest {
  Mode mode = Mode::compare;
  int testcase = 0;
  char variant = 0;
};

inline std::string mode_name(const RunRequest& r) {
  switch (r.mode) {
    case Mode::deploy: return "deploy";
    case Mode::ssa: return "ssa";
    case Mode::msa: return "msa";
    case Mode::compare: return "compare";
    case Mode::testcase: {
      std::string s = "testcase " + std::to_string(r.testcase);
      if (r.variant) s += r.variant;
      return s;
    }
  }
  return "?";
}

// Parameter tables the modes start from before config files and flags are applied.
inline ScenarioConfig mode_defaults(Mode m) {
  ScenarioConfig c;
  switch (m) {
    case Mode::deploy:
      c.lambda_users = 5500.0;
      c.femto_ratio = 5.0;
      c.replications = 450;
      break;
    case Mode::ssa:
      c.femto_ratio = 10.0;
      c.lambda_users = 200.0;
      break;
    case Mode::msa:
    case Mode::compare:
      c.femto_ratio = 3.0;
      c.user_count = 50;
      break;
    case Mode::testcase:
      break;
  }
  return c;
}

namespace detail {

inline void write_coverage(const std::filesystem::path& dir, const ScenarioConfig& c, const Deployment& d,
                           const std::vector<std::size_t>& serving_dl, const std::vector<std::size_t>& serving_ul) {
  const auto g_dl = rasterize_coverage(dl_weighted_sites(d, c.powers(), c.channel()), d.region, c.grid_resolution);
  const auto g_ul = rasterize_coverage(ul_weighted_sites(d), d.region, c.grid_resolution);
  write_text(dir / "coverage_dl.svg", coverage_svg(g_dl, d, serving_dl));
  write_text(dir / "coverage_ul.svg", coverage_svg(g_ul, d, serving_ul));
  write_text(dir / "coverage_dl.csv", coverage_csv(g_dl));
  write_text(dir / "coverage_ul.csv", coverage_csv(g_ul));
}

inline std::vector<std::string> scheme_cells(const SchemeResult& s) {
  return {num(s.se_dl), num(s.se_ul), num(s.mean_asymmetry), num(s.load_var_dl), num(s.load_var_ul)};
}

inline std::string run_deploy(const ScenarioConfig& c, const std::filesystem::path& dir) {
  const auto study = run_deploy_study(c, true);
  CsvWriter w({"map", "n_macro", "n_femto", "n_users", "case1", "case2", "case3", "case4", "dist_dl", "dist_ul_dude",
               "dist_ul_rp", "sinr_dl_db", "sinr_ul_dude_db", "sinr_ul_rp_db", "sinr_dl_lin_db", "sinr_ul_dude_lin_db",
               "sinr_ul_rp_lin_db", "rate_dl_bps", "rate_ul_dude_bps", "rate_ul_rp_bps"});
  auto cells = [](const std::string& id, const DeployMetrics& m) {
    return std::vector<std::string>{id, std::to_string(m.n_macro), std::to_string(m.n_femto), std::to_string(m.n_users),
                                    num(m.case_frequencies[0]), num(m.case_frequencies[1]), num(m.case_frequencies[2]),
                                    num(m.case_frequencies[3]), num(m.mean_distance_dl), num(m.mean_distance_ul_dude),
                                    num(m.mean_distance_ul_rp), num(m.sinr_dl_db), num(m.sinr_ul_dude_db),
                                    num(m.sinr_ul_rp_db), num(m.sinr_dl_lin_db), num(m.sinr_ul_dude_lin_db),
                                    num(m.sinr_ul_rp_lin_db), num(m.rate_dl), num(m.rate_ul_dude), num(m.rate_ul_rp)};
  };
  for (std::size_t k = 0; k < study.maps.size(); ++k) w.row(cells(std::to_string(k), study.maps[k]));
  w.row(cells("mean", study.mean));
  w.save(dir / "metrics.csv");

  CsvWriter pdf({"association", "bin_lo", "bin_hi", "density"});
  for (const auto& [name, samples] : {std::pair{"dude_ul", &study.mean.distances_ul_dude},
                                      std::pair{"rp_ul", &study.mean.distances_ul_rp}}) {
    if (samples->empty()) continue;
    const auto h = distance_pdf(*samples, c.distance_bins);
    for (std::size_t i = 0; i < h.density.size(); ++i)
      pdf.row({name, num(h.lo + h.width * static_cast<double>(i)), num(h.lo + h.width * static_cast<double>(i + 1)),
               num(h.density[i])});
  }
  pdf.save(dir / "distance_pdf.csv");

  std::mt19937_64 rng(c.seed);
  const auto d0 = make_deployment(c.deployment(), rng);
  if (!d0.bs.empty()) {
    const auto a = to_vectors(associate_all(d0, c.powers(), c.channel(), true), d0.bs.size());
    write_coverage(dir, c, d0, a.dl, a.ul);
  }

  const auto& m = study.mean;
  std::ostringstream s;
  s << "maps " << study.maps.size() << "\n"
    << "case_frequencies " << num(m.case_frequencies[0]) << " " << num(m.case_frequencies[1]) << " "
    << num(m.case_frequencies[2]) << " " << num(m.case_frequencies[3]) << "\n"
    << "mean_distance_ul dude " << num(m.mean_distance_ul_dude) << " rp " << num(m.mean_distance_ul_rp) << "\n"
    << "mean_sinr_ul_db dude " << num(m.sinr_ul_dude_db) << " rp " << num(m.sinr_ul_rp_db) << "\n"
    << "mean_sinr_dl_db " << num(m.sinr_dl_db) << "\n";
  return s.str();
}

inline std::string run_ssa_mode(const ScenarioConfig& c, const std::filesystem::path& dir) {
  const auto reps = parallel_replications<CompareResult>(
      c.replications, [&](std::size_t k) { return compare_replication(c, k, true, false); });
  CsvWriter w({"replication", "scheme", "se_dl", "se_ul", "mean_asymmetry", "sign_approx_ok_fraction"});
  for (std::size_t k = 0; k < reps.size(); ++k) {
    const auto& r = reps[k];
    w.row({std::to_string(k), "uniform", num(r.baseline.se_dl), num(r.baseline.se_ul), num(r.baseline.mean_asymmetry), ""});
    w.row({std::to_string(k), "ssa", num(r.ssa.se_dl), num(r.ssa.se_ul), num(r.ssa.mean_asymmetry),
           num(r.sign_approx_ok_fraction)});
  }
  w.save(dir / "metrics.csv");
  const auto& r0 = reps.front();
  write_text(dir / "allocations_dl.csv", matrix_csv(r0.ssa.y_dl));
  write_text(dir / "allocations_ul.csv", matrix_csv(r0.ssa.y_ul));
  CsvWriter users({"user", "dl_bs", "ul_bs", "dl_alloc", "ul_alloc", "dl_se", "ul_se", "asymmetry"});
  for (std::size_t u = 0; u < r0.rates_dl.rows(); ++u) {
    const auto bd = r0.ssa.chosen_dl[u], bu = r0.ssa.chosen_ul[u];
    const double R = r0.rates_dl(u, bd) * r0.ssa.y_dl(u, bd), Rp = r0.rates_ul(u, bu) * r0.ssa.y_ul(u, bu);
    users.row({std::to_string(u + 1), std::to_string(bd + 1), std::to_string(bu + 1), num(r0.ssa.y_dl(u, bd)),
               num(r0.ssa.y_ul(u, bu)), num(R), num(Rp), num(std::abs(R - Rp))});
  }
  users.save(dir / "users.csv");
  write_coverage(dir, c, r0.deployment, r0.ssa.chosen_dl, r0.ssa.chosen_ul);
  std::ostringstream s;
  s << "replication 0: ssa se_dl " << num(r0.ssa.se_dl) << " se_ul " << num(r0.ssa.se_ul) << " sign_approx_ok "
    << num(r0.sign_approx_ok_fraction) << "\n";
  return s.str();
}

inline std::string run_compare_mode(const ScenarioConfig& c, const std::filesystem::path& dir, bool with_ssa) {
  const auto reps = parallel_replications<CompareResult>(
      c.replications, [&](std::size_t k) { return compare_replication(c, k, with_ssa, true); });
  CsvWriter w({"replication", "scheme", "se_dl", "se_ul", "mean_asymmetry", "load_var_dl", "load_var_ul"});
  std::vector<std::pair<std::string, const SchemeResult CompareResult::*>> schemes{{"baseline", &CompareResult::baseline}};
  if (with_ssa) schemes.emplace_back("ssa", &CompareResult::ssa);
  schemes.emplace_back("msa", &CompareResult::msa);
  for (std::size_t k = 0; k < reps.size(); ++k)
    for (const auto& [name, ptr] : schemes) {
      auto row = scheme_cells(reps[k].*ptr);
      row.insert(row.begin(), {std::to_string(k), name});
      w.row(row);
    }
  std::ostringstream s;
  for (const auto& [name, ptr] : schemes) {
    SchemeResult mean;
    const double n = static_cast<double>(reps.size());
    for (const auto& r : reps) {
      const SchemeResult& x = r.*ptr;
      mean.se_dl += x.se_dl / n;
      mean.se_ul += x.se_ul / n;
      mean.mean_asymmetry += x.mean_asymmetry / n;
      mean.load_var_dl += x.load_var_dl / n;
      mean.load_var_ul += x.load_var_ul / n;
    }
    auto row = scheme_cells(mean);
    row.insert(row.begin(), {"mean", name});
    w.row(row);
    s << name << " se_dl " << num(mean.se_dl) << " se_ul " << num(mean.se_ul) << " asymmetry "
      << num(mean.mean_asymmetry) << " load_var " << num(mean.load_var_dl) << " " << num(mean.load_var_ul) << "\n";
  }
  w.save(dir / "metrics.csv");
  const auto& r0 = reps.front();
  write_text(dir / "allocations_dl.csv", matrix_csv(r0.msa.y_dl));
  write_text(dir / "allocations_ul.csv", matrix_csv(r0.msa.y_ul));
  write_text(dir / "trace.csv", trace_csv(r0.msa_solution.trace, c.trace_stride));
  write_coverage(dir, c, r0.deployment, r0.msa.chosen_dl, r0.msa.chosen_ul);
  return s.str();
}

inline std::string run_testcase_mode(const ScenarioConfig& c, const RunRequest& req, const std::filesystem::path& dir) {
  const auto tc = load_paper_testcase(req.testcase, req.variant);
  const auto U = tc.rates_dl.rows(), B = tc.rates_dl.cols();
  const auto sol = run_msa(tc.rates_dl, tc.rates_ul, c.msa(), PriceState::uniform(U, B, c.initial_multiplier));
  write_text(dir / "allocations_dl.csv", matrix_csv(sol.y_dl));
  write_text(dir / "allocations_ul.csv", matrix_csv(sol.y_ul));
  write_text(dir / "trace.csv", trace_csv(sol.trace, c.trace_stride));

  const auto osc_dl = detect_oscillation(sol.trace.nu_dl, std::min(c.oscillation_window, sol.trace.nu_dl.size()),
                                         c.oscillation_tol);
  const auto osc_ul = detect_oscillation(sol.trace.nu_ul, std::min(c.oscillation_window, sol.trace.nu_ul.size()),
                                         c.oscillation_tol);
  auto set_str = [](const std::set<std::size_t>& s) {
    std::string o;
    for (auto b : s) o += (o.empty() ? "" : " ") + std::to_string(b + 1);
    return o.empty() ? std::string("none") : o;
  };
  CsvWriter w({"metric", "value"});
  w.row({"se_dl", num(aggregate_spectral_efficiency(tc.rates_dl, sol.y_dl))});
  w.row({"se_ul", num(aggregate_spectral_efficiency(tc.rates_ul, sol.y_ul))});
  w.row({"mean_asymmetry", num(mean_rate_asymmetry(tc.rates_dl, tc.rates_ul, sol.y_dl, sol.y_ul))});
  w.row({"load_var_dl", num(load_variance(sol.chosen_dl, B))});
  w.row({"load_var_ul", num(load_variance(sol.chosen_ul, B))});
  for (std::size_t b = 0; b < B; ++b) {
    w.row({"budget_dl_bs" + std::to_string(b + 1), num(sol.mean_budget_dl[b])});
    w.row({"budget_ul_bs" + std::to_string(b + 1), num(sol.mean_budget_ul[b])});
  }
  w.row({"oscillating_dl", set_str(osc_dl)});
  w.row({"oscillating_ul", set_str(osc_ul)});
  w.save(dir / "metrics.csv");

  std::ostringstream s;
  s << "alpha " << num(c.alpha) << " epsilon_u " << num(c.epsilon_u) << " formula " << c.allocation_formula
    << " hysteresis " << num(c.hysteresis) << "\n";
  for (std::size_t u = 0; u < U; ++u)
    s << "user " << u + 1 << ": dl bs" << sol.chosen_dl[u] + 1 << " y=" << num(sol.y_dl(u, sol.chosen_dl[u]))
      << "  ul bs" << sol.chosen_ul[u] + 1 << " y=" << num(sol.y_ul(u, sol.chosen_ul[u])) << "\n";
  s << "oscillating dl: " << set_str(osc_dl) << "  ul: " << set_str(osc_ul) << "\n";
  return s.str();
}

}  // namespace detail

// Testcase presets fold the scenario's own alpha/epsilon/formula into the config before overrides.
inline ScenarioConfig testcase_defaults(int n, char variant) {
  auto c = mode_defaults(Mode::testcase);
  const auto tc = load_paper_testcase(n, variant);
  c.alpha = tc.params.alpha;
  c.epsilon_u = tc.params.epsilon_u;
  c.gamma = tc.params.gamma;
  c.iterations = tc.params.iterations;
  c.allocation_formula = to_string(tc.params.formula);
  return c;
}

// Writes all outputs of one run into c.out_dir and returns the summary text (also saved as summary.txt).
inline std::string run_scenario(const ScenarioConfig& c, const RunRequest& req) {
  c.validate();
  const std::filesystem::path dir(c.out_dir);
  std::filesystem::create_directories(dir);
  write_text(dir / "config.txt", serialize_config(c));
  std::ostringstream s;
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(config_hash(c)));
  s << "mode " << mode_name(req) << "\nseed " << c.seed << "\nconfig_hash " << hash << "\n";
  switch (req.mode) {
    case Mode::deploy: s << detail::run_deploy(c, dir); break;
    case Mode::ssa: s << detail::run_ssa_mode(c, dir); break;
    case Mode::msa: s << detail::run_compare_mode(c, dir, false); break;
    case Mode::compare: s << detail::run_compare_mode(c, dir, true); break;
    case Mode::testcase: s << detail::run_testcase_mode(c, req, dir); break;
  }
  write_text(dir / "summary.txt", s.str());
  return s.str();
}

}  // namespace dude
