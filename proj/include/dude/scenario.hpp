#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <random>
#include <thread>
#include <vector>

#include "association.hpp"
#include "channel.hpp"
#include "config.hpp"
#include "matrix.hpp"
#include "metrics.hpp"
#include "msa.hpp"
#include "ssa.hpp"

namespace dude {

// Runs f(k) for k in [0, n) across worker threads; results land in slot k so aggregation order is fixed.
template <class R, class F>
std::vector<R> parallel_replications(std::size_t n, F f) {
  std::vector<R> out(n);
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(n, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t k = w; k < n; k += workers) out[k] = f(k);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

// Per-(user, station) received powers. The uplink keeps the downlink interference expression (every other
// station at its tier power) and swaps the useful signal for the device power.
struct LinkPowers {
  Matrix dl;     // P_tier * h * g(d)
  Matrix ul;     // P_d * h' * g(d)
  Matrix ul_if;  // P_tier * h' * g(d)
  std::vector<double> total_dl, total_ul_if;

  double sinr_dl(std::size_t u, std::size_t b, double noise) const {
    return dl(u, b) / (total_dl[u] - dl(u, b) + noise);
  }
  double sinr_ul(std::size_t u, std::size_t b, double noise) const {
    return ul(u, b) / (total_ul_if[u] - ul_if(u, b) + noise);
  }
};

inline LinkPowers link_powers(const Deployment& d, const TierPowers& pw, const ChannelParams& ch,
                              std::mt19937_64* fading) {
  const std::size_t U = d.users.size(), B = d.bs.size();
  LinkPowers lp{Matrix(U, B), Matrix(U, B), Matrix(U, B), std::vector<double>(U, 0.0), std::vector<double>(U, 0.0)};
  for (std::size_t u = 0; u < U; ++u) {
    for (std::size_t b = 0; b < B; ++b) {
      const double g = path_gain(distance(d.users[u], d.bs[b]), ch);
      const double hd = fading ? sample_fading(*fading) : 1.0;
      const double hu = fading ? sample_fading(*fading) : 1.0;
      const double p = tier_power(d.tier[b], pw);
      lp.dl(u, b) = p * hd * g;
      lp.ul(u, b) = pw.device_mw * hu * g;
      lp.ul_if(u, b) = p * hu * g;
      lp.total_dl[u] += lp.dl(u, b);
      lp.total_ul_if[u] += lp.ul_if(u, b);
    }
  }
  return lp;
}

// Spectral efficiencies log2(1 + SINR) for every (user, station) pair with fading averaged out.
inline std::pair<RateMatrix, RateMatrix> rate_matrices(const Deployment& d, const TierPowers& pw,
                                                       const ChannelParams& ch) {
  const auto lp = link_powers(d, pw, ch, nullptr);
  const std::size_t U = d.users.size(), B = d.bs.size();
  RateMatrix rd(U, B), ru(U, B);
  for (std::size_t u = 0; u < U; ++u)
    for (std::size_t b = 0; b < B; ++b) {
      rd(u, b) = spectral_efficiency(lp.sinr_dl(u, b, ch.noise_mw));
      ru(u, b) = spectral_efficiency(lp.sinr_ul(u, b, ch.noise_mw));
    }
  return {rd, ru};
}

inline AssociationVectors to_vectors(const std::vector<AssociationOutcome>& a, std::size_t n_bs) {
  AssociationVectors v;
  v.n_bs = n_bs;
  for (const auto& o : a) {
    v.dl.push_back(o.dl_bs);
    v.ul.push_back(o.ul_bs);
  }
  return v;
}

// ---- deployment study -------------------------------------------------------------------------------

struct DeployMetrics {
  std::size_t n_macro = 0, n_femto = 0, n_users = 0;
  std::array<double, 4> case_frequencies{};
  double mean_distance_dl = 0.0;       // DL serving distance (same under both rules)
  double mean_distance_ul_dude = 0.0;  // nearest station
  double mean_distance_ul_rp = 0.0;    // DL-rule station
  double sinr_dl_db = 0.0, sinr_ul_dude_db = 0.0, sinr_ul_rp_db = 0.0;  // mean of dB values
  double sinr_dl_lin_db = 0.0, sinr_ul_dude_lin_db = 0.0, sinr_ul_rp_lin_db = 0.0;  // dB of linear mean
  double rate_dl = 0.0, rate_ul_dude = 0.0, rate_ul_rp = 0.0;  // bits/s
  std::vector<double> distances_ul_dude, distances_ul_rp;
};

inline double tier_bandwidth(Tier t, const ScenarioConfig& c) {
  return t == Tier::macro ? c.bandwidth_macro_hz : c.bandwidth_femto_hz;
}

// Users sharing a station: the first `active` users of the map are the active population; a user outside
// it is counted on top of the active users already at its station.
inline std::vector<std::size_t> sharing_counts(const std::vector<std::size_t>& serving, std::size_t n_bs,
                                               std::size_t active) {
  const std::size_t na = std::min(active, serving.size());
  std::vector<std::size_t> at(n_bs, 0);
  for (std::size_t u = 0; u < na; ++u) ++at[serving[u]];
  std::vector<std::size_t> n(serving.size());
  for (std::size_t u = 0; u < serving.size(); ++u) n[u] = at[serving[u]] + (u < na ? 0 : 1);
  return n;
}

// Seed stream: map k draws its deployment then its fading from mt19937_64(seed + k).
inline DeployMetrics deploy_replication(const ScenarioConfig& c, std::size_t k, bool keep_samples) {
  std::mt19937_64 rng(c.seed + k);
  const auto dep = make_deployment(c.deployment(), rng);
  const auto pw = c.powers();
  const auto ch = c.channel();
  DeployMetrics m;
  m.n_macro = dep.n_macro();
  m.n_femto = dep.bs.size() - m.n_macro;
  m.n_users = dep.users.size();
  if (dep.users.empty()) return m;
  const auto dude = associate_all(dep, pw, ch, true);
  const auto lp = link_powers(dep, pw, ch, &rng);

  const std::size_t U = dep.users.size(), B = dep.bs.size();
  std::vector<std::size_t> s_dl(U), s_ul(U), s_rp(U);
  for (std::size_t u = 0; u < U; ++u) {
    s_dl[u] = dude[u].dl_bs;
    s_ul[u] = dude[u].ul_bs;
    s_rp[u] = dude[u].dl_bs;
  }
  const auto n_dl = sharing_counts(s_dl, B, c.active_users_dl);
  const auto n_ul = sharing_counts(s_ul, B, c.active_users_ul);
  const auto n_rp = sharing_counts(s_rp, B, c.active_users_ul);

  std::vector<double> sd(U), su(U), sr(U);
  for (std::size_t u = 0; u < U; ++u) {
    m.case_frequencies[static_cast<std::size_t>(dude[u].case_id - 1)] += 1.0 / static_cast<double>(U);
    const double dd = distance(dep.users[u], dep.bs[s_dl[u]]);
    const double du = distance(dep.users[u], dep.bs[s_ul[u]]);
    m.mean_distance_dl += dd / static_cast<double>(U);
    m.mean_distance_ul_dude += du / static_cast<double>(U);
    m.mean_distance_ul_rp += dd / static_cast<double>(U);
    if (keep_samples) {
      m.distances_ul_dude.push_back(du);
      m.distances_ul_rp.push_back(dd);
    }
    sd[u] = lp.sinr_dl(u, s_dl[u], ch.noise_mw);
    su[u] = lp.sinr_ul(u, s_ul[u], ch.noise_mw);
    sr[u] = lp.sinr_ul(u, s_rp[u], ch.noise_mw);
    m.rate_dl += shannon_rate(tier_bandwidth(dep.tier[s_dl[u]], c), n_dl[u], sd[u]) / static_cast<double>(U);
    m.rate_ul_dude += shannon_rate(tier_bandwidth(dep.tier[s_ul[u]], c), n_ul[u], su[u]) / static_cast<double>(U);
    m.rate_ul_rp += shannon_rate(tier_bandwidth(dep.tier[s_rp[u]], c), n_rp[u], sr[u]) / static_cast<double>(U);
  }
  m.sinr_dl_db = mean_db(sd);
  m.sinr_ul_dude_db = mean_db(su);
  m.sinr_ul_rp_db = mean_db(sr);
  m.sinr_dl_lin_db = db_of_mean(sd);
  m.sinr_ul_dude_lin_db = db_of_mean(su);
  m.sinr_ul_rp_lin_db = db_of_mean(sr);
  return m;
}

struct DeployStudy {
  std::vector<DeployMetrics> maps;
  DeployMetrics mean;  // user-weighted over maps; SINR dB means are means of per-map values
};

inline DeployStudy run_deploy_study(const ScenarioConfig& c, bool keep_samples = false) {
  DeployStudy s;
  s.maps = parallel_replications<DeployMetrics>(c.replications,
                                                [&](std::size_t k) { return deploy_replication(c, k, keep_samples); });
  double users = 0.0;
  std::size_t nonempty = 0;
  for (const auto& m : s.maps) users += static_cast<double>(m.n_users);
  auto& a = s.mean;
  for (const auto& m : s.maps) {
    a.n_macro += m.n_macro;
    a.n_femto += m.n_femto;
    a.n_users += m.n_users;
    if (m.n_users == 0) continue;
    ++nonempty;
    const double w = static_cast<double>(m.n_users) / users;
    for (std::size_t i = 0; i < 4; ++i) a.case_frequencies[i] += w * m.case_frequencies[i];
    a.mean_distance_dl += w * m.mean_distance_dl;
    a.mean_distance_ul_dude += w * m.mean_distance_ul_dude;
    a.mean_distance_ul_rp += w * m.mean_distance_ul_rp;
    a.rate_dl += w * m.rate_dl;
    a.rate_ul_dude += w * m.rate_ul_dude;
    a.rate_ul_rp += w * m.rate_ul_rp;
    a.sinr_dl_db += m.sinr_dl_db;
    a.sinr_ul_dude_db += m.sinr_ul_dude_db;
    a.sinr_ul_rp_db += m.sinr_ul_rp_db;
    a.sinr_dl_lin_db += m.sinr_dl_lin_db;
    a.sinr_ul_dude_lin_db += m.sinr_ul_dude_lin_db;
    a.sinr_ul_rp_lin_db += m.sinr_ul_rp_lin_db;
    if (keep_samples) {
      a.distances_ul_dude.insert(a.distances_ul_dude.end(), m.distances_ul_dude.begin(), m.distances_ul_dude.end());
      a.distances_ul_rp.insert(a.distances_ul_rp.end(), m.distances_ul_rp.begin(), m.distances_ul_rp.end());
    }
  }
  if (nonempty > 0) {
    const double n = static_cast<double>(nonempty);
    for (double* v : {&a.sinr_dl_db, &a.sinr_ul_dude_db, &a.sinr_ul_rp_db, &a.sinr_dl_lin_db, &a.sinr_ul_dude_lin_db,
                      &a.sinr_ul_rp_lin_db})
      *v /= n;
  }
  return s;
}

// ---- allocation schemes on a deployment ----------------------------------------------------------

struct SchemeResult {
  AllocationMatrix y_dl, y_ul;
  std::vector<std::size_t> chosen_dl, chosen_ul;
  double se_dl = 0.0, se_ul = 0.0, mean_asymmetry = 0.0, load_var_dl = 0.0, load_var_ul = 0.0;
};

inline SchemeResult score(const RateMatrix& rd, const RateMatrix& ru, AllocationMatrix yd, AllocationMatrix yu,
                          std::vector<std::size_t> cd, std::vector<std::size_t> cu) {
  SchemeResult s;
  s.se_dl = aggregate_spectral_efficiency(rd, yd);
  s.se_ul = aggregate_spectral_efficiency(ru, yu);
  s.mean_asymmetry = mean_rate_asymmetry(rd, ru, yd, yu);
  s.load_var_dl = load_variance(cd, rd.cols());
  s.load_var_ul = load_variance(cu, rd.cols());
  s.y_dl = std::move(yd);
  s.y_ul = std::move(yu);
  s.chosen_dl = std::move(cd);
  s.chosen_ul = std::move(cu);
  return s;
}

struct CompareResult {
  Deployment deployment;
  RateMatrix rates_dl, rates_ul;
  SchemeResult baseline, ssa, msa;
  double sign_approx_ok_fraction = 0.0;
  MsaSolution msa_solution;
};

// DUDe association with equal split (baseline), DUDe association with SSA allocation, and MSA.
inline CompareResult compare_replication(const ScenarioConfig& c, std::size_t k, bool with_ssa = true,
                                         bool with_msa = true) {
  std::mt19937_64 rng(c.seed + k);
  CompareResult r;
  r.deployment = make_deployment(c.deployment(), rng);
  if (r.deployment.bs.empty()) throw std::runtime_error("empty deployment");
  if (r.deployment.users.empty()) throw std::runtime_error("deployment has no users");
  const auto pw = c.powers();
  const auto ch = c.channel();
  std::tie(r.rates_dl, r.rates_ul) = rate_matrices(r.deployment, pw, ch);
  const auto av = to_vectors(associate_all(r.deployment, pw, ch, true), r.deployment.bs.size());

  auto [ud, uu] = uniform_allocation(av);
  r.baseline = score(r.rates_dl, r.rates_ul, ud, uu, av.dl, av.ul);
  if (with_ssa) {
    const FixedAssociationProblem prob{r.rates_dl, r.rates_ul, av};
    auto sol = allocate_fixed(prob, c.ssa());
    r.sign_approx_ok_fraction = sol.sign_approx_ok_fraction;
    r.ssa = score(r.rates_dl, r.rates_ul, sol.y_dl, sol.y_ul, av.dl, av.ul);
  }
  if (with_msa) {
    const auto init = PriceState::uniform(r.deployment.users.size(), r.deployment.bs.size(), c.initial_multiplier);
    r.msa_solution = run_msa(r.rates_dl, r.rates_ul, c.msa(), init);
    r.msa = score(r.rates_dl, r.rates_ul, r.msa_solution.y_dl, r.msa_solution.y_ul, r.msa_solution.chosen_dl,
                  r.msa_solution.chosen_ul);
  }
  return r;
}

}  // namespace dude
