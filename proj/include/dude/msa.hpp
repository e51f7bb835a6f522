#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "channel.hpp"
#include "matrix.hpp"

namespace dude {

enum class AllocationFormula { original, modified };

inline std::string to_string(AllocationFormula f) { return f == AllocationFormula::original ? "original" : "modified"; }

inline AllocationFormula parse_formula(const std::string& s) {
  if (s == "original") return AllocationFormula::original;
  if (s == "modified") return AllocationFormula::modified;
  throw std::invalid_argument("unknown allocation formula: " + s);
}

struct MsaParams {
  double alpha = 0.5;
  double epsilon_u = 2.0;
  double gamma = 0.004;
  std::size_t iterations = 8000;
  AllocationFormula formula = AllocationFormula::modified;
  double hysteresis = 0.0;

  void validate() const {
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
    if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
    if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
    if (epsilon_u < 0.0 || hysteresis < 0.0) throw std::invalid_argument("negative epsilon_u or hysteresis");
  }
};

struct PriceState {
  std::vector<double> nu_dl;   // per-BS DL price
  std::vector<double> nu_ul;   // per-BS UL price
  std::vector<double> lam;     // per-user, grows while R exceeds R' by more than epsilon
  std::vector<double> lam_p;   // per-user, grows while R' exceeds R by more than epsilon
  std::size_t t = 0;

  static PriceState uniform(std::size_t users, std::size_t stations, double v = 0.01) {
    PriceState s;
    s.nu_dl.assign(stations, v);
    s.nu_ul.assign(stations, v);
    s.lam.assign(users, v);
    s.lam_p.assign(users, v);
    return s;
  }
};

struct MsaTrace {
  std::vector<std::vector<double>> nu_dl, nu_ul, lam, lam_p;  // one entry per iteration, after its update
};

struct MsaSolution {
  AllocationMatrix y_dl, y_ul;
  std::vector<std::size_t> chosen_dl, chosen_ul;
  PriceState final_state;
  MsaTrace trace;
  std::vector<double> mean_budget_dl, mean_budget_ul;  // per-BS allocation sums averaged over the last 100 rounds
};

inline constexpr std::size_t kNoStation = std::numeric_limits<std::size_t>::max();

// coupling = lam_p - lam for DL, lam - lam_p for UL
inline double choice_metric(double nu, double r, double coupling) { return (nu - r * coupling) / r; }

inline std::size_t choose_bs(const RateMatrix& rates, std::size_t u, const std::vector<double>& nu, double coupling,
                             std::size_t incumbent, double hysteresis) {
  std::size_t best = kNoStation;
  double bm = 0.0;
  for (std::size_t b = 0; b < rates.cols(); ++b) {
    const double r = rates(u, b);
    if (r <= 0.0) continue;
    const double m = choice_metric(nu[b], r, coupling);
    if (best == kNoStation || m < bm) {
      best = b;
      bm = m;
    }
  }
  if (best == kNoStation) throw std::runtime_error("unreachable user");
  if (hysteresis > 0.0 && incumbent != kNoStation && incumbent != best && rates(u, incumbent) > 0.0) {
    const double mi = choice_metric(nu[incumbent], rates(u, incumbent), coupling);
    if (!(mi - bm > hysteresis)) return incumbent;
  }
  return best;
}

inline std::size_t choose_bs_dl(const RateMatrix& rates_dl, std::size_t u, const PriceState& s, const MsaParams& p,
                                std::size_t incumbent = kNoStation) {
  return choose_bs(rates_dl, u, s.nu_dl, s.lam_p[u] - s.lam[u], incumbent, p.hysteresis);
}

inline std::size_t choose_bs_ul(const RateMatrix& rates_ul, std::size_t u, const PriceState& s, const MsaParams& p,
                                std::size_t incumbent = kNoStation) {
  return choose_bs(rates_ul, u, s.nu_ul, s.lam[u] - s.lam_p[u], incumbent, p.hysteresis);
}

// Maximizer over [0,1] of U(r*y) - d*y; d <= 0 leaves the objective increasing, so the upper bound is taken.
inline double user_allocation(double r, double nu, double coupling, const MsaParams& p) {
  const double d = p.formula == AllocationFormula::modified ? nu : nu - r * coupling;
  if (!std::isfinite(d)) throw std::runtime_error("price collapse");
  if (d <= 0.0) return 1.0;
  const double y = std::abs(p.alpha - 1.0) < 1e-9 ? 1.0 / d : std::pow(std::pow(r, 1.0 - p.alpha) / d, 1.0 / p.alpha);
  return std::clamp(y, 0.0, 1.0);
}

inline double user_allocation_dl(std::size_t u, std::size_t b, double r, const PriceState& s, const MsaParams& p) {
  return user_allocation(r, s.nu_dl[b], s.lam_p[u] - s.lam[u], p);
}

inline double user_allocation_ul(std::size_t u, std::size_t b, double r, const PriceState& s, const MsaParams& p) {
  return user_allocation(r, s.nu_ul[b], s.lam[u] - s.lam_p[u], p);
}

inline void update_bs_prices(PriceState& s, const AllocationMatrix& y_dl, const AllocationMatrix& y_ul, double gamma) {
  for (std::size_t b = 0; b < s.nu_dl.size(); ++b) {
    s.nu_dl[b] = std::max(0.0, s.nu_dl[b] - gamma * (1.0 - y_dl.col_sum(b)));
    s.nu_ul[b] = std::max(0.0, s.nu_ul[b] - gamma * (1.0 - y_ul.col_sum(b)));
  }
}

inline void update_user_prices(PriceState& s, const std::vector<double>& R, const std::vector<double>& Rp,
                               double epsilon_u, double gamma) {
  for (std::size_t u = 0; u < s.lam.size(); ++u) {
    const double l = s.lam[u], lp = s.lam_p[u];
    s.lam[u] = std::max(0.0, l - gamma * (Rp[u] - R[u] + epsilon_u));
    s.lam_p[u] = std::max(0.0, lp - gamma * (R[u] - Rp[u] + epsilon_u));
  }
}

inline MsaSolution run_msa(const RateMatrix& rates_dl, const RateMatrix& rates_ul, const MsaParams& p,
                           PriceState state) {
  p.validate();
  require_conformable(rates_dl, rates_ul);
  const std::size_t U = rates_dl.rows(), B = rates_dl.cols();
  if (state.nu_dl.size() != B || state.nu_ul.size() != B || state.lam.size() != U || state.lam_p.size() != U)
    throw std::invalid_argument("price state does not match rate matrices");
  for (std::size_t u = 0; u < U; ++u)
    for (std::size_t b = 0; b < B; ++b)
      if (rates_dl(u, b) < 0.0 || rates_ul(u, b) < 0.0) throw std::invalid_argument("negative rate");

  MsaSolution sol;
  sol.chosen_dl.assign(U, kNoStation);
  sol.chosen_ul.assign(U, kNoStation);
  sol.mean_budget_dl.assign(B, 0.0);
  sol.mean_budget_ul.assign(B, 0.0);
  const std::size_t tail = std::min<std::size_t>(100, p.iterations);
  std::vector<double> R(U), Rp(U);
  for (auto* v : {&sol.trace.nu_dl, &sol.trace.nu_ul, &sol.trace.lam, &sol.trace.lam_p}) v->reserve(p.iterations);

  for (std::size_t it = 0; it < p.iterations; ++it) {
    AllocationMatrix y_dl(U, B), y_ul(U, B);
    for (std::size_t u = 0; u < U; ++u) {
      const std::size_t bd = choose_bs_dl(rates_dl, u, state, p, sol.chosen_dl[u]);
      const std::size_t bu = choose_bs_ul(rates_ul, u, state, p, sol.chosen_ul[u]);
      sol.chosen_dl[u] = bd;
      sol.chosen_ul[u] = bu;
      y_dl(u, bd) = user_allocation_dl(u, bd, rates_dl(u, bd), state, p);
      y_ul(u, bu) = user_allocation_ul(u, bu, rates_ul(u, bu), state, p);
      R[u] = rates_dl(u, bd) * y_dl(u, bd);
      Rp[u] = rates_ul(u, bu) * y_ul(u, bu);
    }
    update_bs_prices(state, y_dl, y_ul, p.gamma);
    update_user_prices(state, R, Rp, p.epsilon_u, p.gamma);
    state.t = it + 1;

    sol.trace.nu_dl.push_back(state.nu_dl);
    sol.trace.nu_ul.push_back(state.nu_ul);
    sol.trace.lam.push_back(state.lam);
    sol.trace.lam_p.push_back(state.lam_p);
    if (it + tail >= p.iterations) {
      for (std::size_t b = 0; b < B; ++b) {
        sol.mean_budget_dl[b] += y_dl.col_sum(b) / static_cast<double>(tail);
        sol.mean_budget_ul[b] += y_ul.col_sum(b) / static_cast<double>(tail);
      }
    }
    if (it + 1 == p.iterations) {
      sol.y_dl = std::move(y_dl);
      sol.y_ul = std::move(y_ul);
    }
  }
  sol.final_state = std::move(state);
  return sol;
}

// Flags stations whose price range over the trailing window (never reaching into the first half) exceeds tol.
inline std::set<std::size_t> detect_oscillation(const std::vector<std::vector<double>>& trace, std::size_t window,
                                                double tol) {
  if (window == 0 || trace.size() < window) throw std::invalid_argument("trace shorter than window");
  const std::size_t n = trace.size();
  const std::size_t start = std::max(n / 2, n - window);
  std::set<std::size_t> out;
  const std::size_t B = trace.front().size();
  for (std::size_t b = 0; b < B; ++b) {
    double lo = trace[start][b], hi = lo;
    for (std::size_t t = start; t < n; ++t) {
      lo = std::min(lo, trace[t][b]);
      hi = std::max(hi, trace[t][b]);
    }
    if (hi - lo > tol) out.insert(b);
  }
  return out;
}

// Sum of DL and UL utilities; -inf when a user has zero rate on a link.
inline double msa_objective(const RateMatrix& rd, const RateMatrix& ru, const AllocationMatrix& yd,
                            const AllocationMatrix& yu, double alpha) {
  double obj = 0.0;
  for (std::size_t u = 0; u < rd.rows(); ++u) {
    double R = 0.0, Rp = 0.0;
    for (std::size_t b = 0; b < rd.cols(); ++b) {
      R += rd(u, b) * yd(u, b);
      Rp += ru(u, b) * yu(u, b);
    }
    if (R <= 0.0 || Rp <= 0.0) return -std::numeric_limits<double>::infinity();
    obj += utility(R, alpha) + utility(Rp, alpha);
  }
  return obj;
}

}  // namespace dude
