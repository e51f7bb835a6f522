#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "channel.hpp"
#include "matrix.hpp"

namespace dude {

struct SsaParams {
  double alpha = 0.5;
  double A = 2.0;
};

// Serving station per user on each link.
struct AssociationVectors {
  std::vector<std::size_t> dl;
  std::vector<std::size_t> ul;
  std::size_t n_bs = 0;

  Matrix z_dl() const { return indicator(dl); }
  Matrix z_ul() const { return indicator(ul); }

 private:
  Matrix indicator(const std::vector<std::size_t>& v) const {
    Matrix z(v.size(), n_bs);
    for (std::size_t u = 0; u < v.size(); ++u) z(u, v[u]) = 1.0;
    return z;
  }
};

struct FixedAssociationProblem {
  RateMatrix rates_dl;
  RateMatrix rates_ul;
  AssociationVectors assoc;

  std::size_t n_users() const { return assoc.dl.size(); }
  std::size_t n_bs() const { return assoc.n_bs; }
  double r_dl(std::size_t u) const { return rates_dl(u, assoc.dl[u]); }
  double r_ul(std::size_t u) const { return rates_ul(u, assoc.ul[u]); }
};

struct SsaSolution {
  AllocationMatrix y_dl;
  AllocationMatrix y_ul;
  std::vector<double> lambda_dl;  // NaN for idle stations
  std::vector<double> lambda_ul;
  double sign_approx_ok_fraction = 1.0;
};

inline int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

inline int sign_metric(std::size_t u, const FixedAssociationProblem& p) {
  return sign_of(p.r_dl(u) - p.r_ul(u));
}

namespace detail {

enum class Link { dl, ul };

inline double ssa_share(double r, double coef, double lambda, double alpha) {
  const double den = coef + lambda;
  if (den <= 0.0) return std::numeric_limits<double>::infinity();
  if (std::abs(alpha - 1.0) < 1e-9) return 1.0 / den;
  return std::pow(std::pow(r, 1.0 - alpha) / den, 1.0 / alpha);
}

struct Served {
  std::vector<std::size_t> users;
  std::vector<double> rate;
  std::vector<double> coef;  // A*r*s (DL) or -A*r'*s (UL)
};

inline Served served_by(std::size_t bs, const FixedAssociationProblem& p, const SsaParams& sp, Link link) {
  Served s;
  for (std::size_t u = 0; u < p.n_users(); ++u) {
    const std::size_t b = link == Link::dl ? p.assoc.dl[u] : p.assoc.ul[u];
    if (b != bs) continue;
    const double r = link == Link::dl ? p.r_dl(u) : p.r_ul(u);
    const double sgn = static_cast<double>(sign_metric(u, p));
    s.users.push_back(u);
    s.rate.push_back(r);
    s.coef.push_back(link == Link::dl ? sp.A * r * sgn : -sp.A * r * sgn);
  }
  return s;
}

inline double budget(const Served& s, double lambda, double alpha) {
  double f = 0.0;
  for (std::size_t i = 0; i < s.users.size(); ++i) f += ssa_share(s.rate[i], s.coef[i], lambda, alpha);
  return f;
}

// Bisection for budget(lambda) = 1; budget is decreasing in lambda.
inline double solve_multiplier(std::size_t bs, const FixedAssociationProblem& p, const SsaParams& sp, Link link) {
  if (sp.alpha <= 0.0) throw std::invalid_argument("alpha must be positive");
  const Served s = served_by(bs, p, sp, link);
  if (s.users.empty()) throw std::runtime_error("idle station");
  const double m = -*std::min_element(s.coef.begin(), s.coef.end());
  double lo = m + std::max(1e-12, 1e-12 * std::abs(m));
  if (budget(s, lo, sp.alpha) < 1.0) throw std::runtime_error("bisection bracket");
  double hi = 1.0;
  int doublings = 0;
  while (hi <= lo || budget(s, hi, sp.alpha) >= 1.0) {
    hi *= 2.0;
    if (++doublings > 2000 || !std::isfinite(hi)) throw std::runtime_error("bisection bracket");
  }
  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    mid = 0.5 * (lo + hi);
    const double f = budget(s, mid, sp.alpha);
    if (std::abs(f - 1.0) < 1e-10) break;
    if (f > 1.0)
      lo = mid;
    else
      hi = mid;
  }
  return mid;
}

}  // namespace detail

inline double solve_bs_multiplier_dl(std::size_t bs, const FixedAssociationProblem& p, const SsaParams& sp) {
  return detail::solve_multiplier(bs, p, sp, detail::Link::dl);
}

inline double solve_bs_multiplier_ul(std::size_t bs, const FixedAssociationProblem& p, const SsaParams& sp) {
  return detail::solve_multiplier(bs, p, sp, detail::Link::ul);
}

inline SsaSolution allocate_fixed(const FixedAssociationProblem& p, const SsaParams& sp) {
  const std::size_t U = p.n_users(), B = p.n_bs();
  SsaSolution sol;
  sol.y_dl = AllocationMatrix(U, B);
  sol.y_ul = AllocationMatrix(U, B);
  sol.lambda_dl.assign(B, std::numeric_limits<double>::quiet_NaN());
  sol.lambda_ul.assign(B, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t b = 0; b < B; ++b) {
    for (auto link : {detail::Link::dl, detail::Link::ul}) {
      const auto s = detail::served_by(b, p, sp, link);
      if (s.users.empty()) continue;
      const double lam = detail::solve_multiplier(b, p, sp, link);
      auto& y = link == detail::Link::dl ? sol.y_dl : sol.y_ul;
      (link == detail::Link::dl ? sol.lambda_dl : sol.lambda_ul)[b] = lam;
      for (std::size_t i = 0; i < s.users.size(); ++i)
        y(s.users[i], b) = detail::ssa_share(s.rate[i], s.coef[i], lam, sp.alpha);
    }
  }
  std::size_t ok = 0;
  for (std::size_t u = 0; u < U; ++u) {
    const double R = p.r_dl(u) * sol.y_dl(u, p.assoc.dl[u]);
    const double Rp = p.r_ul(u) * sol.y_ul(u, p.assoc.ul[u]);
    ok += sign_of(R - Rp) == sign_metric(u, p);
  }
  sol.sign_approx_ok_fraction = U ? static_cast<double>(ok) / static_cast<double>(U) : 1.0;
  return sol;
}

// Max violation over stationarity (relative, sign-approximated), budget equality, nonnegativity and support.
inline double check_kkt_residuals(const SsaSolution& sol, const FixedAssociationProblem& p, const SsaParams& sp) {
  double worst = 0.0;
  const std::size_t U = p.n_users(), B = p.n_bs();
  for (std::size_t u = 0; u < U; ++u) {
    const double s = static_cast<double>(sign_metric(u, p));
    for (std::size_t b = 0; b < B; ++b) {
      for (auto link : {detail::Link::dl, detail::Link::ul}) {
        const bool dl = link == detail::Link::dl;
        const double y = dl ? sol.y_dl(u, b) : sol.y_ul(u, b);
        worst = std::max(worst, -y);
        const std::size_t serving = dl ? p.assoc.dl[u] : p.assoc.ul[u];
        if (serving != b) {
          worst = std::max(worst, std::abs(y));
          continue;
        }
        const double r = dl ? p.r_dl(u) : p.r_ul(u);
        const double lam = dl ? sol.lambda_dl[b] : sol.lambda_ul[b];
        const double coef = dl ? sp.A * r * s : -sp.A * r * s;
        if (y <= 0.0) {
          worst = std::max(worst, 1.0);
          continue;
        }
        const double grad = std::pow(r, 1.0 - sp.alpha) * std::pow(y, -sp.alpha);
        const double target = coef + lam;
        worst = std::max(worst, std::abs(grad - target) / std::max(1.0, std::abs(target)));
      }
    }
  }
  for (std::size_t b = 0; b < B; ++b) {
    bool busy_dl = false, busy_ul = false;
    for (std::size_t u = 0; u < U; ++u) {
      busy_dl |= p.assoc.dl[u] == b;
      busy_ul |= p.assoc.ul[u] == b;
    }
    if (busy_dl) worst = std::max(worst, std::abs(sol.y_dl.col_sum(b) - 1.0));
    if (busy_ul) worst = std::max(worst, std::abs(sol.y_ul.col_sum(b) - 1.0));
  }
  return worst;
}

// Sum of DL and UL utilities minus A times the absolute rate gap, per user.
inline double ssa_objective(const Matrix& y_dl, const Matrix& y_ul, const FixedAssociationProblem& p,
                            const SsaParams& sp) {
  double obj = 0.0;
  for (std::size_t u = 0; u < p.n_users(); ++u) {
    const double R = p.r_dl(u) * y_dl(u, p.assoc.dl[u]);
    const double Rp = p.r_ul(u) * y_ul(u, p.assoc.ul[u]);
    if (R <= 0.0 || Rp <= 0.0) return -std::numeric_limits<double>::infinity();
    obj += utility(R, sp.alpha) + utility(Rp, sp.alpha) - sp.A * std::abs(R - Rp);
  }
  return obj;
}

// Equal split among the users served by each station.
inline std::pair<AllocationMatrix, AllocationMatrix> uniform_allocation(const AssociationVectors& a) {
  const std::size_t U = a.dl.size();
  AllocationMatrix yd(U, a.n_bs), yu(U, a.n_bs);
  std::vector<double> nd(a.n_bs, 0.0), nu(a.n_bs, 0.0);
  for (std::size_t u = 0; u < U; ++u) {
    nd[a.dl[u]] += 1.0;
    nu[a.ul[u]] += 1.0;
  }
  for (std::size_t u = 0; u < U; ++u) {
    yd(u, a.dl[u]) = 1.0 / nd[a.dl[u]];
    yu(u, a.ul[u]) = 1.0 / nu[a.ul[u]];
  }
  return {yd, yu};
}

}  // namespace dude
