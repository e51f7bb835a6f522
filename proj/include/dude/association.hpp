#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "channel.hpp"
#include "geometry.hpp"

namespace dude {

enum class Tier { macro, femto };

struct Deployment {
  Region region;
  std::vector<Point2> bs;  // macros first, then femtos
  std::vector<Tier> tier;
  std::vector<Point2> users;

  std::size_t n_macro() const {
    std::size_t n = 0;
    for (Tier t : tier) n += t == Tier::macro;
    return n;
  }
};

struct DeploymentParams {
  Region region;
  double lambda_macro = 3.0;
  double lambda_femto = 9.0;
  double lambda_users = 5500.0;
  std::size_t user_count = 0;  // > 0 places exactly this many users instead of a PPP
};

inline constexpr double kMinUserSiteDistance = 1e-3;

// Draw order: macro PPP (redrawn until non-empty when lambda_macro > 0), femto PPP, then users.
// Users closer than kMinUserSiteDistance to any station are redrawn.
inline Deployment make_deployment(const DeploymentParams& dp, std::mt19937_64& rng) {
  Deployment d;
  d.region = dp.region;
  std::vector<Point2> macros;
  do {
    macros = sample_ppp(dp.lambda_macro, dp.region, rng);
  } while (dp.lambda_macro > 0.0 && macros.empty());
  auto femtos = sample_ppp(dp.lambda_femto, dp.region, rng);
  for (const auto& p : macros) {
    d.bs.push_back(p);
    d.tier.push_back(Tier::macro);
  }
  for (const auto& p : femtos) {
    d.bs.push_back(p);
    d.tier.push_back(Tier::femto);
  }

  std::uniform_real_distribution<double> ux(0.0, dp.region.width), uy(0.0, dp.region.height);
  auto too_close = [&](const Point2& u) {
    for (const auto& b : d.bs)
      if (distance(u, b) < kMinUserSiteDistance) return true;
    return false;
  };
  auto place = [&](Point2 u) {
    while (too_close(u)) u = {ux(rng), uy(rng)};
    d.users.push_back(u);
  };
  if (dp.user_count > 0) {
    for (std::size_t i = 0; i < dp.user_count; ++i) {
      const double x = ux(rng);
      const double y = uy(rng);
      place({x, y});
    }
  } else {
    for (const auto& u : sample_ppp(dp.lambda_users, dp.region, rng)) place(u);
  }
  return d;
}

inline double tier_power(Tier t, const TierPowers& pw) { return t == Tier::macro ? pw.macro_mw : pw.femto_mw; }

// Voronoi weights whose d/W ordering equals the average received power ordering.
inline std::vector<WeightedSite> dl_weighted_sites(const Deployment& d, const TierPowers& pw, const ChannelParams& ch) {
  std::vector<WeightedSite> s;
  for (std::size_t b = 0; b < d.bs.size(); ++b)
    s.push_back({d.bs[b], std::pow(tier_power(d.tier[b], pw), 1.0 / ch.path_loss_exponent)});
  return s;
}

inline std::vector<WeightedSite> ul_weighted_sites(const Deployment& d) {
  std::vector<WeightedSite> s;
  for (const auto& p : d.bs) s.push_back({p, 1.0});
  return s;
}

struct AssociationOutcome {
  std::size_t dl_bs = 0;
  std::size_t ul_bs = 0;
  int case_id = 1;
};

// 1: macro/macro, 2: macro DL + femto UL, 3: femto DL + macro UL, 4: femto/femto.
inline int case_of(Tier dl, Tier ul) {
  if (dl == Tier::macro) return ul == Tier::macro ? 1 : 2;
  return ul == Tier::macro ? 3 : 4;
}

inline std::size_t strongest_dl_station(const Point2& u, const Deployment& d, const TierPowers& pw,
                                        const ChannelParams& ch) {
  if (d.bs.empty()) throw std::invalid_argument("no sites");
  std::size_t best = 0;
  double bp = -1.0;
  for (std::size_t b = 0; b < d.bs.size(); ++b) {
    const double p = tier_power(d.tier[b], pw) * path_gain(distance(u, d.bs[b]), ch);
    if (p > bp) {
      bp = p;
      best = b;
    }
  }
  return best;
}

inline AssociationOutcome dude_associate(const Point2& u, const Deployment& d, const TierPowers& pw,
                                         const ChannelParams& ch) {
  AssociationOutcome a;
  a.dl_bs = strongest_dl_station(u, d, pw, ch);
  a.ul_bs = nearest_site(u, d.bs);
  a.case_id = case_of(d.tier[a.dl_bs], d.tier[a.ul_bs]);
  return a;
}

inline AssociationOutcome rp_associate(const Point2& u, const Deployment& d, const TierPowers& pw,
                                       const ChannelParams& ch) {
  AssociationOutcome a;
  a.dl_bs = strongest_dl_station(u, d, pw, ch);
  a.ul_bs = a.dl_bs;
  a.case_id = case_of(d.tier[a.dl_bs], d.tier[a.ul_bs]);
  return a;
}

inline std::vector<AssociationOutcome> associate_all(const Deployment& d, const TierPowers& pw,
                                                     const ChannelParams& ch, bool decoupled) {
  std::vector<AssociationOutcome> out;
  out.reserve(d.users.size());
  for (const auto& u : d.users) out.push_back(decoupled ? dude_associate(u, d, pw, ch) : rp_associate(u, d, pw, ch));
  return out;
}

// Case frequencies over `maps` deployments; map k uses seed + k.
inline std::array<double, 4> association_probabilities(std::size_t maps, double ratio, DeploymentParams dp,
                                                        const TierPowers& pw, const ChannelParams& ch,
                                                        std::uint64_t seed) {
  if (maps < 1) throw std::invalid_argument("maps must be >= 1");
  dp.lambda_femto = dp.lambda_macro * ratio;
  std::array<double, 4> counts{};
  double total = 0.0;
  for (std::size_t k = 0; k < maps; ++k) {
    std::mt19937_64 rng(seed + k);
    const auto d = make_deployment(dp, rng);
    for (const auto& a : associate_all(d, pw, ch, true)) {
      counts[static_cast<std::size_t>(a.case_id - 1)] += 1.0;
      total += 1.0;
    }
  }
  if (total > 0.0)
    for (auto& c : counts) c /= total;
  return counts;
}

}  // namespace dude
