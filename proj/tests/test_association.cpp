#include <gtest/gtest.h>

#include <numeric>

#include "dude/association.hpp"

using namespace dude;

namespace {

const TierPowers kPowers{dbm_to_mw(46), dbm_to_mw(20), dbm_to_mw(20)};

Deployment two_station() {
  Deployment d;
  d.bs = {{0, 0}, {100, 0}};
  d.tier = {Tier::macro, Tier::femto};
  return d;
}

}  // namespace

TEST(DudeAssociate, AgreeingRulesGiveCase1) {
  const auto a = dude_associate({-30, 10}, two_station(), kPowers, ChannelParams{});
  EXPECT_EQ(a.dl_bs, 0u);
  EXPECT_EQ(a.ul_bs, 0u);
  EXPECT_EQ(a.case_id, 1);
}

TEST(DudeAssociate, ConstructedCase2) {
  // d_F / d_M = 40 / 60 exceeds (P_F / P_M)^(1/4) ~ 0.224, so the macro wins DL while the femto is closer.
  const Point2 u{60, 0};
  const auto d = two_station();
  EXPECT_GT(kPowers.macro_mw * std::pow(60.0, -4.0), kPowers.femto_mw * std::pow(40.0, -4.0));
  const auto a = dude_associate(u, d, kPowers, ChannelParams{});
  EXPECT_EQ(a.dl_bs, 0u);
  EXPECT_EQ(a.ul_bs, 1u);
  EXPECT_EQ(a.case_id, 2);
  const auto rp = rp_associate(u, d, kPowers, ChannelParams{});
  EXPECT_EQ(rp.dl_bs, a.dl_bs);
  EXPECT_NE(rp.ul_bs, a.ul_bs);
  EXPECT_EQ(rp.case_id, 1);
}

TEST(DudeAssociate, FemtoBothLinksGivesCase4) {
  const auto a = dude_associate({95, 3}, two_station(), kPowers, ChannelParams{});
  EXPECT_EQ(a.case_id, 4);
}

TEST(RpAssociate, SingleStation) {
  Deployment d;
  d.bs = {{500, 500}};
  d.tier = {Tier::femto};
  const auto a = rp_associate({10, 10}, d, kPowers, ChannelParams{});
  const auto b = dude_associate({10, 10}, d, kPowers, ChannelParams{});
  EXPECT_EQ(a.dl_bs, 0u);
  EXPECT_EQ(a.ul_bs, 0u);
  EXPECT_EQ(b.ul_bs, 0u);
}

TEST(Associate, NoStationsThrows) {
  EXPECT_THROW(dude_associate({0, 0}, Deployment{}, kPowers, ChannelParams{}), std::invalid_argument);
}

TEST(CaseOf, Table) {
  EXPECT_EQ(case_of(Tier::macro, Tier::macro), 1);
  EXPECT_EQ(case_of(Tier::macro, Tier::femto), 2);
  EXPECT_EQ(case_of(Tier::femto, Tier::macro), 3);
  EXPECT_EQ(case_of(Tier::femto, Tier::femto), 4);
}

TEST(Associate, RandomMapsProperties) {
  std::mt19937_64 rng(8);
  DeploymentParams dp;
  dp.lambda_users = 300;
  TierPowers scaled = kPowers;
  scaled.macro_mw *= 13.0;
  scaled.femto_mw *= 13.0;
  for (int m = 0; m < 30; ++m) {
    const auto d = make_deployment(dp, rng);
    const auto dl_sites = dl_weighted_sites(d, kPowers, ChannelParams{});
    for (const auto& u : d.users) {
      const auto a = dude_associate(u, d, kPowers, ChannelParams{});
      ASSERT_EQ(a.ul_bs, nearest_site(u, d.bs));
      ASSERT_EQ(a.dl_bs, weighted_nearest_site(u, dl_sites));
      ASSERT_NE(a.case_id, 3);
      const auto b = dude_associate(u, d, scaled, ChannelParams{});
      ASSERT_EQ(a.dl_bs, b.dl_bs);
      ASSERT_EQ(a.ul_bs, b.ul_bs);
    }
  }
}

TEST(MakeDeployment, UsersKeptAwayFromStationsAndSeeded) {
  DeploymentParams dp;
  dp.user_count = 200;
  std::mt19937_64 r1(5), r2(5);
  const auto a = make_deployment(dp, r1), b = make_deployment(dp, r2);
  ASSERT_EQ(a.users.size(), 200u);
  ASSERT_GE(a.n_macro(), 1u);
  for (std::size_t i = 0; i < a.n_macro(); ++i) EXPECT_EQ(a.tier[i], Tier::macro);
  for (std::size_t i = 0; i < a.users.size(); ++i) {
    EXPECT_EQ(a.users[i].x, b.users[i].x);
    for (const auto& s : a.bs) EXPECT_GE(distance(a.users[i], s), kMinUserSiteDistance);
  }
}

TEST(AssociationProbabilities, NoFemtosIsAllCase1) {
  DeploymentParams dp;
  dp.lambda_users = 200;
  const auto f = association_probabilities(20, 0.0, dp, kPowers, ChannelParams{}, 1);
  EXPECT_DOUBLE_EQ(f[0], 1.0);
}

TEST(AssociationProbabilities, SumToOneAndNoCase3) {
  DeploymentParams dp;
  dp.lambda_users = 200;
  const auto f = association_probabilities(50, 5.0, dp, kPowers, ChannelParams{}, 3);
  EXPECT_NEAR(f[0] + f[1] + f[2] + f[3], 1.0, 1e-12);
  EXPECT_EQ(f[2], 0.0);
}

TEST(AssociationProbabilities, Case4GrowsBeyondCrossover) {
  DeploymentParams dp;
  dp.lambda_users = 500;
  std::vector<std::array<double, 4>> sweep;
  for (double ratio = 1.0; ratio <= 17.0; ratio += 4.0)
    sweep.push_back(association_probabilities(450, ratio, dp, kPowers, ChannelParams{}, 1));
  std::size_t cross = sweep.size();
  for (std::size_t i = 0; i < sweep.size(); ++i)
    if (sweep[i][3] > sweep[i][1]) {
      cross = i;
      break;
    }
  ASSERT_LT(cross, sweep.size());
  for (std::size_t i = cross + 1; i < sweep.size(); ++i) EXPECT_GE(sweep[i][3], sweep[i - 1][3]);
}
