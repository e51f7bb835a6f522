#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dude/association.hpp"
#include "dude/geometry.hpp"

using namespace dude;

namespace {

std::size_t brute_weighted(const Point2& p, const std::vector<WeightedSite>& s) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < s.size(); ++i)
    if (distance(p, s[i].position) / s[i].weight < distance(p, s[best].position) / s[best].weight) best = i;
  return best;
}

std::vector<WeightedSite> random_sites(std::mt19937_64& rng, std::size_t n, double wlo, double whi) {
  std::uniform_real_distribution<double> pos(0.0, 1000.0), w(wlo, whi);
  std::vector<WeightedSite> s(n);
  for (auto& x : s) x = {{pos(rng), pos(rng)}, w(rng)};
  return s;
}

}  // namespace

TEST(SamplePpp, ZeroIntensityIsEmpty) {
  std::mt19937_64 rng(1);
  EXPECT_TRUE(sample_ppp(0.0, Region{}, rng).empty());
}

TEST(SamplePpp, NegativeIntensityThrows) {
  std::mt19937_64 rng(1);
  EXPECT_THROW(sample_ppp(-1.0, Region{}, rng), std::invalid_argument);
}

TEST(SamplePpp, MeanCountWithinThreeSigma) {
  std::mt19937_64 rng(7);
  const int reps = 100000;
  double sum = 0.0;
  for (int i = 0; i < reps; ++i) sum += static_cast<double>(sample_ppp(3.0, Region{}, rng).size());
  const double sigma = std::sqrt(3.0 / reps);
  EXPECT_NEAR(sum / reps, 3.0, 3.0 * sigma);
}

TEST(SamplePpp, PointsInsideRegion) {
  std::mt19937_64 rng(3);
  const Region r{200.0, 50.0};
  for (const auto& p : sample_ppp(500.0, r, rng)) {
    EXPECT_GE(p.x, 0.0);
    EXPECT_LE(p.x, r.width);
    EXPECT_GE(p.y, 0.0);
    EXPECT_LE(p.y, r.height);
  }
}

TEST(SamplePpp, SameSeedSamePoints) {
  std::mt19937_64 a(42), b(42);
  const auto pa = sample_ppp(50.0, Region{}, a), pb = sample_ppp(50.0, Region{}, b);
  ASSERT_EQ(pa.size(), pb.size());
  for (std::size_t i = 0; i < pa.size(); ++i) {
    EXPECT_EQ(pa[i].x, pb[i].x);
    EXPECT_EQ(pa[i].y, pb[i].y);
  }
}

TEST(NearestSite, Examples) {
  EXPECT_EQ(nearest_site({0, 0}, {{1, 0}, {5, 5}}), 0u);
  EXPECT_EQ(nearest_site({0, 0}, {{1, 0}, {-1, 0}}), 0u);
  EXPECT_EQ(nearest_site({0, 0}, {{5, 5}, {1, 0}}), 1u);
  EXPECT_THROW(nearest_site({0, 0}, {}), std::invalid_argument);
}

TEST(NearestSite, MatchesExhaustiveScan) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> pos(0.0, 1000.0);
  std::vector<Point2> sites(20);
  for (auto& s : sites) s = {pos(rng), pos(rng)};
  for (int i = 0; i < 100; ++i)
    for (int j = 0; j < 100; ++j) {
      const Point2 p{i * 10.0 + 5.0, j * 10.0 + 5.0};
      std::size_t best = 0;
      for (std::size_t k = 1; k < sites.size(); ++k)
        if (distance(p, sites[k]) < distance(p, sites[best])) best = k;
      ASSERT_EQ(nearest_site(p, sites), best);
    }
}

TEST(WeightedNearestSite, Examples) {
  EXPECT_EQ(weighted_nearest_site({3, 3}, {{{0, 0}, 1.0}}), 0u);
  EXPECT_EQ(weighted_nearest_site({2, 0}, {{{0, 0}, 2.0}, {{3, 0}, 1.0}}), 0u);
  EXPECT_EQ(weighted_nearest_site({2.5, 0}, {{{0, 0}, 2.0}, {{3, 0}, 1.0}}), 1u);
  EXPECT_THROW(weighted_nearest_site({0, 0}, {}), std::invalid_argument);
}

TEST(WeightedNearestSite, MatchesBruteForceOnRandomQueries) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> n(1, 50);
  std::uniform_real_distribution<double> pos(0.0, 1000.0);
  for (int q = 0; q < 10000; ++q) {
    const auto sites = random_sites(rng, n(rng), 0.2, 5.0);
    const Point2 p{pos(rng), pos(rng)};
    ASSERT_EQ(weighted_nearest_site(p, sites), brute_weighted(p, sites));
  }
}

TEST(WeightedNearestSite, CommonWeightScaleInvariant) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> pos(0.0, 1000.0);
  for (int q = 0; q < 200; ++q) {
    auto sites = random_sites(rng, 20, 0.5, 3.0);
    const Point2 p{pos(rng), pos(rng)};
    const auto before = weighted_nearest_site(p, sites);
    for (auto& s : sites) s.weight *= 7.3;
    EXPECT_EQ(weighted_nearest_site(p, sites), before);
  }
}

TEST(Apollonius, EqualWeightsGiveBisector) {
  const auto b = apollonius_boundary({{0, 0}, 1.0}, {{1, 0}, 1.0});
  ASSERT_EQ(b.kind, ApolloniusBoundary::Kind::bisector);
  for (double t : {-3.0, 0.0, 2.5}) EXPECT_NEAR(boundary_point(b, t).x, 0.5, 1e-15);
}

TEST(Apollonius, CircleExample) {
  const WeightedSite P{{0, 0}, 2.0}, Q{{3, 0}, 1.0};
  const auto b = apollonius_boundary(P, Q);
  ASSERT_EQ(b.kind, ApolloniusBoundary::Kind::circle);
  EXPECT_NEAR(b.center.x, 4.0, 1e-12);
  EXPECT_NEAR(b.center.y, 0.0, 1e-12);
  EXPECT_NEAR(b.radius, 2.0, 1e-12);
  EXPECT_TRUE(b.dominant_outside);
  for (Point2 x : {Point2{2, 0}, Point2{6, 0}}) EXPECT_NEAR(distance(x, P.position) / distance(x, Q.position), 2.0, 1e-12);
}

TEST(Apollonius, DegeneratePairThrows) {
  EXPECT_THROW(apollonius_boundary({{1, 1}, 1.0}, {{1, 1}, 2.0}), std::invalid_argument);
}

TEST(Apollonius, BoundaryPointsSatisfyWeightedEquidistance) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> t(0.0, 2.0 * M_PI);
  for (int i = 0; i < 1000; ++i) {
    const auto s = random_sites(rng, 2, 0.2, 5.0);
    const auto b = apollonius_boundary(s[0], s[1]);
    const double pq = distance(s[0].position, s[1].position);
    for (int k = 0; k < 10; ++k) {
      const auto X = boundary_point(b, b.kind == ApolloniusBoundary::Kind::circle ? t(rng) : 100.0 * (t(rng) - M_PI));
      const double gap = distance(X, s[0].position) / s[0].weight - distance(X, s[1].position) / s[1].weight;
      ASSERT_LT(std::abs(gap), 1e-9 * pq);
    }
  }
}

TEST(Apollonius, DominantSiteOwnsUnboundedSide) {
  const WeightedSite P{{0, 0}, 3.0}, Q{{10, 0}, 1.0};
  const auto b = apollonius_boundary(P, Q);
  const Point2 far{1e6, 0};
  EXPECT_TRUE(b.dominant_outside);
  EXPECT_EQ(weighted_nearest_site(far, {P, Q}), 0u);
  const auto b2 = apollonius_boundary(Q, P);
  EXPECT_FALSE(b2.dominant_outside);
}

TEST(Rasterize, ResolutionTooSmall) {
  EXPECT_THROW(rasterize_coverage({{{0, 0}, 1.0}}, Region{}, 1), std::invalid_argument);
}

TEST(Rasterize, TwoEqualSitesSplitAtBisector) {
  const auto g = rasterize_coverage({{{250, 500}, 1.0}, {{750, 500}, 1.0}}, Region{}, 100);
  for (std::size_t r = 0; r < 100; ++r)
    for (std::size_t c = 0; c < 100; ++c) ASSERT_EQ(g.at(r, c), c < 50 ? 0u : 1u);
}

TEST(Rasterize, CellsAgreeWithCenterQuery) {
  std::mt19937_64 rng(17);
  const auto sites = random_sites(rng, 15, 0.5, 2.0);
  const auto g = rasterize_coverage(sites, Region{}, 64);
  for (std::size_t r = 0; r < 64; ++r)
    for (std::size_t c = 0; c < 64; ++c) ASSERT_EQ(g.at(r, c), brute_weighted(g.center(r, c), sites));
}

TEST(Rasterize, MacroRegionsContainEqualWeightRegions) {
  std::mt19937_64 rng(21);
  DeploymentParams dp;
  dp.lambda_femto = 15.0;
  dp.user_count = 1;
  const auto d = make_deployment(dp, rng);
  const TierPowers pw{dbm_to_mw(46), dbm_to_mw(20), dbm_to_mw(20)};
  const auto g_w = rasterize_coverage(dl_weighted_sites(d, pw, ChannelParams{}), d.region, 100);
  const auto g_e = rasterize_coverage(ul_weighted_sites(d), d.region, 100);
  std::size_t weighted_macro = 0, equal_macro = 0;
  for (std::size_t i = 0; i < g_e.cells.size(); ++i) {
    if (d.tier[g_e.cells[i]] == Tier::macro) {
      ++equal_macro;
      ASSERT_EQ(g_w.cells[i], g_e.cells[i]);
    }
    weighted_macro += d.tier[g_w.cells[i]] == Tier::macro;
  }
  EXPECT_GT(weighted_macro, equal_macro);
}
