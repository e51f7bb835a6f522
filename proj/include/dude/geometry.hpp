#pragma once

#include <cmath>
#include <cstddef>
#include <random>
#include <stdexcept>
#include <vector>

namespace dude {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(const Point2& a, const Point2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

struct Region {
  double width = 1000.0;
  double height = 1000.0;
};

struct WeightedSite {
  Point2 position;
  double weight = 1.0;
};

struct ApolloniusBoundary {
  enum class Kind { circle, bisector };
  Kind kind = Kind::bisector;
  // circle
  Point2 center;
  double radius = 0.0;
  bool dominant_outside = false;  // true when p owns the unbounded side
  // bisector: points X with dot(X - midpoint, normal) = 0; normal points from p to q
  Point2 midpoint;
  Point2 normal;
};

// Count ~ Poisson(intensity), then uniform placement. Draw order: count, then (x, y) per point.
inline std::vector<Point2> sample_ppp(double intensity, const Region& region, std::mt19937_64& rng) {
  if (intensity < 0.0) throw std::invalid_argument("negative intensity");
  std::vector<Point2> pts;
  if (intensity == 0.0) return pts;
  std::poisson_distribution<long> count(intensity);
  const long n = count(rng);
  std::uniform_real_distribution<double> ux(0.0, region.width), uy(0.0, region.height);
  pts.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    const double x = ux(rng);
    const double y = uy(rng);
    pts.push_back({x, y});
  }
  return pts;
}

inline std::size_t nearest_site(const Point2& p, const std::vector<Point2>& sites) {
  if (sites.empty()) throw std::invalid_argument("no sites");
  std::size_t best = 0;
  double bd = distance(p, sites[0]);
  for (std::size_t i = 1; i < sites.size(); ++i) {
    const double d = distance(p, sites[i]);
    if (d < bd) {
      bd = d;
      best = i;
    }
  }
  return best;
}

inline std::size_t weighted_nearest_site(const Point2& p, const std::vector<WeightedSite>& sites) {
  if (sites.empty()) throw std::invalid_argument("no sites");
  std::size_t best = 0;
  double bd = distance(p, sites[0].position) / sites[0].weight;
  for (std::size_t i = 1; i < sites.size(); ++i) {
    const double d = distance(p, sites[i].position) / sites[i].weight;
    if (d < bd) {
      bd = d;
      best = i;
    }
  }
  return best;
}

inline ApolloniusBoundary apollonius_boundary(const WeightedSite& p, const WeightedSite& q) {
  const Point2 P = p.position, Q = q.position;
  const double pq = distance(P, Q);
  if (pq == 0.0) throw std::invalid_argument("degenerate pair");
  ApolloniusBoundary b;
  const double rho = p.weight / q.weight;
  if (rho == 1.0) {
    b.kind = ApolloniusBoundary::Kind::bisector;
    b.midpoint = {(P.x + Q.x) / 2.0, (P.y + Q.y) / 2.0};
    b.normal = {(Q.x - P.x) / pq, (Q.y - P.y) / pq};
    return b;
  }
  const double r2 = rho * rho;
  b.kind = ApolloniusBoundary::Kind::circle;
  b.center = {(P.x - Q.x * r2) / (1.0 - r2), (P.y - Q.y * r2) / (1.0 - r2)};
  b.radius = rho * pq / std::abs(1.0 - r2);
  b.dominant_outside = rho > 1.0;
  return b;
}

// Point on the boundary at parameter t (angle for circles, signed offset along the line for bisectors).
inline Point2 boundary_point(const ApolloniusBoundary& b, double t) {
  if (b.kind == ApolloniusBoundary::Kind::circle)
    return {b.center.x + b.radius * std::cos(t), b.center.y + b.radius * std::sin(t)};
  return {b.midpoint.x - b.normal.y * t, b.midpoint.y + b.normal.x * t};
}

struct CoverageGrid {
  std::size_t resolution = 0;
  Region region;
  std::vector<std::size_t> cells;  // row-major, row 0 at y = 0

  std::size_t at(std::size_t row, std::size_t col) const { return cells[row * resolution + col]; }
  Point2 center(std::size_t row, std::size_t col) const {
    return {(static_cast<double>(col) + 0.5) * region.width / static_cast<double>(resolution),
            (static_cast<double>(row) + 0.5) * region.height / static_cast<double>(resolution)};
  }
};

inline CoverageGrid rasterize_coverage(const std::vector<WeightedSite>& sites, const Region& region,
                                       std::size_t resolution) {
  if (resolution < 2) throw std::invalid_argument("resolution must be >= 2");
  if (sites.empty()) throw std::invalid_argument("no sites");
  CoverageGrid g;
  g.resolution = resolution;
  g.region = region;
  g.cells.resize(resolution * resolution);
  for (std::size_t r = 0; r < resolution; ++r)
    for (std::size_t c = 0; c < resolution; ++c)
      g.cells[r * resolution + c] = weighted_nearest_site(g.center(r, c), sites);
  return g;
}

}  // namespace dude
