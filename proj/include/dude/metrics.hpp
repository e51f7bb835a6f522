#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "channel.hpp"
#include "matrix.hpp"

namespace dude {

struct RunMetrics {
  double aggregate_se_dl = 0.0;
  double aggregate_se_ul = 0.0;
  double mean_asymmetry = 0.0;
  double load_variance_dl = 0.0;
  double load_variance_ul = 0.0;
  std::array<double, 4> case_frequencies{};
  double mean_sinr_dl_db = 0.0;
  double mean_sinr_ul_db = 0.0;
};

inline double aggregate_spectral_efficiency(const RateMatrix& rates, const AllocationMatrix& alloc) {
  require_conformable(rates, alloc);
  double s = 0.0;
  for (std::size_t u = 0; u < rates.rows(); ++u)
    for (std::size_t b = 0; b < rates.cols(); ++b) s += rates(u, b) * alloc(u, b);
  return s;
}

inline std::vector<double> effective_rates(const RateMatrix& rates, const AllocationMatrix& alloc) {
  require_conformable(rates, alloc);
  std::vector<double> R(rates.rows(), 0.0);
  for (std::size_t u = 0; u < rates.rows(); ++u)
    for (std::size_t b = 0; b < rates.cols(); ++b) R[u] += rates(u, b) * alloc(u, b);
  return R;
}

inline double mean_rate_asymmetry(const RateMatrix& rates_dl, const RateMatrix& rates_ul,
                                  const AllocationMatrix& alloc_dl, const AllocationMatrix& alloc_ul) {
  const auto R = effective_rates(rates_dl, alloc_dl);
  const auto Rp = effective_rates(rates_ul, alloc_ul);
  if (R.empty()) return 0.0;
  double s = 0.0;
  for (std::size_t u = 0; u < R.size(); ++u) s += std::abs(R[u] - Rp[u]);
  return s / static_cast<double>(R.size());
}

// Population variance of per-station user counts, idle stations included.
inline double load_variance(const std::vector<std::size_t>& chosen, std::size_t n_bs) {
  if (n_bs < 1) throw std::invalid_argument("n_bs must be >= 1");
  std::vector<double> count(n_bs, 0.0);
  for (auto b : chosen) count.at(b) += 1.0;
  double mean = 0.0;
  for (double c : count) mean += c;
  mean /= static_cast<double>(n_bs);
  double v = 0.0;
  for (double c : count) v += (c - mean) * (c - mean);
  return v / static_cast<double>(n_bs);
}

struct Histogram {
  double lo = 0.0;
  double width = 1.0;
  std::vector<double> density;  // integrates to 1 over the bins
};

inline Histogram distance_pdf(const std::vector<double>& samples, std::size_t bins) {
  if (samples.empty()) throw std::invalid_argument("empty samples");
  if (bins < 1) throw std::invalid_argument("bins must be >= 1");
  const auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
  Histogram h;
  h.lo = *mn;
  const double span = *mx - *mn;
  h.width = span > 0.0 ? span / static_cast<double>(bins) : 1.0;
  const std::size_t nb = span > 0.0 ? bins : 1;
  h.density.assign(nb, 0.0);
  for (double s : samples) {
    auto k = static_cast<std::size_t>((s - h.lo) / h.width);
    if (k >= nb) k = nb - 1;
    h.density[k] += 1.0;
  }
  const double norm = static_cast<double>(samples.size()) * h.width;
  for (auto& d : h.density) d /= norm;
  return h;
}

inline double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// Mean of per-sample dB values.
inline double mean_db(const std::vector<double>& linear) {
  if (linear.empty()) return 0.0;
  double s = 0.0;
  for (double x : linear) s += to_db(x);
  return s / static_cast<double>(linear.size());
}

// dB of the linear mean.
inline double db_of_mean(const std::vector<double>& linear) { return to_db(mean_of(linear)); }

}  // namespace dude
