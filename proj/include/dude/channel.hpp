#pragma once

#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

namespace dude {

struct ChannelParams {
  double path_loss_exponent = 4.0;
  double propagation_constant = 1.0;
  double noise_mw = 2.5118864315095718e-11;  // -106 dBm
};

struct TierPowers {
  double macro_mw = 39810.717055349733;  // 46 dBm
  double femto_mw = 100.0;               // 20 dBm
  double device_mw = 100.0;              // 20 dBm
};

inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
inline double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }
inline double to_db(double linear) { return 10.0 * std::log10(linear); }

inline double path_gain(double d, const ChannelParams& ch) {
  if (d <= 0.0) throw std::domain_error("singular distance");
  return ch.propagation_constant * std::pow(d, -ch.path_loss_exponent);
}

inline double received_power(double tx_mw, double h, double d, const ChannelParams& ch) {
  return tx_mw * h * path_gain(d, ch);
}

inline double sample_fading(std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  return e(rng);
}

inline double sinr(double signal, const std::vector<double>& interferers, double noise) {
  const double i = std::accumulate(interferers.begin(), interferers.end(), 0.0);
  return signal / (i + noise);
}

inline double shannon_rate(double bandwidth, std::size_t n_sharing, double s) {
  if (n_sharing < 1) throw std::invalid_argument("n_sharing_users must be >= 1");
  return bandwidth / static_cast<double>(n_sharing) * std::log2(1.0 + s);
}

inline double spectral_efficiency(double s) { return std::log2(1.0 + s); }

inline double utility(double R, double alpha) {
  if (R <= 0.0) throw std::domain_error("non-positive rate");
  if (std::abs(alpha - 1.0) < 1e-9) return std::log(R);
  return std::pow(R, 1.0 - alpha) / (1.0 - alpha);
}

}  // namespace dude
