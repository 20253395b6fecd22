#pragma once

#include <cmath>

namespace riscomp {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

/// Thermal noise -174 dBm/Hz over the bandwidth, plus receiver noise figure.
inline double noise_power_dbm(double bandwidth_hz, double noise_figure_db = 0.0) {
  return -174.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
}

inline double noise_power_watts(double bandwidth_hz, double noise_figure_db = 0.0) {
  return dbm_to_watts(noise_power_dbm(bandwidth_hz, noise_figure_db));
}

}  // namespace riscomp
