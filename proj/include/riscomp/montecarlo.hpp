#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "riscomp/noma.hpp"
#include "riscomp/scenario.hpp"

namespace riscomp {

/// Per-user SINR samples of n independent realizations.
struct TrialBatch {
  std::uint64_t seed = 0;
  std::size_t n_trials = 0;
  std::array<std::vector<double>, 2> center_own;
  std::array<std::vector<double>, 2> center_decode_edge;
  std::vector<double> edge;
  std::vector<double> edge_no_comp;
};

/// OpenMP kernel. Trial i always uses substream (seed, i).
TrialBatch run_trials(const NetworkScenario& s, std::size_t n, std::uint64_t seed);

/// Single-threaded reference with identical output.
TrialBatch run_trials_serial(const NetworkScenario& s, std::size_t n, std::uint64_t seed);

class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(std::vector<double> samples);

  /// Fraction of samples <= x.
  double operator()(double x) const;
  double quantile(double p) const;
  std::size_t size() const { return sorted_.size(); }
  const std::vector<double>& sorted() const { return sorted_; }

 private:
  std::vector<double> sorted_;
};

struct KsResult {
  double statistic = 0.0;
  double critical = 0.0;
  bool pass = false;
};

inline constexpr double kKsC001 = 1.63;
inline constexpr std::size_t kKsMinSamples = 100;

/// One-sample Kolmogorov-Smirnov test; pass iff D < c_alpha / sqrt(n).
KsResult ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf,
                      double c_alpha = kKsC001);

/// Two-sample KS distance sup |F1 - F2|.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

double outage_frequency(std::span<const std::uint8_t> indicators);
double mean_rate(std::span<const double> sinr);

struct UserStats {
  std::array<double, 2> center{};
  double edge = 0.0;
  double edge_no_comp = 0.0;
};

UserStats estimate_outage(const TrialBatch& b, const RateThresholds& thr);
UserStats estimate_ergodic_rate(const TrialBatch& b);

/// One row per trial: trial, then SINR columns.
void write_batch_csv(std::ostream& os, const TrialBatch& b);

}  // namespace riscomp
