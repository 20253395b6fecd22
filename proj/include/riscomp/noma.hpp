#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace riscomp {

/// Two-user NOMA power split at one BS. zeta_center + zeta_edge = 1 and the
/// edge user gets the larger share so the center user decodes it first.
struct NomaPair {
  double zeta_center = 0.3;
  double zeta_edge = 0.7;
  double tx_power = 1.0;

  static NomaPair from_edge_share(double zeta_edge, double tx_power);
  void validate() const;
};

struct Interferer {
  double tx_power = 0.0;
  double gain = 0.0;
};

/// Gains seen by one user. effective_gains[j] is |H_j|^2 from the j-th BS of
/// the serving cluster (same order as the NomaPair span); interferers are
/// transmitters outside the cluster.
struct LinkBudget {
  std::vector<double> effective_gains;
  std::vector<Interferer> interferers;
  double noise_power = 1.0;

  double interference() const;
  void validate() const;
};

/// SINR thresholds gamma = 2^R - 1 from target rates.
struct RateThresholds {
  double r_center_min = 1.0;
  double r_edge_min = 0.5;

  static RateThresholds from_sinr(double sinr_center, double sinr_edge);
  double sinr_center() const;
  double sinr_edge() const;
};

/// Center user decoding the edge layer: all cluster edge-signal power over
/// all cluster center-signal power plus interference plus noise.
double sinr_center_decode_edge(std::span<const NomaPair> cluster, const LinkBudget& b);

/// Center user decoding its own layer after SIC; the other cluster BSs'
/// center-signal power stays as interference.
double sinr_center_own(std::span<const NomaPair> cluster, std::size_t serving,
                       const LinkBudget& b);

/// Edge user under non-coherent joint transmission.
double sinr_edge_comp(std::span<const NomaPair> cluster, const LinkBudget& b);

double achievable_rate(double sinr);

bool outage_center(double sinr_decode_edge, double sinr_own, const RateThresholds& thr);
bool outage_edge(double sinr_edge, const RateThresholds& thr);

bool outage_event_center(std::span<const NomaPair> cluster, std::size_t serving,
                         const LinkBudget& b, const RateThresholds& thr);
bool outage_event_edge(std::span<const NomaPair> cluster, const LinkBudget& b,
                       const RateThresholds& thr);

double sum_rate(std::span<const double> user_rates);

/// Orthogonal access: the user holds the channel for `time_share` of the slot.
double oma_rate(double snr, double time_share = 0.5);

}  // namespace riscomp
