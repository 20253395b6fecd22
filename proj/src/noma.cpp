#include "riscomp/noma.hpp"

#include <cmath>
#include <numeric>

#include "riscomp/error.hpp"

namespace riscomp {

NomaPair NomaPair::from_edge_share(double zeta_edge, double tx_power) {
  return {1.0 - zeta_edge, zeta_edge, tx_power};
}

void NomaPair::validate() const {
  if (std::abs(zeta_center + zeta_edge - 1.0) > 1e-12)
    throw InvariantError("NOMA: allocation factors must sum to 1");
  if (!(zeta_center < 0.5 && zeta_edge > 0.5))
    throw InvariantError("NOMA: decoding order needs zeta_center < 0.5 < zeta_edge");
  if (!(tx_power >= 0.0)) throw InvariantError("NOMA: transmit power must be >= 0");
}

double LinkBudget::interference() const {
  double s = 0.0;
  for (const auto& i : interferers) s += i.tx_power * i.gain;
  return s;
}

void LinkBudget::validate() const {
  for (double g : effective_gains)
    if (!(g >= 0.0)) throw InvariantError("link budget: negative gain");
  for (const auto& i : interferers)
    if (!(i.gain >= 0.0 && i.tx_power >= 0.0)) throw InvariantError("link budget: negative interferer");
  if (!(noise_power > 0.0)) throw InvariantError("link budget: noise power must be positive");
}

RateThresholds RateThresholds::from_sinr(double sinr_center, double sinr_edge) {
  return {std::log2(1.0 + sinr_center), std::log2(1.0 + sinr_edge)};
}

double RateThresholds::sinr_center() const { return std::exp2(r_center_min) - 1.0; }
double RateThresholds::sinr_edge() const { return std::exp2(r_edge_min) - 1.0; }

namespace {

void check_cluster(std::span<const NomaPair> cluster, const LinkBudget& b) {
  if (cluster.empty()) throw ShapeError("NOMA: empty cooperating cluster");
  if (cluster.size() != b.effective_gains.size())
    throw ShapeError("NOMA: one effective gain per cluster BS required");
}

double ratio(double num, double den) { return num == 0.0 ? 0.0 : num / den; }

}  // namespace

double sinr_center_decode_edge(std::span<const NomaPair> cluster, const LinkBudget& b) {
  check_cluster(cluster, b);
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < cluster.size(); ++j) {
    const double rx = cluster[j].tx_power * b.effective_gains[j];
    num += cluster[j].zeta_edge * rx;
    den += cluster[j].zeta_center * rx;
  }
  return ratio(num, den + b.interference() + b.noise_power);
}

double sinr_center_own(std::span<const NomaPair> cluster, std::size_t serving,
                       const LinkBudget& b) {
  check_cluster(cluster, b);
  if (serving >= cluster.size()) throw ShapeError("NOMA: serving index outside cluster");
  double den = b.interference() + b.noise_power;
  for (std::size_t j = 0; j < cluster.size(); ++j)
    if (j != serving) den += cluster[j].zeta_center * cluster[j].tx_power * b.effective_gains[j];
  const auto& s = cluster[serving];
  return ratio(s.zeta_center * s.tx_power * b.effective_gains[serving], den);
}

double sinr_edge_comp(std::span<const NomaPair> cluster, const LinkBudget& b) {
  // Same ratio as the center user's decode of the edge layer, seen at the edge user.
  return sinr_center_decode_edge(cluster, b);
}

double achievable_rate(double sinr) { return std::log2(1.0 + sinr); }

bool outage_center(double sinr_decode_edge, double sinr_own, const RateThresholds& thr) {
  if (sinr_decode_edge < thr.sinr_edge()) return true;
  return sinr_own < thr.sinr_center();
}

bool outage_edge(double sinr_edge, const RateThresholds& thr) {
  return sinr_edge < thr.sinr_edge();
}

bool outage_event_center(std::span<const NomaPair> cluster, std::size_t serving,
                         const LinkBudget& b, const RateThresholds& thr) {
  return outage_center(sinr_center_decode_edge(cluster, b), sinr_center_own(cluster, serving, b),
                       thr);
}

bool outage_event_edge(std::span<const NomaPair> cluster, const LinkBudget& b,
                       const RateThresholds& thr) {
  return outage_edge(sinr_edge_comp(cluster, b), thr);
}

double sum_rate(std::span<const double> user_rates) {
  return std::accumulate(user_rates.begin(), user_rates.end(), 0.0);
}

double oma_rate(double snr, double time_share) { return time_share * std::log2(1.0 + snr); }

}  // namespace riscomp
