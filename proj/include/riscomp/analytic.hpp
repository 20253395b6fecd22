#pragma once

#include <array>
#include <cstddef>

#include "riscomp/channel.hpp"

namespace riscomp {

struct MomentPair {
  double m1 = 0.0;  // E[X]
  double m2 = 0.0;  // E[X^2]

  double variance() const { return m2 - m1 * m1; }
};

struct GammaParams {
  double shape = 1.0;
  double scale = 1.0;

  double mean() const { return shape * scale; }
  double variance() const { return shape * scale * scale; }
  MomentPair moments() const { return {mean(), shape * (shape + 1.0) * scale * scale}; }
  double pdf(double x) const;
  double cdf(double x) const;
};

/// Law of (X/Y) * scale-normalized ratio: x/scale ~ BetaPrime(a, b).
struct BetaPrimeParams {
  double a = 1.0;
  double b = 1.0;
  double scale = 1.0;

  double pdf(double x) const;
  void validate() const;
};

/// How the p-th moment of the RIS cascade sum G = sqrt(beta) sum_k |h_iR,k||h_Ru,k| is formed.
enum class CascadeMomentRule {
  /// Exact raw moments of a sum of K i.i.d. products.
  IndependentElements,
  /// (K sqrt(beta))^p E[(|h_iR||h_Ru|)^p]: the sum treated as K copies of one product.
  CoherentScaling,
};

/// One RIS-assisted link: direct Nakagami path plus K cascaded elements with amplitude sqrt(beta).
struct RisLink {
  NakagamiParams direct;
  std::size_t elements = 0;
  double beta = 1.0;
  NakagamiParams bs_ris;
  NakagamiParams ris_user;
};

double nakagami_moment(const NakagamiParams& p, int order);

double cascade_moment(std::size_t k, double beta, const NakagamiParams& bs_ris,
                      const NakagamiParams& ris_user, int order,
                      CascadeMomentRule rule = CascadeMomentRule::IndependentElements);

GammaParams gamma_from_moments(const MomentPair& m);

/// Raw moments of Z = (|h| + G)^2.
MomentPair effective_power_moments(const RisLink& link,
                                   CascadeMomentRule rule = CascadeMomentRule::IndependentElements);

/// Moments of a*Z + b*|h|^2 with Z independent of the Nakagami interferer h.
MomentPair weighted_sum_moments(double a, const MomentPair& z, double b,
                                const NakagamiParams& interferer);

GammaParams weighted_sum_gamma(double a, const GammaParams& z, double b,
                               const NakagamiParams& interferer);

/// Moments of X + c for constant c.
MomentPair shift_moments(const MomentPair& x, double c);

/// Center user: serving RIS link plus one interfering BS, transmit SNR rho = P / sigma^2.
struct CenterUserModel {
  RisLink serving;
  NakagamiParams interferer;
  double rho = 1.0;
  double zeta_center = 0.3;
  double zeta_edge = 0.7;
  CascadeMomentRule rule = CascadeMomentRule::IndependentElements;
};

/// Edge user served jointly by two BSs through their RIS element groups.
struct EdgeUserModel {
  std::array<RisLink, 2> serving;
  double rho = 1.0;
  std::array<double, 2> zeta_center{0.3, 0.3};
  std::array<double, 2> zeta_edge{0.7, 0.7};
  CascadeMomentRule rule = CascadeMomentRule::IndependentElements;
};

BetaPrimeParams sinr_dist_center_decode_edge(const CenterUserModel& m);
BetaPrimeParams sinr_dist_center_own(const CenterUserModel& m);
BetaPrimeParams sinr_dist_edge(const EdgeUserModel& m);
/// Edge SINR with the noise term dropped from the denominator.
BetaPrimeParams sinr_dist_edge_high_snr(const EdgeUserModel& m);

double beta_prime_cdf(const BetaPrimeParams& p, double x);
double beta_prime_quantile(const BetaPrimeParams& p, double prob);

/// E[log2(1 + X)] by adaptive quadrature.
double ergodic_rate(const BetaPrimeParams& p);
double ergodic_rate_high_snr(const EdgeUserModel& m);

double outage_edge_closed(const BetaPrimeParams& edge, double lambda_th);
double outage_center_closed(const CenterUserModel& m, double lambda_edge, double lambda_center);

}  // namespace riscomp
