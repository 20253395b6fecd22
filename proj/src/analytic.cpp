#include "riscomp/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "riscomp/error.hpp"
#include "riscomp/special.hpp"

namespace riscomp {

double GammaParams::pdf(double x) const {
  if (x < 0.0) return 0.0;
  if (x == 0.0) return shape < 1.0 ? INFINITY : (shape == 1.0 ? 1.0 / scale : 0.0);
  return std::exp((shape - 1.0) * std::log(x) - x / scale - std::lgamma(shape) -
                  shape * std::log(scale));
}

double GammaParams::cdf(double x) const { return regularized_gamma_p(shape, x / scale); }

double BetaPrimeParams::pdf(double x) const {
  if (x <= 0.0) return 0.0;
  const double u = x / scale;
  return std::exp((a - 1.0) * std::log(u) - (a + b) * std::log1p(u) - std::log(scale) -
                  log_beta(a, b));
}

void BetaPrimeParams::validate() const {
  if (!(a > 0.0 && b > 0.0 && scale > 0.0) || !std::isfinite(a) || !std::isfinite(b) ||
      !std::isfinite(scale))
    throw DomainError("beta prime: parameters must be positive and finite (a=" +
                      std::to_string(a) + ", b=" + std::to_string(b) +
                      ", scale=" + std::to_string(scale) + ")");
}

double nakagami_moment(const NakagamiParams& p, int order) {
  if (order < 1 || order > 4)
    throw DomainError("nakagami_moment: order must be 1..4, got " + std::to_string(order));
  if (!(p.m >= 0.5)) throw DomainError("nakagami_moment: m must be >= 0.5");
  if (p.omega == 0.0) return 0.0;
  const double h = 0.5 * order;
  return std::exp(std::lgamma(p.m + h) - std::lgamma(p.m) + h * std::log(p.omega / p.m));
}

double cascade_moment(std::size_t k, double beta, const NakagamiParams& bs_ris,
                      const NakagamiParams& ris_user, int order, CascadeMomentRule rule) {
  if (order < 1 || order > 4)
    throw DomainError("cascade_moment: order must be 1..4, got " + std::to_string(order));
  if (!(beta >= 0.0 && beta <= 1.0)) throw DomainError("cascade_moment: beta outside [0, 1]");
  if (k == 0 || beta == 0.0) return 0.0;

  // Raw moments of one element's product |h_iR||h_Ru|.
  double x[5] = {1.0, 0.0, 0.0, 0.0, 0.0};
  for (int p = 1; p <= order; ++p) x[p] = nakagami_moment(bs_ris, p) * nakagami_moment(ris_user, p);
  const double kk = static_cast<double>(k);
  const double amp = std::pow(beta, 0.5 * order);

  if (rule == CascadeMomentRule::CoherentScaling) return std::pow(kk, order) * amp * x[order];

  const double k1 = kk, k2 = kk * (kk - 1.0), k3 = k2 * (kk - 2.0), k4 = k3 * (kk - 3.0);
  double s = 0.0;
  switch (order) {
    case 1: s = k1 * x[1]; break;
    case 2: s = k1 * x[2] + k2 * x[1] * x[1]; break;
    case 3: s = k1 * x[3] + 3.0 * k2 * x[2] * x[1] + k3 * x[1] * x[1] * x[1]; break;
    case 4:
      s = k1 * x[4] + 4.0 * k2 * x[3] * x[1] + 3.0 * k2 * x[2] * x[2] +
          6.0 * k3 * x[2] * x[1] * x[1] + k4 * x[1] * x[1] * x[1] * x[1];
      break;
  }
  return amp * s;
}

GammaParams gamma_from_moments(const MomentPair& m) {
  const double var = m.variance();
  if (!(m.m1 > 0.0) || !(var > 0.0) || !std::isfinite(var))
    throw FitError("gamma fit: need m1 > 0 and m2 > m1^2 (m1=" + std::to_string(m.m1) +
                   ", m2=" + std::to_string(m.m2) + ")");
  return {m.m1 * m.m1 / var, var / m.m1};
}

MomentPair effective_power_moments(const RisLink& link, CascadeMomentRule rule) {
  double h[5], g[5];
  h[0] = g[0] = 1.0;
  for (int p = 1; p <= 4; ++p) {
    h[p] = nakagami_moment(link.direct, p);
    g[p] = cascade_moment(link.elements, link.beta, link.bs_ris, link.ris_user, p, rule);
  }
  return {h[2] + 2.0 * h[1] * g[1] + g[2],
          h[4] + 4.0 * h[3] * g[1] + 6.0 * h[2] * g[2] + 4.0 * h[1] * g[3] + g[4]};
}

MomentPair weighted_sum_moments(double a, const MomentPair& z, double b,
                                const NakagamiParams& interferer) {
  if (a < 0.0 || b < 0.0) throw DomainError("weighted_sum: weights must be nonnegative");
  const double om = interferer.omega;
  return {a * z.m1 + b * om,
          a * a * z.m2 + 2.0 * a * b * z.m1 * om + b * b * om * om * (1.0 + 1.0 / interferer.m)};
}

GammaParams weighted_sum_gamma(double a, const GammaParams& z, double b,
                               const NakagamiParams& interferer) {
  return gamma_from_moments(weighted_sum_moments(a, z.moments(), b, interferer));
}

MomentPair shift_moments(const MomentPair& x, double c) {
  return {x.m1 + c, x.m2 + 2.0 * c * x.m1 + c * c};
}

namespace {

MomentPair weighted_pair(double rho, double w1, const MomentPair& z1, double w2,
                         const MomentPair& z2) {
  return {rho * (w1 * z1.m1 + w2 * z2.m1),
          rho * rho * (w1 * w1 * z1.m2 + 2.0 * w1 * w2 * z1.m1 * z2.m1 + w2 * w2 * z2.m2)};
}

}  // namespace

BetaPrimeParams sinr_dist_center_decode_edge(const CenterUserModel& m) {
  const MomentPair z = effective_power_moments(m.serving, m.rule);
  const GammaParams gz = gamma_from_moments(z);
  const GammaParams gw = gamma_from_moments(
      shift_moments(weighted_sum_moments(m.rho * m.zeta_center, z, m.rho, m.interferer), 1.0));
  return {gz.shape, gw.shape, m.rho * m.zeta_edge * gz.scale / gw.scale};
}

BetaPrimeParams sinr_dist_center_own(const CenterUserModel& m) {
  const MomentPair z = effective_power_moments(m.serving, m.rule);
  const GammaParams gz = gamma_from_moments(z);
  const GammaParams gw =
      gamma_from_moments(shift_moments(weighted_sum_moments(0.0, z, m.rho, m.interferer), 1.0));
  return {gz.shape, gw.shape, m.rho * m.zeta_center * gz.scale / gw.scale};
}

BetaPrimeParams sinr_dist_edge(const EdgeUserModel& m) {
  const MomentPair z1 = effective_power_moments(m.serving[0], m.rule);
  const MomentPair z2 = effective_power_moments(m.serving[1], m.rule);
  const GammaParams gv = gamma_from_moments(weighted_pair(m.rho, m.zeta_edge[0], z1, m.zeta_edge[1], z2));
  const GammaParams gw = gamma_from_moments(
      shift_moments(weighted_pair(m.rho, m.zeta_center[0], z1, m.zeta_center[1], z2), 1.0));
  return {gv.shape, gw.shape, gv.scale / gw.scale};
}

BetaPrimeParams sinr_dist_edge_high_snr(const EdgeUserModel& m) {
  const MomentPair z1 = effective_power_moments(m.serving[0], m.rule);
  const MomentPair z2 = effective_power_moments(m.serving[1], m.rule);
  const GammaParams gv = gamma_from_moments(weighted_pair(m.rho, m.zeta_edge[0], z1, m.zeta_edge[1], z2));
  const GammaParams gt =
      gamma_from_moments(weighted_pair(m.rho, m.zeta_center[0], z1, m.zeta_center[1], z2));
  return {gv.shape, gt.shape, gv.scale / gt.scale};
}

double beta_prime_cdf(const BetaPrimeParams& p, double x) {
  p.validate();
  if (!(x > 0.0)) return 0.0;
  if (std::isinf(x)) return 1.0;
  const double u = x / p.scale;
  return regularized_beta(p.a, p.b, u / (1.0 + u));
}

double beta_prime_quantile(const BetaPrimeParams& p, double prob) {
  p.validate();
  const double psi = inverse_regularized_beta(p.a, p.b, prob);
  if (psi >= 1.0) return INFINITY;
  return p.scale * psi / (1.0 - psi);
}

double ergodic_rate(const BetaPrimeParams& p) {
  p.validate();
  // Seed the partition at quantiles so a concentrated law is not stepped over.
  std::vector<double> bp;
  for (double q : {1e-9, 1e-6, 1e-3, 0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99, 0.999, 1 - 1e-6, 1 - 1e-9}) {
    const double x = beta_prime_quantile(p, q);
    if (std::isfinite(x) && x > 0.0) bp.push_back(x / (1.0 + x));
  }
  QuadratureOptions opt;
  opt.abs_tol = 1e-13;
  opt.rel_tol = 1e-10;
  const auto r = integrate_half_line([&p](double x) { return std::log2(1.0 + x) * p.pdf(x); }, opt, bp);
  if (!r.converged && r.abs_error > 1e-8 * std::abs(r.value))
    throw NumericError("ergodic_rate: quadrature did not reach 1e-8 relative accuracy");
  return r.value;
}

double ergodic_rate_high_snr(const EdgeUserModel& m) {
  return ergodic_rate(sinr_dist_edge_high_snr(m));
}

double outage_edge_closed(const BetaPrimeParams& edge, double lambda_th) {
  return beta_prime_cdf(edge, lambda_th);
}

double outage_center_closed(const CenterUserModel& m, double lambda_edge, double lambda_center) {
  const BetaPrimeParams cf = sinr_dist_center_decode_edge(m);
  const BetaPrimeParams c = sinr_dist_center_own(m);
  const double p1 = beta_prime_cdf(cf, lambda_edge);
  // I_{1-psi1}(k_W, k_Z) is the complement of P1.
  const double p2 = (1.0 - p1) * beta_prime_cdf(c, lambda_center);
  const GammaParams gz = gamma_from_moments(effective_power_moments(m.serving, m.rule));
  const double noise_only =
      lambda_center > 0.0 ? regularized_gamma_p(gz.shape, lambda_center / (m.rho * m.zeta_center * gz.scale))
                          : 0.0;
  return std::max(p1 + p2, noise_only);
}

}  // namespace riscomp
