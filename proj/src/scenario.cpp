#include "riscomp/scenario.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "riscomp/error.hpp"

namespace riscomp {

void NetworkScenario::validate() const {
  for (double a : {alpha_bs_center, alpha_bs_edge, alpha_bs_ris, alpha_ris_center, alpha_ris_edge,
                   alpha_interference})
    if (!(a >= 2.0)) throw DomainError("scenario: path-loss exponents must be >= 2");
  if (!(rho_o > 0.0)) throw DomainError("scenario: rho_o must be positive");
  if (!(m_direct >= 0.5 && m_ris >= 0.5)) throw DomainError("scenario: Nakagami m must be >= 0.5");
  if (!(tx_power >= 0.0)) throw DomainError("scenario: transmit power must be >= 0");
  if (!(noise_power > 0.0)) throw DomainError("scenario: noise power must be positive");
  if (!(beta_t >= 0.0 && beta_t <= 1.0)) throw InvariantError("scenario: beta_t outside [0, 1]");
  if (assignment[0] + assignment[1] != k_elements)
    throw InvariantError("scenario: element assignment must sum to K");
  noma_pair().validate();
  auto check_d = [](const Vec3& a, const Vec3& b, const char* what) {
    if (distance(a, b) < 1.0)
      throw DomainError(std::string("scenario: ") + what + " closer than the 1 m reference distance");
  };
  for (std::size_t i = 0; i < 2; ++i) {
    check_d(bs[i], center_users[i], "BS and center user");
    check_d(bs[1 - i], center_users[i], "interfering BS and center user");
    check_d(bs[i], edge_user, "BS and edge user");
    check_d(bs[i], ris, "BS and RIS");
    check_d(ris, center_users[i], "RIS and center user");
  }
  check_d(ris, edge_user, "RIS and edge user");
}

StarRisConfig NetworkScenario::ris_config() const {
  StarRisConfig c = StarRisConfig::even(k_elements, beta_t);
  c.beta_r = beta_r();
  c.assignment = assignment;
  return c;
}

double NetworkScenario::omega(const Vec3& a, const Vec3& b, double alpha) const {
  return path_gain({rho_o, alpha}, distance(a, b));
}

NakagamiParams NetworkScenario::direct_center(std::size_t i) const {
  return {m_direct, omega(bs[i], center_users[i], alpha_bs_center)};
}
NakagamiParams NetworkScenario::interferer_center(std::size_t i) const {
  return {m_direct, omega(bs[1 - i], center_users[i], alpha_interference)};
}
NakagamiParams NetworkScenario::direct_edge(std::size_t i) const {
  return {m_direct, omega(bs[i], edge_user, alpha_bs_edge)};
}
NakagamiParams NetworkScenario::bs_ris(std::size_t i) const {
  return {m_ris, omega(bs[i], ris, alpha_bs_ris)};
}
NakagamiParams NetworkScenario::ris_center(std::size_t i) const {
  return {m_ris, omega(ris, center_users[i], alpha_ris_center)};
}
NakagamiParams NetworkScenario::ris_edge() const {
  return {m_ris, omega(ris, edge_user, alpha_ris_edge)};
}

CenterUserModel NetworkScenario::center_model(std::size_t i) const {
  CenterUserModel m;
  m.serving = {direct_center(i), assignment[i], beta_r(), bs_ris(i), ris_center(i)};
  m.interferer = interferer_center(i);
  m.rho = rho();
  m.zeta_center = zeta_center;
  m.zeta_edge = zeta_edge;
  m.rule = rule;
  return m;
}

EdgeUserModel NetworkScenario::edge_model() const {
  EdgeUserModel m;
  for (std::size_t i = 0; i < 2; ++i)
    m.serving[i] = {direct_edge(i), assignment[i], beta_t, bs_ris(i), ris_edge()};
  m.rho = rho();
  m.zeta_center = {zeta_center, zeta_center};
  m.zeta_edge = {zeta_edge, zeta_edge};
  m.rule = rule;
  return m;
}

namespace {

struct Gains {
  std::array<double, 2> center{};
  std::array<double, 2> interference{};
  std::array<double, 2> edge{};
};

Gains nakagami_gains(const NetworkScenario& s, Rng& rng) {
  Gains g;
  const double sb_r = std::sqrt(s.beta_r()), sb_t = std::sqrt(s.beta_t);
  const NakagamiParams re = s.ris_edge();
  for (std::size_t i = 0; i < 2; ++i) {
    const NakagamiParams br = s.bs_ris(i), rc = s.ris_center(i);
    const double hc = sample_nakagami(s.direct_center(i), rng);
    const double hi = sample_nakagami(s.interferer_center(i), rng);
    const double hf = sample_nakagami(s.direct_edge(i), rng);
    double gc = 0.0, gf = 0.0;
    for (std::size_t k = 0; k < s.assignment[i]; ++k) {
      const double a = sample_nakagami(br, rng);
      gc += a * sample_nakagami(rc, rng);
      gf += a * sample_nakagami(re, rng);
    }
    const double zc = hc + sb_r * gc, zf = hf + sb_t * gf;
    g.center[i] = zc * zc;
    g.interference[i] = hi * hi;
    g.edge[i] = zf * zf;
  }
  return g;
}

Complex scaled_rayleigh(double omega, Rng& rng) { return std::sqrt(omega) * sample_rayleigh(rng); }

std::vector<Complex> scaled_rician(std::size_t k, double omega, double kappa, double aoa, Rng& rng) {
  auto v = sample_rician_vector(k, {kappa, aoa}, rng);
  const double a = std::sqrt(omega);
  for (auto& x : v) x *= a;
  return v;
}

Gains rician_gains(const NetworkScenario& s, Rng& rng) {
  const std::size_t k = s.k_elements;
  std::array<Complex, 2> hc, hi, hf;
  std::array<std::vector<Complex>, 2> a, bc;
  for (std::size_t i = 0; i < 2; ++i) {
    hc[i] = scaled_rayleigh(s.direct_center(i).omega, rng);
    hi[i] = scaled_rayleigh(s.interferer_center(i).omega, rng);
    hf[i] = scaled_rayleigh(s.direct_edge(i).omega, rng);
    a[i] = scaled_rician(k, s.bs_ris(i).omega, s.kappa_bs_ris, array_aoa(s.bs[i], s.ris), rng);
    bc[i] = scaled_rician(k, s.ris_center(i).omega, s.kappa_ris_center,
                          array_aoa(s.ris, s.center_users[i]), rng);
  }
  const auto bf = scaled_rician(k, s.ris_edge().omega, s.kappa_ris_edge, array_aoa(s.ris, s.edge_user), rng);

  // Each BS's element group is co-phased toward its own center user on the
  // reflection side and toward the edge user on the transmission side.
  StarRisConfig cfg = s.ris_config();
  for (std::size_t i = 0; i < 2; ++i) {
    const ElementSlice sl = element_split(cfg, i);
    if (sl.count == 0) continue;
    std::span<const Complex> ai(a[i].data() + sl.offset, sl.count);
    const auto pr = eo_phases(hc[i], std::span<const Complex>(bc[i].data() + sl.offset, sl.count), ai);
    const auto pt = eo_phases(hf[i], std::span<const Complex>(bf.data() + sl.offset, sl.count), ai);
    for (std::size_t j = 0; j < sl.count; ++j) {
      cfg.phases_r[sl.offset + j] = pr[j];
      cfg.phases_t[sl.offset + j] = pt[j];
    }
  }
  const EsMatrices es = es_matrices(cfg);
  Gains g;
  for (std::size_t i = 0; i < 2; ++i) {
    g.center[i] = std::norm(effective_channel(hc[i], bc[i], es.reflection, a[i]));
    g.interference[i] = std::norm(hi[i]);
    g.edge[i] = std::norm(effective_channel(hf[i], bf, es.transmission, a[i]));
  }
  return g;
}

}  // namespace

StarTrial sample_star_trial(const NetworkScenario& s, Rng& rng) {
  const Gains g = s.fading == FadingModel::Nakagami ? nakagami_gains(s, rng) : rician_gains(s, rng);
  const NomaPair pair = s.noma_pair();
  const std::array<NomaPair, 2> both{pair, pair};
  StarTrial t;
  for (std::size_t i = 0; i < 2; ++i) {
    LinkBudget b{{g.center[i]}, {{pair.tx_power, g.interference[i]}}, s.noise_power};
    t.center_decode_edge[i] = sinr_center_decode_edge(std::span(&pair, 1), b);
    t.center_own[i] = sinr_center_own(std::span(&pair, 1), 0, b);
  }
  t.edge = sinr_edge_comp(both, LinkBudget{{g.edge[0], g.edge[1]}, {}, s.noise_power});
  t.edge_no_comp = sinr_edge_comp(std::span(&pair, 1),
                                  LinkBudget{{g.edge[0]}, {{pair.tx_power, g.edge[1]}}, s.noise_power});
  return t;
}

}  // namespace riscomp
