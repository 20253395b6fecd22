#pragma once

#include <array>
#include <cstddef>

#include "riscomp/analytic.hpp"
#include "riscomp/channel.hpp"
#include "riscomp/geometry.hpp"
#include "riscomp/noma.hpp"
#include "riscomp/ris.hpp"
#include "riscomp/units.hpp"

namespace riscomp {

enum class FadingModel {
  /// Nakagami magnitudes with the cascade accumulated in magnitude (ideal co-phasing).
  Nakagami,
  /// Rayleigh direct links and Rician RIS links with complex phases and EO phase design.
  RayleighRician,
};

/// Two BSs, one center user each, one shared edge user and a STAR-RIS
/// between the cells. All fields are linear scale.
struct NetworkScenario {
  std::array<Vec3, 2> bs{{{-50.0, 0.0, 25.0}, {50.0, 0.0, 25.0}}};
  std::array<Vec3, 2> center_users{{{-40.0, 18.0, 1.0}, {30.0, 22.0, 1.0}}};
  Vec3 edge_user{0.0, 35.0, 1.0};
  Vec3 ris{0.0, 25.0, 5.0};

  double alpha_bs_center = 3.0;
  double alpha_bs_edge = 3.5;
  double alpha_bs_ris = 3.0;
  double alpha_ris_center = 2.7;
  double alpha_ris_edge = 2.3;
  double alpha_interference = 4.0;
  double rho_o = 1e-3;

  double m_direct = 1.0;
  double m_ris = 2.0;
  double kappa_bs_ris = db_to_linear(3.0);
  double kappa_ris_center = db_to_linear(3.0);
  double kappa_ris_edge = db_to_linear(4.0);

  double tx_power = dbm_to_watts(-10.0);  // per BS
  double noise_power = noise_power_watts(1e6, 12.0);
  double zeta_center = 0.3;
  double zeta_edge = 0.7;

  std::size_t k_elements = 34;
  double beta_t = 0.5;
  std::array<std::size_t, 2> assignment{17, 17};

  double lambda_center = 1.0;  // SINR thresholds
  double lambda_edge = 1.0;

  FadingModel fading = FadingModel::Nakagami;
  CascadeMomentRule rule = CascadeMomentRule::IndependentElements;

  void validate() const;

  double beta_r() const { return 1.0 - beta_t; }
  double rho() const { return tx_power / noise_power; }
  NomaPair noma_pair() const { return {zeta_center, zeta_edge, tx_power}; }
  RateThresholds thresholds() const { return RateThresholds::from_sinr(lambda_center, lambda_edge); }
  StarRisConfig ris_config() const;

  double omega(const Vec3& a, const Vec3& b, double alpha) const;
  NakagamiParams direct_center(std::size_t i) const;
  NakagamiParams interferer_center(std::size_t i) const;
  NakagamiParams direct_edge(std::size_t i) const;
  NakagamiParams bs_ris(std::size_t i) const;
  NakagamiParams ris_center(std::size_t i) const;
  NakagamiParams ris_edge() const;

  CenterUserModel center_model(std::size_t i) const;
  EdgeUserModel edge_model() const;
};

/// SINRs of one channel realization.
struct StarTrial {
  std::array<double, 2> center_own{};
  std::array<double, 2> center_decode_edge{};
  double edge = 0.0;
  double edge_no_comp = 0.0;
};

StarTrial sample_star_trial(const NetworkScenario& s, Rng& rng);

}  // namespace riscomp
