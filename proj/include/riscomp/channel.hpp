#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "riscomp/rng.hpp"

namespace riscomp {

using Complex = std::complex<double>;

/// Distance-based path loss: gain(d) = rho_o / d^alpha for d >= 1 m.
struct PathLossModel {
  double rho_o = 1e-3;
  double alpha = 3.0;

  void validate() const;
};

/// Nakagami-m magnitude; omega is E|h|^2.
struct NakagamiParams {
  double m = 1.0;
  double omega = 1.0;

  void validate() const;
};

/// Rician vector channel. kappa is linear and may be +inf (pure LoS).
struct RicianParams {
  double kappa = 0.0;
  double aoa = 0.0;

  void validate() const;
};

double path_gain(const PathLossModel& model, double d);

/// CN(0, 1): E|v|^2 = 1.
Complex sample_rayleigh(Rng& rng);

double sample_nakagami(const NakagamiParams& p, Rng& rng);

/// Uniform linear array response: k-th entry exp(j (k-1) pi sin(aoa)).
std::vector<Complex> los_steering(std::size_t k, double aoa);

/// sqrt(kappa/(1+kappa)) * LoS + sqrt(1/(1+kappa)) * CN(0, I). Unit power per entry.
std::vector<Complex> sample_rician_vector(std::size_t k, const RicianParams& p, Rng& rng);

}  // namespace riscomp
