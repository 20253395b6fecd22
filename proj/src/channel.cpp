#include "riscomp/channel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "riscomp/error.hpp"

namespace riscomp {

void PathLossModel::validate() const {
  if (!(rho_o > 0.0)) throw DomainError("path loss: rho_o must be positive");
  if (!(alpha >= 2.0)) throw DomainError("path loss: alpha must be >= 2");
}

void NakagamiParams::validate() const {
  if (!(m >= 0.5)) throw DomainError("nakagami: m must be >= 0.5, got " + std::to_string(m));
  if (!(omega > 0.0)) throw DomainError("nakagami: omega must be positive");
}

void RicianParams::validate() const {
  if (!(kappa >= 0.0)) throw DomainError("rician: kappa must be >= 0");
  if (!(aoa >= -std::numbers::pi && aoa < std::numbers::pi))
    throw DomainError("rician: aoa must lie in [-pi, pi)");
}

double path_gain(const PathLossModel& model, double d) {
  if (!(d >= 1.0)) throw DomainError("path_gain: distance below the 1 m reference");
  return model.rho_o / std::pow(d, model.alpha);
}

Complex sample_rayleigh(Rng& rng) {
  const double s = std::sqrt(0.5);
  const double re = rng.normal();
  const double im = rng.normal();
  return {s * re, s * im};
}

double sample_nakagami(const NakagamiParams& p, Rng& rng) {
  return std::sqrt(rng.gamma(p.m, p.omega / p.m));
}

std::vector<Complex> los_steering(std::size_t k, double aoa) {
  std::vector<Complex> a(k);
  const double step = std::numbers::pi * std::sin(aoa);
  for (std::size_t i = 0; i < k; ++i) a[i] = std::polar(1.0, static_cast<double>(i) * step);
  return a;
}

std::vector<Complex> sample_rician_vector(std::size_t k, const RicianParams& p, Rng& rng) {
  std::vector<Complex> h = los_steering(k, p.aoa);
  if (std::isinf(p.kappa)) return h;
  const double w_los = std::sqrt(p.kappa / (1.0 + p.kappa));
  const double w_nlos = std::sqrt(1.0 / (1.0 + p.kappa));
  for (auto& x : h) x = w_los * x + w_nlos * sample_rayleigh(rng);
  return h;
}

}  // namespace riscomp
