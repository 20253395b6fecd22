#include "riscomp/ris.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "riscomp/error.hpp"

namespace riscomp {

double wrap_phase(double phi) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double w = std::fmod(phi + std::numbers::pi, two_pi);
  if (w < 0.0) w += two_pi;
  w -= std::numbers::pi;
  if (w >= std::numbers::pi) w -= two_pi;  // fmod rounding at the upper edge
  return w;
}

PhaseMatrix PhaseMatrix::unit(std::vector<double> phases) {
  const std::size_t k = phases.size();
  return uniform(k, 1.0, std::move(phases));
}

PhaseMatrix PhaseMatrix::uniform(std::size_t k, double amplitude, std::vector<double> phases) {
  if (phases.size() != k) throw ShapeError("PhaseMatrix: phase count differs from K");
  PhaseMatrix m;
  m.amplitudes.assign(k, amplitude);
  m.phases = std::move(phases);
  for (auto& p : m.phases) p = wrap_phase(p);
  return m;
}

Complex PhaseMatrix::entry(std::size_t k) const { return std::polar(amplitudes[k], phases[k]); }

void PhaseMatrix::validate() const {
  if (amplitudes.size() != phases.size()) throw ShapeError("PhaseMatrix: amplitude/phase length");
  for (double a : amplitudes)
    if (!(a >= 0.0 && a <= 1.0)) throw InvariantError("PhaseMatrix: amplitude outside [0, 1]");
}

StarRisConfig StarRisConfig::even(std::size_t k, double beta_t) {
  StarRisConfig c;
  c.k_elements = k;
  c.beta_t = beta_t;
  c.beta_r = 1.0 - beta_t;
  c.phases_t.assign(k, 0.0);
  c.phases_r.assign(k, 0.0);
  c.assignment = {k - k / 2, k / 2};
  return c;
}

void StarRisConfig::validate() const {
  if (beta_t < 0.0 || beta_t > 1.0 || beta_r < 0.0 || beta_r > 1.0)
    throw InvariantError("STAR-RIS: amplitude shares must lie in [0, 1]");
  if (std::abs(beta_t + beta_r - 1.0) > 1e-12)
    throw InvariantError("STAR-RIS: beta_t + beta_r must equal 1 (energy conservation)");
  if (phases_t.size() != k_elements || phases_r.size() != k_elements)
    throw ShapeError("STAR-RIS: phase vectors must have K entries");
  if (assignment[0] + assignment[1] != k_elements)
    throw InvariantError("STAR-RIS: element assignment must sum to K");
}

EsMatrices es_matrices(const StarRisConfig& cfg) {
  cfg.validate();
  return {PhaseMatrix::uniform(cfg.k_elements, std::sqrt(cfg.beta_t), cfg.phases_t),
          PhaseMatrix::uniform(cfg.k_elements, std::sqrt(cfg.beta_r), cfg.phases_r)};
}

Complex cascade_term(std::span<const Complex> h_ris_user, std::span<const Complex> h_bs_ris,
                     std::size_t k) {
  return std::conj(h_ris_user[k]) * h_bs_ris[k];
}

Complex effective_channel(Complex h_direct, std::span<const Complex> h_ris_user,
                          const PhaseMatrix& theta, std::span<const Complex> h_bs_ris) {
  if (h_ris_user.size() != theta.size() || h_bs_ris.size() != theta.size() ||
      theta.amplitudes.size() != theta.size())
    throw ShapeError("effective_channel: vector lengths " + std::to_string(h_ris_user.size()) +
                     "/" + std::to_string(theta.size()) + "/" + std::to_string(h_bs_ris.size()));
  Complex h = h_direct;
  for (std::size_t k = 0; k < theta.size(); ++k)
    h += cascade_term(h_ris_user, h_bs_ris, k) * theta.entry(k);
  return h;
}

namespace {

void check_lengths(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) throw ShapeError("phase design: channel vectors differ in length");
}

double safe_arg(Complex z) { return z == Complex(0.0, 0.0) ? 0.0 : std::arg(z); }

}  // namespace

std::vector<double> eo_phases(Complex h_direct, std::span<const Complex> h_ris_user,
                              std::span<const Complex> h_bs_ris) {
  check_lengths(h_ris_user, h_bs_ris);
  const double target = safe_arg(h_direct);
  std::vector<double> th(h_ris_user.size(), 0.0);
  for (std::size_t k = 0; k < th.size(); ++k) {
    const Complex c = cascade_term(h_ris_user, h_bs_ris, k);
    if (c != Complex(0.0, 0.0)) th[k] = wrap_phase(target - std::arg(c));
  }
  return th;
}

std::vector<double> ec_phases(Complex h_direct, std::span<const Complex> h_ris_user,
                              std::span<const Complex> h_bs_ris) {
  std::vector<double> th = eo_phases(h_direct, h_ris_user, h_bs_ris);
  for (std::size_t k = 0; k < th.size(); ++k)
    if (cascade_term(h_ris_user, h_bs_ris, k) != Complex(0.0, 0.0))
      th[k] = wrap_phase(th[k] + std::numbers::pi);
  return th;
}

ElementSlice element_split(const StarRisConfig& cfg, std::size_t bs) {
  if (bs >= cfg.assignment.size())
    throw DomainError("element_split: BS index " + std::to_string(bs) + " out of range");
  if (cfg.assignment[0] + cfg.assignment[1] != cfg.k_elements)
    throw InvariantError("element_split: assignment must sum to K");
  return {bs == 0 ? 0 : cfg.assignment[0], cfg.assignment[bs]};
}

}  // namespace riscomp
