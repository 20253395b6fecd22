#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "riscomp/channel.hpp"

namespace riscomp {

/// Wraps any angle into [-pi, pi).
double wrap_phase(double phi);

/// Diagonal operator diag(l_k exp(j theta_k)).
struct PhaseMatrix {
  std::vector<double> amplitudes;
  std::vector<double> phases;

  static PhaseMatrix unit(std::vector<double> phases);
  static PhaseMatrix uniform(std::size_t k, double amplitude, std::vector<double> phases);

  std::size_t size() const { return phases.size(); }
  Complex entry(std::size_t k) const;
  void validate() const;
};

/// STAR-RIS with energy splitting. Elements [0, assignment[0]) serve BS 1,
/// the remaining assignment[1] elements serve BS 2.
struct StarRisConfig {
  std::size_t k_elements = 0;
  double beta_t = 0.5;
  double beta_r = 0.5;
  std::vector<double> phases_t;
  std::vector<double> phases_r;
  std::array<std::size_t, 2> assignment{0, 0};

  /// Config with all phases zero and the elements split evenly (extra element to BS 1).
  static StarRisConfig even(std::size_t k, double beta_t);

  void validate() const;
};

struct EsMatrices {
  PhaseMatrix transmission;
  PhaseMatrix reflection;
};

EsMatrices es_matrices(const StarRisConfig& cfg);

/// h_direct + h_ris_user^H Theta h_bs_ris.
Complex effective_channel(Complex h_direct, std::span<const Complex> h_ris_user,
                          const PhaseMatrix& theta, std::span<const Complex> h_bs_ris);

/// conj(h_ris_user[k]) * h_bs_ris[k], the k-th cascade before the phase shift.
Complex cascade_term(std::span<const Complex> h_ris_user, std::span<const Complex> h_bs_ris,
                     std::size_t k);

/// Co-phases every cascade term with h_direct (arg 0 when h_direct = 0).
std::vector<double> eo_phases(Complex h_direct, std::span<const Complex> h_ris_user,
                              std::span<const Complex> h_bs_ris);

/// Anti-phases every cascade term against h_direct.
std::vector<double> ec_phases(Complex h_direct, std::span<const Complex> h_ris_user,
                              std::span<const Complex> h_bs_ris);

struct ElementSlice {
  std::size_t offset = 0;
  std::size_t count = 0;
};

/// Contiguous element range owned by BS `bs` (0-based).
ElementSlice element_split(const StarRisConfig& cfg, std::size_t bs);

}  // namespace riscomp
