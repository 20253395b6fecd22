#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "riscomp/channel.hpp"
#include "riscomp/noma.hpp"
#include "riscomp/ris.hpp"
#include "riscomp/rng.hpp"
#include "riscomp/units.hpp"

namespace riscomp {

/// Power consumption of the multi-cell network. P_R = k_elements * element_power
/// is charged to every cooperating cell whose RIS is switched on.
struct PowerModel {
  double amp_efficiency = 0.4;
  double static_power = 1.0;         // P_Q, watts
  double element_power = 0.0;        // P_ele, watts
  std::size_t k_elements = 0;
  std::vector<double> tx_power;      // P_i per BS, watts

  double ris_power() const { return static_cast<double>(k_elements) * element_power; }
  void validate() const;
};

enum class RisMode { Off, Random, EO, EC };

/// Which BSs run joint transmission for the edge user and how each RIS is driven.
struct CoopStructure {
  std::size_t total_cells = 0;
  std::vector<std::size_t> cooperating;   // 0-based BS indices
  std::vector<RisMode> ris_mode;          // one per BS
  /// When set, every switched-on RIS splits its elements: the first
  /// ceil(split*K) cancel, the rest enhance.
  std::optional<double> co_eo_split;

  bool is_cooperating(std::size_t bs) const;
  void validate() const;
};

/// Network-wide RIS policy used by the experiments.
enum class NetworkMode {
  NoRis,    // all RIS off, no RIS power
  Random,   // every RIS random
  EO,       // cooperating RIS enhance, the others random
  EC,       // cooperating RIS enhance, the others cancel
};

/// BSs 0..j-1 cooperate.
CoopStructure make_coop(std::size_t cells, std::size_t j, NetworkMode mode);

/// Channels towards the single edge user, one RIS per BS.
struct EdgeChannels {
  std::vector<Complex> direct;                     // h_{i,f}
  std::vector<std::vector<Complex>> bs_ris;        // h_{i,R_i}
  std::vector<std::vector<Complex>> ris_user;      // h_{R_i,f}

  std::size_t cells() const { return direct.size(); }
  void validate(std::size_t cells) const;
};

double outage_rate(double rate, double outage_prob);

/// Sum over cells of R_out_c / (P_i/lambda + P_Q) plus, for every cooperating
/// BS, R_out_f / (P_j/lambda + P_Q + P_R). The edge term repeats per
/// cooperating BS as in the definition.
double energy_efficiency(std::span<const double> center_rates,
                         std::span<const double> center_outage, double edge_rate,
                         double edge_outage, const PowerModel& pm, const CoopStructure& cs);

/// One phase matrix per RIS. Random mode consumes uniform phases from `rng`.
std::vector<PhaseMatrix> assign_pbf(const CoopStructure& cs, const EdgeChannels& ch, Rng& rng);

/// First ceil(split*K) elements anti-phased, the remainder co-phased.
PhaseMatrix co_eo_split_assign(double split, Complex h_direct, std::span<const Complex> h_ris_user,
                               std::span<const Complex> h_bs_ris);

/// Number of cancelling elements for a split, robust to 0.1*70 = 7.0000000000000009.
std::size_t co_elements(double split, std::size_t k);

/// Symmetric I-cell layout: every BS sees its center user at d_center, the
/// other cells' center users at d_cross, the edge user at d_edge and its own
/// RIS at d_bs_ris; every RIS sits d_ris_edge from the edge user.
struct MultiCellScenario {
  std::size_t cells = 6;
  std::size_t cooperating = 4;
  std::size_t k_elements = 70;
  double tx_power_dbm = 0.0;
  double bandwidth_hz = 10e6;
  double noise_figure_db = 0.0;
  double rho_o = 1e-3;

  double d_center = 50.0;
  double d_cross = 200.0;
  double d_edge = 150.0;
  double d_bs_ris = 75.0;
  double d_ris_edge = 75.0;

  double alpha_ris = 2.7;      // BS-RIS and RIS-edge hops
  double alpha_bs = 3.0;       // serving BS to its center user
  double alpha_edge = 3.5;     // every BS to the edge user
  double alpha_ici = 4.0;      // a BS to another cell's center user

  double kappa = db_to_linear(3.0);
  double aoa_bs_ris = 0.0;
  double aoa_ris_edge = 0.0;

  double zeta_edge = 0.7;
  RateThresholds thresholds{1.0, 0.5};

  double amp_efficiency = 0.4;
  double static_power_dbm = 30.0;
  double element_power_dbm = 5.0;

  double tx_power() const;
  double noise_power() const;
  PowerModel power_model() const;
  void validate() const;
};

/// One fading realization of the whole network.
struct MultiCellTrial {
  std::vector<std::vector<Complex>> center;   // center[k][i]: BS k to center user of cell i
  EdgeChannels edge;
  std::vector<std::vector<double>> random_phases;  // per RIS
};

MultiCellTrial sample_multicell_trial(const MultiCellScenario& s, Rng& rng);

enum class Access { Noma, Oma };

/// A curve in a figure: RIS policy, access scheme and whether CoMP is used
/// (without CoMP only BS 0 serves the edge user).
struct Scheme {
  std::string name;
  NetworkMode ris = NetworkMode::EC;
  Access access = Access::Noma;
  bool comp = true;
};

std::vector<Scheme> default_schemes();   // no-ris, random, eo, ec

/// Per-user instantaneous outcome of one trial.
struct UserOutcome {
  std::vector<double> center_rate;
  std::vector<std::uint8_t> center_outage;
  double edge_rate = 0.0;
  std::uint8_t edge_outage = 0;
};

/// Edge effective channel gains |H_i|^2 under a phase assignment.
std::vector<double> edge_gains(const MultiCellTrial& t, std::span<const PhaseMatrix> phases);

UserOutcome evaluate_trial(const MultiCellScenario& s, const CoopStructure& cs, Access access,
                           const MultiCellTrial& t);

/// Means over the trials; rates are ergodic, outage is a frequency.
struct PointStats {
  std::vector<double> center_rate;
  std::vector<double> center_outage;
  double edge_rate = 0.0;
  double edge_outage = 0.0;
  double energy_efficiency = 0.0;
  double outage_sum_rate = 0.0;
};

/// Cooperation structure a scheme induces on a scenario.
CoopStructure scheme_coop(const MultiCellScenario& s, const Scheme& sc,
                          std::optional<double> split = std::nullopt);

/// Monte Carlo estimate for every scheme at one scenario. Trials share their
/// channel draws across schemes. Parallel over trials; deterministic.
std::vector<PointStats> evaluate_point(const MultiCellScenario& s, std::span<const Scheme> schemes,
                                       std::size_t n_trials, std::uint64_t seed,
                                       std::optional<double> split = std::nullopt);
std::vector<PointStats> evaluate_point_serial(const MultiCellScenario& s,
                                              std::span<const Scheme> schemes,
                                              std::size_t n_trials, std::uint64_t seed,
                                              std::optional<double> split = std::nullopt);

enum class SweepAxis { Cooperating, Elements, TxPowerDbm, RateThreshold, Split };

std::string axis_name(SweepAxis a);

struct SweepSpec {
  std::vector<SweepAxis> axes;                 // Cartesian product, first axis outermost
  std::vector<std::vector<double>> values;     // one list per axis
  std::vector<Scheme> schemes = default_schemes();
  std::size_t n_trials = 10000;
  std::uint64_t seed = 1;

  void validate() const;
};

struct SweepRow {
  std::vector<double> axis;
  std::string scheme;
  PointStats stats;
};

struct SweepTable {
  std::vector<SweepAxis> axes;
  std::vector<SweepRow> rows;
};

/// Every grid point reuses the same master seed, so curves along an axis
/// are compared on common random numbers.
SweepTable ee_sweep(const MultiCellScenario& base, const SweepSpec& spec);

/// Columns: axis values, scheme, ee, outage_sum_rate, center outages, edge outage.
void write_sweep_csv(std::ostream& os, const SweepTable& t);

}  // namespace riscomp
