#include "riscomp/energy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "riscomp/error.hpp"

namespace riscomp {

void PowerModel::validate() const {
  if (!(amp_efficiency > 0.0 && amp_efficiency <= 1.0))
    throw InvariantError("power model: amplifier efficiency must lie in (0, 1]");
  if (!(static_power > 0.0)) throw InvariantError("power model: static power must be positive");
  if (!(element_power > 0.0)) throw InvariantError("power model: element power must be positive");
  for (double p : tx_power)
    if (!(p > 0.0)) throw InvariantError("power model: transmit power must be positive");
}

bool CoopStructure::is_cooperating(std::size_t bs) const {
  return std::find(cooperating.begin(), cooperating.end(), bs) != cooperating.end();
}

void CoopStructure::validate() const {
  if (cooperating.empty()) throw InvariantError("coop: at least one cooperating BS");
  std::vector<std::size_t> sorted = cooperating;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw InvariantError("coop: duplicate cooperating BS");
  if (sorted.back() >= total_cells) throw InvariantError("coop: BS index outside the network");
  if (ris_mode.size() != total_cells) throw ShapeError("coop: one RIS mode per BS required");
  if (co_eo_split && !(*co_eo_split >= 0.0 && *co_eo_split <= 1.0))
    throw InvariantError("coop: CO/EO split must lie in [0, 1]");
}

CoopStructure make_coop(std::size_t cells, std::size_t j, NetworkMode mode) {
  if (j < 1 || j > cells) throw DomainError("coop: need 1 <= J <= I");
  CoopStructure cs;
  cs.total_cells = cells;
  for (std::size_t i = 0; i < j; ++i) cs.cooperating.push_back(i);
  cs.ris_mode.resize(cells);
  for (std::size_t i = 0; i < cells; ++i) {
    const bool coop = i < j;
    switch (mode) {
      case NetworkMode::NoRis: cs.ris_mode[i] = RisMode::Off; break;
      case NetworkMode::Random: cs.ris_mode[i] = RisMode::Random; break;
      case NetworkMode::EO: cs.ris_mode[i] = coop ? RisMode::EO : RisMode::Random; break;
      case NetworkMode::EC: cs.ris_mode[i] = coop ? RisMode::EO : RisMode::EC; break;
    }
  }
  return cs;
}

void EdgeChannels::validate(std::size_t cells) const {
  if (direct.size() != cells || bs_ris.size() != cells || ris_user.size() != cells)
    throw ShapeError("edge channels: one entry per RIS required");
  for (std::size_t i = 0; i < cells; ++i)
    if (bs_ris[i].size() != ris_user[i].size())
      throw ShapeError("edge channels: BS-RIS and RIS-user lengths differ");
}

double outage_rate(double rate, double outage_prob) {
  if (!(outage_prob >= 0.0 && outage_prob <= 1.0))
    throw DomainError("outage rate: probability outside [0, 1]");
  return (1.0 - outage_prob) * rate;
}

double energy_efficiency(std::span<const double> center_rates,
                         std::span<const double> center_outage, double edge_rate,
                         double edge_outage, const PowerModel& pm, const CoopStructure& cs) {
  pm.validate();
  cs.validate();
  const std::size_t n = cs.total_cells;
  if (center_rates.size() != n || center_outage.size() != n || pm.tx_power.size() != n)
    throw ShapeError("energy efficiency: one rate, outage and power per cell required");
  double ee = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    ee += outage_rate(center_rates[i], center_outage[i]) /
          (pm.tx_power[i] / pm.amp_efficiency + pm.static_power);
  const double edge = outage_rate(edge_rate, edge_outage);
  for (std::size_t j : cs.cooperating) {
    const double ris = cs.ris_mode[j] == RisMode::Off ? 0.0 : pm.ris_power();
    ee += edge / (pm.tx_power[j] / pm.amp_efficiency + pm.static_power + ris);
  }
  return ee;
}

std::size_t co_elements(double split, std::size_t k) {
  if (!(split >= 0.0 && split <= 1.0)) throw DomainError("CO/EO split outside [0, 1]");
  const double x = split * static_cast<double>(k);
  const double r = std::round(x);
  const double n = std::abs(x - r) <= 1e-9 * std::max(1.0, x) ? r : std::ceil(x);
  return std::min(k, static_cast<std::size_t>(n));
}

PhaseMatrix co_eo_split_assign(double split, Complex h_direct, std::span<const Complex> h_ris_user,
                               std::span<const Complex> h_bs_ris) {
  const std::size_t co = co_elements(split, h_ris_user.size());
  std::vector<double> th = eo_phases(h_direct, h_ris_user, h_bs_ris);
  for (std::size_t k = 0; k < co; ++k) th[k] = wrap_phase(th[k] + std::numbers::pi);
  return PhaseMatrix::unit(std::move(th));
}

namespace {

std::vector<PhaseMatrix> assign_with(const CoopStructure& cs, const EdgeChannels& ch,
                                     const std::vector<std::vector<double>>& random_phases) {
  cs.validate();
  ch.validate(cs.total_cells);
  std::vector<PhaseMatrix> out;
  out.reserve(cs.total_cells);
  for (std::size_t i = 0; i < cs.total_cells; ++i) {
    const auto& ru = ch.ris_user[i];
    const auto& br = ch.bs_ris[i];
    const RisMode mode = cs.ris_mode[i];
    if (mode == RisMode::Off) {
      out.push_back(PhaseMatrix::uniform(ru.size(), 0.0, std::vector<double>(ru.size(), 0.0)));
    } else if (cs.co_eo_split) {
      out.push_back(co_eo_split_assign(*cs.co_eo_split, ch.direct[i], ru, br));
    } else if (mode == RisMode::Random) {
      out.push_back(PhaseMatrix::unit(random_phases[i]));
    } else if (mode == RisMode::EO) {
      out.push_back(PhaseMatrix::unit(eo_phases(ch.direct[i], ru, br)));
    } else {
      out.push_back(PhaseMatrix::unit(ec_phases(ch.direct[i], ru, br)));
    }
  }
  return out;
}

std::vector<std::vector<double>> draw_phases(const EdgeChannels& ch, Rng& rng) {
  std::vector<std::vector<double>> ph(ch.cells());
  for (std::size_t i = 0; i < ch.cells(); ++i) {
    ph[i].resize(ch.ris_user[i].size());
    for (double& x : ph[i]) x = rng.uniform(-std::numbers::pi, std::numbers::pi);
  }
  return ph;
}

}  // namespace

std::vector<PhaseMatrix> assign_pbf(const CoopStructure& cs, const EdgeChannels& ch, Rng& rng) {
  ch.validate(cs.total_cells);
  return assign_with(cs, ch, draw_phases(ch, rng));
}

double MultiCellScenario::tx_power() const { return dbm_to_watts(tx_power_dbm); }

double MultiCellScenario::noise_power() const {
  return noise_power_watts(bandwidth_hz, noise_figure_db);
}

PowerModel MultiCellScenario::power_model() const {
  PowerModel pm;
  pm.amp_efficiency = amp_efficiency;
  pm.static_power = dbm_to_watts(static_power_dbm);
  pm.element_power = dbm_to_watts(element_power_dbm);
  pm.k_elements = k_elements;
  pm.tx_power.assign(cells, tx_power());
  return pm;
}

void MultiCellScenario::validate() const {
  if (cells < 1) throw InvariantError("multi-cell: need at least one cell");
  if (cooperating < 1 || cooperating > cells)
    throw InvariantError("multi-cell: need 1 <= J <= I");
  if (!(rho_o > 0.0)) throw InvariantError("multi-cell: reference gain must be positive");
  for (double d : {d_center, d_cross, d_edge, d_bs_ris, d_ris_edge})
    if (!(d >= 1.0)) throw InvariantError("multi-cell: distances must be at least 1 m");
  for (double a : {alpha_ris, alpha_bs, alpha_edge, alpha_ici})
    if (!(a > 0.0)) throw InvariantError("multi-cell: path-loss exponents must be positive");
  if (!(kappa >= 0.0)) throw InvariantError("multi-cell: Rician factor must be >= 0");
  if (!(bandwidth_hz > 0.0)) throw InvariantError("multi-cell: bandwidth must be positive");
  if (!(zeta_edge > 0.5 && zeta_edge < 1.0))
    throw InvariantError("multi-cell: edge share must lie in (0.5, 1)");
  if (!(thresholds.r_center_min >= 0.0 && thresholds.r_edge_min >= 0.0))
    throw InvariantError("multi-cell: rate thresholds must be >= 0");
  power_model().validate();
}

MultiCellTrial sample_multicell_trial(const MultiCellScenario& s, Rng& rng) {
  const std::size_t n = s.cells;
  const std::size_t k = s.k_elements;
  MultiCellTrial t;
  t.center.assign(n, std::vector<Complex>(n));
  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t u = 0; u < n; ++u) {
      const double g = b == u ? path_gain({s.rho_o, s.alpha_bs}, s.d_center)
                              : path_gain({s.rho_o, s.alpha_ici}, s.d_cross);
      t.center[b][u] = std::sqrt(g) * sample_rayleigh(rng);
    }
  const double g_edge = std::sqrt(path_gain({s.rho_o, s.alpha_edge}, s.d_edge));
  const double g_br = std::sqrt(path_gain({s.rho_o, s.alpha_ris}, s.d_bs_ris));
  const double g_ru = std::sqrt(path_gain({s.rho_o, s.alpha_ris}, s.d_ris_edge));
  t.edge.direct.resize(n);
  t.edge.bs_ris.resize(n);
  t.edge.ris_user.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    t.edge.direct[i] = g_edge * sample_rayleigh(rng);
    t.edge.bs_ris[i] = sample_rician_vector(k, {s.kappa, s.aoa_bs_ris}, rng);
    t.edge.ris_user[i] = sample_rician_vector(k, {s.kappa, s.aoa_ris_edge}, rng);
    for (auto& x : t.edge.bs_ris[i]) x *= g_br;
    for (auto& x : t.edge.ris_user[i]) x *= g_ru;
  }
  t.random_phases = draw_phases(t.edge, rng);
  return t;
}

std::vector<Scheme> default_schemes() {
  return {{"no-ris", NetworkMode::NoRis, Access::Noma, true},
          {"random", NetworkMode::Random, Access::Noma, true},
          {"eo", NetworkMode::EO, Access::Noma, true},
          {"ec", NetworkMode::EC, Access::Noma, true}};
}

std::vector<double> edge_gains(const MultiCellTrial& t, std::span<const PhaseMatrix> phases) {
  if (phases.size() != t.edge.cells()) throw ShapeError("edge gains: one phase matrix per RIS");
  std::vector<double> g(phases.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    g[i] = std::norm(effective_channel(t.edge.direct[i], t.edge.ris_user[i], phases[i],
                                       t.edge.bs_ris[i]));
  return g;
}

UserOutcome evaluate_trial(const MultiCellScenario& s, const CoopStructure& cs, Access access,
                           const MultiCellTrial& t) {
  const std::size_t n = s.cells;
  const double p = s.tx_power();
  const double noise = s.noise_power();
  const RateThresholds& thr = s.thresholds;
  const auto phases = assign_with(cs, t.edge, t.random_phases);
  const std::vector<double> h_edge = edge_gains(t, phases);

  std::vector<NomaPair> cluster;
  for (std::size_t q = 0; q < cs.cooperating.size(); ++q)
    cluster.push_back(NomaPair::from_edge_share(s.zeta_edge, p));

  UserOutcome out;
  out.center_rate.resize(n);
  out.center_outage.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto gain = [&](std::size_t b) { return std::norm(t.center[b][i]); };
    const auto it = std::find(cs.cooperating.begin(), cs.cooperating.end(), i);
    if (it == cs.cooperating.end()) {
      // Serves only its own center user, at full power, all the time.
      double interf = 0.0;
      for (std::size_t b = 0; b < n; ++b)
        if (b != i) interf += p * gain(b);
      const double sinr = p * gain(i) / (interf + noise);
      out.center_rate[i] = achievable_rate(sinr);
      out.center_outage[i] = sinr < thr.sinr_center();
    } else if (access == Access::Oma) {
      // Center slot: every other BS is busy with its own center user.
      double interf = 0.0;
      for (std::size_t b = 0; b < n; ++b)
        if (b != i) interf += p * gain(b);
      out.center_rate[i] = oma_rate(p * gain(i) / (interf + noise));
      out.center_outage[i] = out.center_rate[i] < thr.r_center_min;
    } else {
      LinkBudget lb;
      lb.noise_power = noise;
      for (std::size_t j : cs.cooperating) lb.effective_gains.push_back(gain(j));
      for (std::size_t m = 0; m < n; ++m)
        if (!cs.is_cooperating(m)) lb.interferers.push_back({p, gain(m)});
      const auto serving = static_cast<std::size_t>(it - cs.cooperating.begin());
      const double gcf = sinr_center_decode_edge(cluster, lb);
      const double gc = sinr_center_own(cluster, serving, lb);
      out.center_rate[i] = achievable_rate(gc);
      out.center_outage[i] = outage_center(gcf, gc, thr);
    }
  }

  LinkBudget lb;
  lb.noise_power = noise;
  for (std::size_t j : cs.cooperating) lb.effective_gains.push_back(h_edge[j]);
  for (std::size_t m = 0; m < n; ++m)
    if (!cs.is_cooperating(m)) lb.interferers.push_back({p, h_edge[m]});
  if (access == Access::Oma) {
    double sig = 0.0;
    for (double g : lb.effective_gains) sig += p * g;
    out.edge_rate = oma_rate(sig / (lb.interference() + noise));
    out.edge_outage = out.edge_rate < thr.r_edge_min;
  } else {
    const double gf = sinr_edge_comp(cluster, lb);
    out.edge_rate = achievable_rate(gf);
    out.edge_outage = outage_edge(gf, thr);
  }
  return out;
}

CoopStructure scheme_coop(const MultiCellScenario& s, const Scheme& sc,
                          std::optional<double> split) {
  CoopStructure cs = make_coop(s.cells, sc.comp ? s.cooperating : 1, sc.ris);
  cs.co_eo_split = split;
  return cs;
}

namespace {

template <bool Parallel>
std::vector<PointStats> evaluate_impl(const MultiCellScenario& s, std::span<const Scheme> schemes,
                                      std::size_t n_trials, std::uint64_t seed,
                                      std::optional<double> split) {
  s.validate();
  if (n_trials == 0) throw DomainError("evaluate point: need at least one trial");
  const std::size_t ns = schemes.size();
  std::vector<CoopStructure> coops;
  for (const auto& sc : schemes) {
    coops.push_back(scheme_coop(s, sc, split));
    coops.back().validate();
  }

  // slots[t * ns + q]: per-trial results, reduced in trial order afterwards.
  std::vector<UserOutcome> slots(n_trials * ns);
  const auto body = [&](std::size_t t) {
    Rng rng = Rng::substream(seed, t);
    const MultiCellTrial trial = sample_multicell_trial(s, rng);
    for (std::size_t q = 0; q < ns; ++q)
      slots[t * ns + q] = evaluate_trial(s, coops[q], schemes[q].access, trial);
  };
  if constexpr (Parallel) {
    const auto count = static_cast<std::int64_t>(n_trials);
#pragma omp parallel for schedule(static)
    for (std::int64_t t = 0; t < count; ++t) body(static_cast<std::size_t>(t));
  } else {
    for (std::size_t t = 0; t < n_trials; ++t) body(t);
  }

  const PowerModel pm = s.power_model();
  const double inv_n = 1.0 / static_cast<double>(n_trials);
  std::vector<PointStats> out(ns);
  for (std::size_t q = 0; q < ns; ++q) {
    PointStats& st = out[q];
    st.center_rate.assign(s.cells, 0.0);
    st.center_outage.assign(s.cells, 0.0);
    for (std::size_t t = 0; t < n_trials; ++t) {
      const UserOutcome& u = slots[t * ns + q];
      for (std::size_t i = 0; i < s.cells; ++i) {
        st.center_rate[i] += u.center_rate[i];
        st.center_outage[i] += u.center_outage[i];
      }
      st.edge_rate += u.edge_rate;
      st.edge_outage += u.edge_outage;
    }
    for (std::size_t i = 0; i < s.cells; ++i) {
      st.center_rate[i] *= inv_n;
      st.center_outage[i] *= inv_n;
    }
    st.edge_rate *= inv_n;
    st.edge_outage *= inv_n;
    st.energy_efficiency = energy_efficiency(st.center_rate, st.center_outage, st.edge_rate,
                                             st.edge_outage, pm, coops[q]);
    st.outage_sum_rate = outage_rate(st.edge_rate, st.edge_outage);
    for (std::size_t i = 0; i < s.cells; ++i)
      st.outage_sum_rate += outage_rate(st.center_rate[i], st.center_outage[i]);
  }
  return out;
}

std::size_t as_count(double v, const char* what) {
  if (!(v >= 1.0) || v != std::floor(v))
    throw DomainError(std::string("sweep: ") + what + " must be a positive integer");
  return static_cast<std::size_t>(v);
}

}  // namespace

std::vector<PointStats> evaluate_point(const MultiCellScenario& s, std::span<const Scheme> schemes,
                                       std::size_t n_trials, std::uint64_t seed,
                                       std::optional<double> split) {
  return evaluate_impl<true>(s, schemes, n_trials, seed, split);
}

std::vector<PointStats> evaluate_point_serial(const MultiCellScenario& s,
                                              std::span<const Scheme> schemes,
                                              std::size_t n_trials, std::uint64_t seed,
                                              std::optional<double> split) {
  return evaluate_impl<false>(s, schemes, n_trials, seed, split);
}

std::string axis_name(SweepAxis a) {
  switch (a) {
    case SweepAxis::Cooperating: return "cooperating_bs";
    case SweepAxis::Elements: return "ris_elements";
    case SweepAxis::TxPowerDbm: return "tx_power_dbm";
    case SweepAxis::RateThreshold: return "rate_threshold";
    case SweepAxis::Split: return "co_split";
  }
  return "axis";
}

void SweepSpec::validate() const {
  if (axes.empty()) throw ShapeError("sweep: at least one axis");
  if (values.size() != axes.size()) throw ShapeError("sweep: one value list per axis");
  for (const auto& v : values)
    if (v.empty()) throw ShapeError("sweep: empty axis");
  if (schemes.empty()) throw ShapeError("sweep: at least one scheme");
  if (n_trials == 0) throw DomainError("sweep: need at least one trial");
}

SweepTable ee_sweep(const MultiCellScenario& base, const SweepSpec& spec) {
  spec.validate();
  SweepTable table;
  table.axes = spec.axes;
  std::vector<std::size_t> idx(spec.axes.size(), 0);
  while (true) {
    MultiCellScenario s = base;
    std::optional<double> split;
    std::vector<double> point(spec.axes.size());
    for (std::size_t a = 0; a < spec.axes.size(); ++a) {
      const double v = spec.values[a][idx[a]];
      point[a] = v;
      switch (spec.axes[a]) {
        case SweepAxis::Cooperating: s.cooperating = as_count(v, "J"); break;
        case SweepAxis::Elements: s.k_elements = as_count(v, "K"); break;
        case SweepAxis::TxPowerDbm: s.tx_power_dbm = v; break;
        case SweepAxis::RateThreshold: s.thresholds = {v, v}; break;
        case SweepAxis::Split: split = v; break;
      }
    }
    const auto stats = evaluate_point(s, spec.schemes, spec.n_trials, spec.seed, split);
    for (std::size_t q = 0; q < spec.schemes.size(); ++q)
      table.rows.push_back({point, spec.schemes[q].name, stats[q]});

    // Odometer over the grid, last axis fastest.
    std::size_t a = spec.axes.size();
    while (a > 0) {
      --a;
      if (++idx[a] < spec.values[a].size()) break;
      idx[a] = 0;
      if (a == 0) return table;
    }
  }
}

void write_sweep_csv(std::ostream& os, const SweepTable& t) {
  const std::size_t cells = t.rows.empty() ? 0 : t.rows.front().stats.center_outage.size();
  for (SweepAxis a : t.axes) os << axis_name(a) << ',';
  os << "scheme,energy_efficiency,outage_sum_rate";
  for (std::size_t i = 0; i < cells; ++i) os << ",center" << i + 1 << "_outage";
  os << ",edge_outage\n";
  const auto old = os.precision(12);
  for (const auto& r : t.rows) {
    for (double v : r.axis) os << v << ',';
    os << r.scheme << ',' << r.stats.energy_efficiency << ',' << r.stats.outage_sum_rate;
    for (double p : r.stats.center_outage) os << ',' << p;
    os << ',' << r.stats.edge_outage << '\n';
  }
  os.precision(old);
}

}  // namespace riscomp
