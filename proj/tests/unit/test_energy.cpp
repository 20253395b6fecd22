#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "riscomp/energy.hpp"
#include "riscomp/error.hpp"

using namespace riscomp;

namespace {

PowerModel one_cell_power() {
  PowerModel pm;
  pm.amp_efficiency = 0.4;
  pm.static_power = 1.0;
  pm.element_power = 0.01;
  pm.k_elements = 10;
  pm.tx_power = {1.0};
  return pm;
}

// EE written out directly from the definition, no shared helpers.
double ee_oracle(const std::vector<double>& rc, const std::vector<double>& pc, double rf, double pf,
                 const PowerModel& pm, const CoopStructure& cs) {
  double total = 0.0;
  for (std::size_t i = 0; i < rc.size(); ++i)
    total += rc[i] * (1.0 - pc[i]) / (pm.tx_power[i] / pm.amp_efficiency + pm.static_power);
  for (std::size_t j = 0; j < cs.total_cells; ++j) {
    if (!cs.is_cooperating(j)) continue;
    const double pr = cs.ris_mode[j] == RisMode::Off ? 0.0 : pm.k_elements * pm.element_power;
    total += rf * (1.0 - pf) / (pm.tx_power[j] / pm.amp_efficiency + pm.static_power + pr);
  }
  return total;
}

MultiCellScenario small_scenario(std::size_t k) {
  MultiCellScenario s;
  s.cells = 3;
  s.cooperating = 2;
  s.k_elements = k;
  return s;
}

}  // namespace

TEST_CASE("outage rate") {
  CHECK(outage_rate(3.0, 1.0) == 0.0);
  CHECK(outage_rate(3.0, 0.0) == 3.0);
  CHECK(outage_rate(2.0, 0.25) == doctest::Approx(1.5));
  CHECK_THROWS_AS(outage_rate(1.0, 1.5), DomainError);
}

TEST_CASE("energy efficiency examples") {
  const PowerModel pm = one_cell_power();
  const CoopStructure cs = make_coop(1, 1, NetworkMode::NoRis);
  const std::vector<double> r{1.0}, p{0.0};
  CHECK(energy_efficiency(r, p, 0.0, 0.0, pm, cs) == doctest::Approx(1.0 / 3.5).epsilon(1e-14));

  const std::vector<double> zero{0.0};
  CHECK(energy_efficiency(zero, p, 0.0, 0.0, pm, cs) == 0.0);

  const CoopStructure on = make_coop(1, 1, NetworkMode::EC);
  const double base = energy_efficiency(r, p, 0.8, 0.1, pm, on);
  const std::vector<double> r2{2.0};
  CHECK(energy_efficiency(r2, p, 1.6, 0.1, pm, on) == doctest::Approx(2.0 * base));
  // RIS power only enters the cooperating term: 1/3.5 + 0.72/(3.5 + 0.1).
  CHECK(base == doctest::Approx(1.0 / 3.5 + 0.72 / 3.6));

  CHECK_THROWS_AS(energy_efficiency(std::vector<double>{1.0, 1.0}, p, 0.0, 0.0, pm, cs),
                  ShapeError);
  PowerModel bad = pm;
  bad.amp_efficiency = 0.0;
  CHECK_THROWS_AS(energy_efficiency(r, p, 0.0, 0.0, bad, cs), InvariantError);
}

TEST_CASE("energy efficiency matches the definition on random inputs") {
  Rng rng(11);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 1 + rng.index(6);
    const std::size_t j = 1 + rng.index(n);
    const auto mode = static_cast<NetworkMode>(rng.index(4));
    const CoopStructure cs = make_coop(n, j, mode);
    PowerModel pm;
    pm.amp_efficiency = rng.uniform(0.1, 1.0);
    pm.static_power = rng.uniform(0.1, 3.0);
    pm.element_power = rng.uniform(1e-4, 1e-2);
    pm.k_elements = 1 + rng.index(200);
    std::vector<double> rc(n), pc(n);
    for (std::size_t i = 0; i < n; ++i) {
      pm.tx_power.push_back(rng.uniform(1e-3, 2.0));
      rc[i] = rng.uniform(0.0, 8.0);
      pc[i] = rng.uniform();
    }
    const double rf = rng.uniform(0.0, 2.0), pf = rng.uniform();
    CHECK(energy_efficiency(rc, pc, rf, pf, pm, cs) ==
          doctest::Approx(ee_oracle(rc, pc, rf, pf, pm, cs)).epsilon(1e-13));
  }
}

TEST_CASE("energy efficiency strictly decreases in element and static power") {
  const CoopStructure cs = make_coop(3, 2, NetworkMode::EC);
  PowerModel pm;
  pm.element_power = 1e-3;
  pm.k_elements = 50;
  pm.tx_power = {1e-3, 1e-3, 1e-3};
  const std::vector<double> rc{3.0, 4.0, 5.0}, pc{0.1, 0.0, 0.2};
  double prev = energy_efficiency(rc, pc, 1.0, 0.3, pm, cs);
  for (int i = 0; i < 20; ++i) {
    pm.element_power *= 1.5;
    const double ee = energy_efficiency(rc, pc, 1.0, 0.3, pm, cs);
    CHECK(ee < prev);
    prev = ee;
  }
  for (int i = 0; i < 20; ++i) {
    pm.static_power *= 1.3;
    const double ee = energy_efficiency(rc, pc, 1.0, 0.3, pm, cs);
    CHECK(ee < prev);
    prev = ee;
  }
}

TEST_CASE("coop structure validation") {
  CHECK_THROWS_AS(make_coop(6, 0, NetworkMode::EC), DomainError);
  CHECK_THROWS_AS(make_coop(6, 7, NetworkMode::EC), DomainError);
  CoopStructure cs = make_coop(4, 2, NetworkMode::EC);
  CHECK(cs.ris_mode == std::vector<RisMode>{RisMode::EO, RisMode::EO, RisMode::EC, RisMode::EC});
  cs.co_eo_split = 1.5;
  CHECK_THROWS_AS(cs.validate(), InvariantError);
  cs.co_eo_split.reset();
  cs.cooperating = {1, 1};
  CHECK_THROWS_AS(cs.validate(), InvariantError);
  cs.cooperating = {4};
  CHECK_THROWS_AS(cs.validate(), InvariantError);
  CHECK(make_coop(4, 2, NetworkMode::EO).ris_mode[3] == RisMode::Random);
}

TEST_CASE("co/eo split element counts") {
  CHECK(co_elements(0.0, 72) == 0);
  CHECK(co_elements(1.0, 72) == 72);
  CHECK(co_elements(0.5, 72) == 36);
  CHECK(co_elements(0.1, 70) == 7);
  CHECK(co_elements(0.3, 70) == 21);
  CHECK(co_elements(0.01, 70) == 1);
  CHECK_THROWS_AS(co_elements(-0.1, 5), DomainError);

  Rng rng(3);
  std::vector<Complex> ru(72), br(72);
  for (auto& x : ru) x = sample_rayleigh(rng);
  for (auto& x : br) x = sample_rayleigh(rng);
  const Complex h = sample_rayleigh(rng);
  const auto eo = eo_phases(h, ru, br);
  const auto ec = ec_phases(h, ru, br);
  CHECK(co_eo_split_assign(0.0, h, ru, br).phases == eo);
  const auto all = co_eo_split_assign(1.0, h, ru, br).phases;
  for (std::size_t k = 0; k < 72; ++k) CHECK(all[k] == doctest::Approx(ec[k]));
  const auto half = co_eo_split_assign(0.5, h, ru, br).phases;
  for (std::size_t k = 0; k < 36; ++k) CHECK(half[k] == doctest::Approx(ec[k]));
  for (std::size_t k = 36; k < 72; ++k) CHECK(half[k] == eo[k]);
}

TEST_CASE("single-element RIS: co-phasing and anti-phasing") {
  MultiCellScenario s = small_scenario(1);
  Rng rng(5);
  for (int rep = 0; rep < 100; ++rep) {
    const MultiCellTrial t = sample_multicell_trial(s, rng);
    const CoopStructure cs = make_coop(3, 2, NetworkMode::EC);
    Rng unused(0);
    const auto g = edge_gains(t, assign_pbf(cs, t.edge, unused));
    for (std::size_t i = 0; i < 3; ++i) {
      const double h = std::abs(t.edge.direct[i]);
      const double c = std::abs(cascade_term(t.edge.ris_user[i], t.edge.bs_ris[i], 0));
      const double expect = i < 2 ? (h + c) * (h + c) : (h - c) * (h - c);
      CHECK(g[i] == doctest::Approx(expect).epsilon(1e-10));
    }
    const auto off = edge_gains(t, assign_pbf(make_coop(3, 2, NetworkMode::NoRis), t.edge, unused));
    for (std::size_t i = 0; i < 3; ++i) CHECK(off[i] == std::norm(t.edge.direct[i]));
  }
}

TEST_CASE("PBF assignment is optimal against random phase search") {
  // Direct links dominate the cascades in this geometry, which is the regime
  // where anti-phasing every element is the minimizer.
  Rng rng(21);
  for (std::size_t k = 1; k <= 4; ++k) {
    MultiCellScenario s = small_scenario(k);
    for (int rep = 0; rep < 50; ++rep) {
      const MultiCellTrial t = sample_multicell_trial(s, rng);
      const CoopStructure cs = make_coop(3, 2, NetworkMode::EC);
      const auto best = edge_gains(t, assign_pbf(cs, t.edge, rng));
      for (int d = 0; d < 300; ++d) {
        std::vector<PhaseMatrix> ph;
        for (std::size_t i = 0; i < 3; ++i) {
          std::vector<double> x(k);
          for (double& v : x) v = rng.uniform(-std::numbers::pi, std::numbers::pi);
          ph.push_back(PhaseMatrix::unit(x));
        }
        const auto g = edge_gains(t, ph);
        CHECK(g[0] <= best[0] * (1 + 1e-12));
        CHECK(g[1] <= best[1] * (1 + 1e-12));
        CHECK(g[2] >= best[2] * (1 - 1e-12));
      }
    }
  }
}

TEST_CASE("with every BS cooperating EO and EC coincide per realization") {
  MultiCellScenario s = small_scenario(8);
  s.cooperating = 3;
  const CoopStructure eo = make_coop(3, 3, NetworkMode::EO);
  const CoopStructure ec = make_coop(3, 3, NetworkMode::EC);
  Rng rng(8);
  for (int rep = 0; rep < 200; ++rep) {
    const MultiCellTrial t = sample_multicell_trial(s, rng);
    const UserOutcome a = evaluate_trial(s, eo, Access::Noma, t);
    const UserOutcome b = evaluate_trial(s, ec, Access::Noma, t);
    CHECK(a.center_rate == b.center_rate);
    CHECK(a.edge_rate == b.edge_rate);
    CHECK(a.edge_outage == b.edge_outage);
  }
}

TEST_CASE("multi-cell SINRs match a hand-written evaluation") {
  MultiCellScenario s = small_scenario(4);
  const double p = s.tx_power(), n0 = s.noise_power(), zf = s.zeta_edge, zc = 1.0 - zf;
  Rng rng(13);
  for (int rep = 0; rep < 100; ++rep) {
    const MultiCellTrial t = sample_multicell_trial(s, rng);
    const CoopStructure cs = make_coop(3, 2, NetworkMode::EC);
    const UserOutcome u = evaluate_trial(s, cs, Access::Noma, t);
    const auto g = [&](std::size_t b, std::size_t i) { return std::norm(t.center[b][i]); };

    // Cell 0 center user, cluster {0, 1}, BS 2 interferes at full power.
    const double y0 = p * g(2, 0);
    const double gc0 = zc * p * g(0, 0) / (zc * p * g(1, 0) + y0 + n0);
    const double gcf0 = zf * p * (g(0, 0) + g(1, 0)) / (zc * p * (g(0, 0) + g(1, 0)) + y0 + n0);
    CHECK(u.center_rate[0] == doctest::Approx(std::log2(1 + gc0)).epsilon(1e-12));
    CHECK(u.center_outage[0] == (gcf0 < std::sqrt(2.0) - 1 || gc0 < 1.0));

    // Cell 2 is outside the cluster and serves its user alone.
    const double g2 = p * g(2, 2) / (p * (g(0, 2) + g(1, 2)) + n0);
    CHECK(u.center_rate[2] == doctest::Approx(std::log2(1 + g2)).epsilon(1e-12));

    Rng unused(0);
    const auto h = edge_gains(t, assign_pbf(cs, t.edge, unused));
    const double gf = zf * p * (h[0] + h[1]) / (zc * p * (h[0] + h[1]) + p * h[2] + n0);
    CHECK(u.edge_rate == doctest::Approx(std::log2(1 + gf)).epsilon(1e-12));

    const UserOutcome o = evaluate_trial(s, cs, Access::Oma, t);
    const double snr0 = p * g(0, 0) / (p * (g(1, 0) + g(2, 0)) + n0);
    CHECK(o.center_rate[0] == doctest::Approx(0.5 * std::log2(1 + snr0)).epsilon(1e-12));
    const double sf = p * (h[0] + h[1]) / (p * h[2] + n0);
    CHECK(o.edge_rate == doctest::Approx(0.5 * std::log2(1 + sf)).epsilon(1e-12));
  }
}

TEST_CASE("edge SINR stays below the NOMA ceiling") {
  MultiCellScenario s = small_scenario(16);
  s.tx_power_dbm = 40.0;
  Rng rng(17);
  const double ceiling = std::log2(1.0 + s.zeta_edge / (1.0 - s.zeta_edge));
  for (int rep = 0; rep < 200; ++rep) {
    const MultiCellTrial t = sample_multicell_trial(s, rng);
    const UserOutcome u = evaluate_trial(s, make_coop(3, 3, NetworkMode::EC), Access::Noma, t);
    CHECK(u.edge_rate < ceiling);
  }
}

TEST_CASE("parallel and serial point estimates agree exactly") {
  MultiCellScenario s = small_scenario(10);
  const auto schemes = default_schemes();
  const auto a = evaluate_point(s, schemes, 300, 9);
  const auto b = evaluate_point_serial(s, schemes, 300, 9);
  REQUIRE(a.size() == b.size());
  for (std::size_t q = 0; q < a.size(); ++q) {
    CHECK(a[q].energy_efficiency == b[q].energy_efficiency);
    CHECK(a[q].outage_sum_rate == b[q].outage_sum_rate);
    CHECK(a[q].center_outage == b[q].center_outage);
  }
  const auto split = evaluate_point(s, schemes, 100, 9, 0.5);
  CHECK(split.size() == schemes.size());
}

TEST_CASE("outage sum rate is nondecreasing in transmit power per seed") {
  MultiCellScenario s = small_scenario(20);
  auto schemes = default_schemes();
  schemes.push_back({"oma-ec", NetworkMode::EC, Access::Oma, true});
  SweepSpec spec;
  spec.axes = {SweepAxis::TxPowerDbm};
  spec.values = {{-20, -10, 0, 10, 20, 30}};
  spec.schemes = schemes;
  spec.n_trials = 400;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    spec.seed = seed;
    const SweepTable t = ee_sweep(s, spec);
    const std::size_t ns = schemes.size();
    for (std::size_t q = 0; q < ns; ++q)
      for (std::size_t p = 1; p < spec.values[0].size(); ++p)
        CHECK(t.rows[p * ns + q].stats.outage_sum_rate >=
              t.rows[(p - 1) * ns + q].stats.outage_sum_rate);
  }
}

TEST_CASE("sweep grid order and CSV layout") {
  MultiCellScenario s = small_scenario(4);
  SweepSpec spec;
  spec.axes = {SweepAxis::Cooperating, SweepAxis::Split};
  spec.values = {{1, 3}, {0.0, 0.5, 1.0}};
  spec.schemes = {{"ec", NetworkMode::EC, Access::Noma, true}};
  spec.n_trials = 50;
  const SweepTable t = ee_sweep(s, spec);
  REQUIRE(t.rows.size() == 6);
  CHECK(t.rows[0].axis == std::vector<double>{1, 0.0});
  CHECK(t.rows[2].axis == std::vector<double>{1, 1.0});
  CHECK(t.rows[3].axis == std::vector<double>{3, 0.0});

  std::ostringstream a, b;
  write_sweep_csv(a, t);
  write_sweep_csv(b, ee_sweep(s, spec));
  CHECK(a.str() == b.str());
  const std::string header = a.str().substr(0, a.str().find('\n'));
  CHECK(header ==
        "cooperating_bs,co_split,scheme,energy_efficiency,outage_sum_rate,center1_outage,"
        "center2_outage,center3_outage,edge_outage");

  spec.values = {{0.5}, {0.0}};
  CHECK_THROWS_AS(ee_sweep(s, spec), DomainError);
  spec.values = {{4}, {0.0}};
  CHECK_THROWS_AS(ee_sweep(s, spec), InvariantError);
}
