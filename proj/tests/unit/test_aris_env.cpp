#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "riscomp/aris_env.hpp"
#include "riscomp/error.hpp"

using namespace riscomp;

namespace {

MdpAction hover(std::size_t k, double lambda = 0.6) {
  MdpAction a;
  a.move = Move::Hover;
  a.phases.assign(k, 0.0);
  a.alloc_factors = {lambda, lambda};
  return a;
}

AerialScenario small(std::size_t k = 4) {
  AerialScenario s;
  s.k_elements = k;
  s.horizon = 50;
  return s;
}

}  // namespace

TEST_CASE("reset places the UAV at the start and is reproducible") {
  AerialScenario s;
  Environment env(s);
  const MdpState st = env.reset(7);
  CHECK(st.uav_xy == Vec2{0.0, 35.0});
  REQUIRE(st.obstacle_dists.size() == 2);
  const Vec3 uav{0.0, 35.0, 50.0};
  CHECK(st.obstacle_dists[0] == doctest::Approx(distance(uav, s.obstacles[0])));
  CHECK(st.obstacle_dists[1] == doctest::Approx(std::hypot(35.0, 60.0, 0.0)));
  CHECK(st.alloc_factors[0] == 0.75);
  CHECK(st.to_vector().size() == s.state_dim());
  CHECK(s.state_dim() == 9);
  CHECK(action_dim(s.k_elements) == 124);

  Environment other(s);
  CHECK(other.reset(7).rates == st.rates);
  CHECK(other.reset(8).rates != st.rates);
}

TEST_CASE("reward examples") {
  const std::array<std::uint8_t, 3> none{0, 0, 0}, one{1, 0, 0}, all{1, 1, 1};
  const std::array<double, 3> r{1.0, 1.5, 0.5};
  CHECK(reward(r, none, false, 7.0) == doctest::Approx(3.0));
  CHECK(reward(r, one, false, 7.0) == doctest::Approx(2.0));
  CHECK(reward(r, none, true, 7.0) == doctest::Approx(-4.0));
  CHECK(reward(r, all, false, 7.0) == 0.0);
}

TEST_CASE("QoS indicator uses less-or-equal") {
  const auto q = qos_indicators({0.50001, 0.5, 0.2}, 0.5, 0.2);
  CHECK(q[0] == 0);
  CHECK(q[1] == 1);
  CHECK(q[2] == 1);
  CHECK(qos_indicators({0.4, 3.0, 0.21}, 0.5, 0.2) == std::array<std::uint8_t, 3>{1, 0, 0});
}

TEST_CASE("action decoding keeps factors and phases in range") {
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> raw(6);
    for (double& x : raw) x = rng.uniform(-50.0, 50.0);
    const MdpAction a = decode_action(rng.index(5), raw, 4);
    for (double p : a.phases) {
      CHECK(p >= -std::numbers::pi);
      CHECK(p < std::numbers::pi);
    }
    for (double l : a.alloc_factors) {
      CHECK(l > 0.5);
      CHECK(l < 1.0);
    }
  }
  CHECK(squash_alloc(0.0) == 0.75);
  CHECK_THROWS_AS(decode_action(5, std::vector<double>(6), 4), DomainError);
  CHECK_THROWS_AS(decode_action(0, std::vector<double>(5), 4), ShapeError);
}

TEST_CASE("hover with every QoS target met earns the sum rate") {
  AerialScenario s;
  s.horizon = 50;
  Environment env(s);
  env.reset(3);
  int checked = 0;
  for (int t = 0; t < 50; ++t) {
    const StepResult r = env.step(hover(s.k_elements));
    CHECK_FALSE(r.safety_violation);
    CHECK(r.state.uav_xy == Vec2{0.0, 35.0});
    if (r.qos == std::array<std::uint8_t, 3>{0, 0, 0}) {
      CHECK(r.reward == doctest::Approx(r.sum_rate).epsilon(1e-14));
      ++checked;
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("moves that leave the area or enter a forbidden zone are cancelled") {
  AerialScenario s = small();
  s.start = {75.0, 60.0};
  Environment env(s);
  env.reset(1);
  MdpAction a = hover(4);
  a.move = Move::Right;
  StepResult r = env.step(a);
  CHECK(r.safety_violation);
  CHECK(r.state.uav_xy == Vec2{75.0, 60.0});
  CHECK(r.reward == doctest::Approx(r.sum_rate * (1.0 - (r.qos[0] + r.qos[1] + r.qos[2]) / 3.0) - 7.0));

  // 11 m left of obstacle 0: one 5 m step right lands 6 m away.
  s.start = {4.0, 5.0};
  Environment env2(s);
  env2.reset(1);
  r = env2.step(a);
  CHECK(r.safety_violation);
  CHECK(r.state.uav_xy == Vec2{4.0, 5.0});
  a.move = Move::Left;
  r = env2.step(a);
  CHECK_FALSE(r.safety_violation);
  CHECK(r.state.uav_xy == Vec2{-1.0, 5.0});

  s.start = {15.0, 0.0};
  CHECK_THROWS_AS(Environment{s}, InvariantError);
}

TEST_CASE("random walks never leave the safe set and episodes have T steps") {
  AerialScenario s = small(2);
  s.horizon = 200;
  Environment env(s);
  Rng rng(99);
  for (int ep = 0; ep < 20; ++ep) {
    env.reset(static_cast<std::uint64_t>(ep));
    std::size_t steps = 0;
    bool done = false;
    while (!done) {
      MdpAction a = hover(2, rng.uniform(0.51, 0.99));
      a.move = static_cast<Move>(rng.index(5));
      const StepResult r = env.step(a);
      CHECK(s.is_safe(r.state.uav_xy));
      CHECK(std::isfinite(r.reward));
      CHECK(r.reward <= r.sum_rate + 1e-12);
      const bool clean = !r.safety_violation && r.qos == std::array<std::uint8_t, 3>{0, 0, 0};
      CHECK((r.reward == r.sum_rate) == clean);
      done = r.done;
      ++steps;
    }
    CHECK(steps == s.horizon);
    CHECK_THROWS_AS(env.step(hover(2)), InvariantError);
  }
}

TEST_CASE("blocked direct links leave the edge user without a rate when K = 0") {
  Environment env(small(0));
  env.reset(4);
  for (int t = 0; t < 20; ++t) {
    const StepResult r = env.step(hover(0));
    CHECK(r.state.rates[2] == 0.0);
    CHECK(r.qos[2] == 1);
  }
}

TEST_CASE("slot rates match a hand-written evaluation") {
  AerialScenario s = small(3);
  Rng rng(12);
  const double p = s.tx_power(), n0 = s.noise_power();
  for (int rep = 0; rep < 200; ++rep) {
    const Vec2 xy{rng.uniform(-70, 70), rng.uniform(-70, 70)};
    const SlotChannels ch = build_channels(s, xy, sample_slot_fading(3, rng));
    std::vector<double> th(3);
    for (double& x : th) x = rng.uniform(-3.0, 3.0);
    const std::array<double, 2> lam{rng.uniform(0.51, 0.99), rng.uniform(0.51, 0.99)};
    const auto cascade = [&](std::size_t i, std::size_t u) {
      Complex c = 0.0;
      for (std::size_t k = 0; k < 3; ++k)
        c += std::conj(ch.ris_user[u][k]) * std::polar(1.0, th[k]) * ch.bs_ris[i][k];
      return c;
    };
    const double e0 = std::norm(cascade(0, 2)), e1 = std::norm(cascade(1, 2));
    const double c0 = std::norm(ch.direct[0][0] + cascade(0, 0));
    const double c1 = std::norm(ch.direct[1][1] + cascade(1, 1));
    const double i0 = std::norm(ch.direct[1][0]), i1 = std::norm(ch.direct[0][1]);

    s.access = AerialAccess::Noma;
    auto r = slot_rates(s, ch, th, lam);
    CHECK(r[0] == doctest::Approx(std::log2(1 + (1 - lam[0]) * p * c0 / (p * i0 + n0))));
    CHECK(r[1] == doctest::Approx(std::log2(1 + (1 - lam[1]) * p * c1 / (p * i1 + n0))));
    const double gf = (lam[0] * e0 + lam[1] * e1) / ((1 - lam[0]) * e0 + (1 - lam[1]) * e1 + n0 / p);
    CHECK(r[2] == doctest::Approx(std::log2(1 + gf)));
    CHECK(r[2] < std::log2(1 + std::max(lam[0], lam[1]) / (1 - std::max(lam[0], lam[1]))) + 1e-12);

    s.access = AerialAccess::Oma;
    r = slot_rates(s, ch, th, lam);
    CHECK(r[0] == doctest::Approx(0.5 * std::log2(1 + p * c0 / (p * i0 + n0))));
    CHECK(r[2] == doctest::Approx(0.5 * std::log2(1 + p * (e0 + e1) / n0)));
  }
}

TEST_CASE("random-phase toggle ignores the agent's phases") {
  AerialScenario s = small(4);
  s.random_phases = true;
  Environment a(s), b(s);
  a.reset(5);
  b.reset(5);
  MdpAction x = hover(4), y = hover(4);
  y.phases = {1.0, -2.0, 0.5, 3.0};
  for (int t = 0; t < 10; ++t) CHECK(a.step(x).state.rates == b.step(y).state.rates);
}

TEST_CASE("trace CSV layout") {
  std::ostringstream os;
  TraceRow r;
  r.t = 3;
  r.uav_xy = {5.0, -10.0};
  r.reward = 1.25;
  r.rates = {1.0, 2.0, 0.25};
  r.qos = {0, 0, 1};
  write_trace_csv(os, {r});
  CHECK(os.str() ==
        "t,x,y,reward,rate_center1,rate_center2,rate_edge,qos_center1,qos_center2,qos_edge,safety\n"
        "3,5,-10,1.25,1,2,0.25,0,0,1,0\n");
}
