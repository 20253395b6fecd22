#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "riscomp/error.hpp"
#include "riscomp/ris.hpp"

using namespace riscomp;

namespace {

struct Instance {
  Complex h;
  std::vector<Complex> ru, br;
};

Instance random_instance(Rng& rng, std::size_t k, double direct_scale = 1.0) {
  Instance in;
  in.h = direct_scale * sample_rayleigh(rng);
  for (std::size_t i = 0; i < k; ++i) {
    in.ru.push_back(sample_rayleigh(rng));
    in.br.push_back(sample_rayleigh(rng));
  }
  return in;
}

double cascade_sum(const Instance& in) {
  double s = 0.0;
  for (std::size_t k = 0; k < in.ru.size(); ++k) s += std::abs(cascade_term(in.ru, in.br, k));
  return s;
}

double gain_with(const Instance& in, const std::vector<double>& ph) {
  return std::abs(effective_channel(in.h, in.ru, PhaseMatrix::unit(ph), in.br));
}

}  // namespace

TEST_CASE("wrap_phase lands in [-pi, pi)") {
  const double pi = std::numbers::pi;
  CHECK(wrap_phase(pi) == doctest::Approx(-pi));
  CHECK(wrap_phase(-pi) == doctest::Approx(-pi));
  CHECK(wrap_phase(3 * pi / 2) == doctest::Approx(-pi / 2));
  CHECK(wrap_phase(0.25) == doctest::Approx(0.25));
  Rng rng(1);
  for (int i = 0; i < 10000; ++i) {
    const double x = rng.uniform(-100.0, 100.0);
    const double w = wrap_phase(x);
    CHECK(w >= -pi);
    CHECK(w < pi);
    CHECK(std::abs(std::remainder(w - x, 2 * pi)) < 1e-9);
  }
}

TEST_CASE("energy splitting matrices") {
  StarRisConfig c = StarRisConfig::even(3, 1.0);
  auto es = es_matrices(c);
  for (std::size_t k = 0; k < 3; ++k) CHECK(es.reflection.entry(k) == Complex(0.0, 0.0));

  c = StarRisConfig::even(4, 0.5);
  es = es_matrices(c);
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(es.transmission.entry(k).real() == doctest::Approx(std::sqrt(0.5)));
    CHECK(es.reflection.entry(k).real() == doctest::Approx(0.7071067811865476));
  }

  c = StarRisConfig::even(1, 0.64);
  c.phases_t = {std::numbers::pi / 2};
  es = es_matrices(c);
  CHECK(es.transmission.entry(0).real() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(es.transmission.entry(0).imag() == doctest::Approx(0.8));

  c.beta_r = 0.5;
  CHECK_THROWS_AS(es_matrices(c), InvariantError);
}

TEST_CASE("energy split amplitudes are exact for random configs") {
  Rng rng(2);
  for (int it = 0; it < 200; ++it) {
    const double bt = rng.uniform();
    StarRisConfig c = StarRisConfig::even(5, bt);
    for (auto& p : c.phases_t) p = rng.uniform(0.0, 2 * std::numbers::pi);
    for (auto& p : c.phases_r) p = rng.uniform(0.0, 2 * std::numbers::pi);
    const auto es = es_matrices(c);
    CHECK(c.beta_t + c.beta_r == doctest::Approx(1.0).epsilon(1e-15));
    for (std::size_t k = 0; k < 5; ++k) {
      CHECK(std::abs(es.transmission.entry(k)) == doctest::Approx(std::sqrt(bt)));
      CHECK(std::abs(es.reflection.entry(k)) == doctest::Approx(std::sqrt(1 - bt)));
      CHECK(es.transmission.phases[k] >= -std::numbers::pi);
      CHECK(es.transmission.phases[k] < std::numbers::pi);
    }
  }
}

TEST_CASE("effective channel composition") {
  CHECK(effective_channel({0.3, -0.2}, {}, PhaseMatrix{}, {}) == Complex(0.3, -0.2));
  const std::vector<Complex> one{Complex(1.0, 0.0)};
  CHECK(effective_channel(0.0, one, PhaseMatrix::unit({0.0}), one) == Complex(1.0, 0.0));

  const std::vector<Complex> ru{0.5, 1.0}, br{1.0, 0.5};
  const auto ph = eo_phases(1.0, ru, br);
  CHECK(std::abs(effective_channel(1.0, ru, PhaseMatrix::unit(ph), br)) == doctest::Approx(2.0));

  CHECK_THROWS_AS(effective_channel(1.0, ru, PhaseMatrix::unit({0.0}), br), ShapeError);
}

TEST_CASE("effective channel uses the conjugate of the RIS-user vector") {
  const std::vector<Complex> ru{Complex(0.0, 1.0)}, br{Complex(1.0, 0.0)};
  // conj(j) * 1 = -j
  CHECK(std::abs(effective_channel(0.0, ru, PhaseMatrix::unit({0.0}), br) - Complex(0.0, -1.0)) < 1e-15);
}

TEST_CASE("effective channel is linear in the direct link and in each cascade") {
  Rng rng(4);
  for (int it = 0; it < 100; ++it) {
    auto in = random_instance(rng, 6);
    std::vector<double> ph(6);
    for (auto& p : ph) p = rng.uniform(-3.0, 3.0);
    const auto th = PhaseMatrix::unit(ph);
    const Complex base = effective_channel(in.h, in.ru, th, in.br);
    const Complex a(0.7, -1.3);
    CHECK(std::abs(effective_channel(in.h + a, in.ru, th, in.br) - (base + a)) < 1e-12);
    auto br2 = in.br;
    br2[2] *= 3.0;
    const Complex t2 = cascade_term(in.ru, in.br, 2) * th.entry(2);
    CHECK(std::abs(effective_channel(in.h, in.ru, th, br2) - (base + 2.0 * t2)) < 1e-12);
  }
}

TEST_CASE("EO phases: examples") {
  // cascade product j -> theta = -pi/2
  const std::vector<Complex> ru{Complex(1.0, 0.0)}, br{Complex(0.0, 1.0)};
  const auto ph = eo_phases(1.0, ru, br);
  CHECK(ph[0] == doctest::Approx(-std::numbers::pi / 2));
  CHECK(std::abs(effective_channel(1.0, ru, PhaseMatrix::unit(ph), br)) == doctest::Approx(2.0));

  Rng rng(5);
  auto in = random_instance(rng, 5);
  in.h = 0.0;
  const auto pb = eo_phases(in.h, in.ru, in.br);
  const Complex hb = effective_channel(0.0, in.ru, PhaseMatrix::unit(pb), in.br);
  CHECK(hb.real() == doctest::Approx(cascade_sum(in)));
  CHECK(std::abs(hb.imag()) < 1e-12);

  const std::vector<Complex> zero{Complex(0.0, 0.0)};
  CHECK(eo_phases(1.0, zero, br)[0] == 0.0);
  CHECK(ec_phases(1.0, zero, br)[0] == 0.0);
}

TEST_CASE("EO optimality against random phase search") {
  Rng rng(6);
  for (std::size_t k : {1u, 2u, 3u, 4u, 16u}) {
    for (int it = 0; it < 20; ++it) {
      auto in = random_instance(rng, k);
      const double best = gain_with(in, eo_phases(in.h, in.ru, in.br));
      CHECK(best == doctest::Approx(std::abs(in.h) + cascade_sum(in)).epsilon(1e-12));
      std::vector<double> ph(k);
      for (int d = 0; d < 2000; ++d) {
        for (auto& p : ph) p = rng.uniform(-std::numbers::pi, std::numbers::pi);
        CHECK(gain_with(in, ph) <= best + 1e-12);
      }
    }
  }
}

TEST_CASE("EC phases: examples") {
  const std::vector<Complex> one{Complex(1.0, 0.0)};
  CHECK(std::abs(effective_channel(1.0, one, PhaseMatrix::unit(ec_phases(1.0, one, one)), one)) < 1e-15);
  const std::vector<Complex> small{Complex(0.3, 0.0)};
  CHECK(std::abs(effective_channel(1.0, small, PhaseMatrix::unit(ec_phases(1.0, small, one)), one)) ==
        doctest::Approx(0.7));
}

TEST_CASE("EC phases minimise when the direct link dominates") {
  Rng rng(7);
  for (std::size_t k : {1u, 2u, 3u, 4u, 16u}) {
    for (int it = 0; it < 20; ++it) {
      auto in = random_instance(rng, k, 10.0 * static_cast<double>(k));
      const double s = cascade_sum(in);
      if (std::abs(in.h) < s) continue;
      const double low = gain_with(in, ec_phases(in.h, in.ru, in.br));
      CHECK(low == doctest::Approx(std::abs(std::abs(in.h) - s)).epsilon(1e-12));
      std::vector<double> ph(k);
      for (int d = 0; d < 2000; ++d) {
        for (auto& p : ph) p = rng.uniform(-std::numbers::pi, std::numbers::pi);
        CHECK(gain_with(in, ph) >= low - 1e-12);
      }
    }
  }
}

TEST_CASE("EC phases are not the minimiser once the cascades outweigh the direct link") {
  // Two equal cascades and no direct link: opposite phases cancel exactly,
  // while anti-phasing both against arg 0 adds them.
  const std::vector<Complex> ru{1.0, 1.0}, br{1.0, 1.0};
  const Instance in{0.0, ru, br};
  CHECK(gain_with(in, ec_phases(0.0, ru, br)) == doctest::Approx(2.0));
  CHECK(gain_with(in, {0.0, std::numbers::pi}) < 1e-12);
}

TEST_CASE("element split") {
  StarRisConfig c = StarRisConfig::even(34, 0.5);
  c.assignment = {34, 0};
  CHECK(element_split(c, 1).count == 0);
  c.assignment = {17, 17};
  CHECK(element_split(c, 0).count == 17);
  CHECK(element_split(c, 0).offset == 0);
  StarRisConfig d = StarRisConfig::even(10, 0.5);
  d.assignment = {3, 7};
  const auto s = element_split(d, 1);
  CHECK(s.offset == 3);  // 0-based; elements 4..10 counting from 1
  CHECK(s.count == 7);
  CHECK_THROWS_AS(element_split(d, 2), DomainError);
}
