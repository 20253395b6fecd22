#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "riscomp/analytic.hpp"
#include "riscomp/error.hpp"
#include "riscomp/rng.hpp"
#include "riscomp/special.hpp"

using namespace riscomp;

namespace {

// Raw moments of a sum of k i.i.d. copies built by adding one copy at a time:
// E[(S+X)^p] = sum_j C(p,j) E[S^j] E[X^(p-j)].
std::vector<double> iid_sum_moments(const std::vector<double>& x, std::size_t k) {
  std::vector<double> s{1.0, 0.0, 0.0, 0.0, 0.0};
  const double binom[5][5] = {{1}, {1, 1}, {1, 2, 1}, {1, 3, 3, 1}, {1, 4, 6, 4, 1}};
  for (std::size_t n = 0; n < k; ++n) {
    std::vector<double> t(5, 0.0);
    for (int p = 0; p <= 4; ++p)
      for (int j = 0; j <= p; ++j) t[p] += binom[p][j] * s[j] * x[p - j];
    s = t;
  }
  return s;
}

double printed_cascade(std::size_t k, double beta, NakagamiParams a, NakagamiParams b, int p) {
  const double h = p / 2.0;
  return std::pow(k * std::sqrt(beta), p) * std::pow(a.omega * b.omega, h) * std::tgamma(b.m + h) *
         std::tgamma(a.m + h) / (std::pow(a.m * b.m, h) * std::tgamma(a.m) * std::tgamma(b.m));
}

RisLink fig_link() { return {{1.0, 1.0}, 34, 0.5, {2.0, 1.0}, {2.0, 1.0}}; }

}  // namespace

TEST_CASE("nakagami moments") {
  CHECK(nakagami_moment({1.0, 1.0}, 2) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(nakagami_moment({1.0, 1.0}, 1) == doctest::Approx(0.88622692545275801).epsilon(1e-14));
  CHECK(nakagami_moment({2.0, 2.0}, 2) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(nakagami_moment({2.0, 2.0}, 4) == doctest::Approx(4.0 * 1.5).epsilon(1e-14));
  CHECK_THROWS_AS(nakagami_moment({1.0, 1.0}, 5), DomainError);
}

TEST_CASE("cascade moments: single element and empty surface") {
  for (auto rule : {CascadeMomentRule::IndependentElements, CascadeMomentRule::CoherentScaling}) {
    CHECK(cascade_moment(1, 1.0, {1, 1}, {1, 1}, 2, rule) == doctest::Approx(1.0));
    CHECK(cascade_moment(1, 1.0, {1, 1}, {1, 1}, 1, rule) == doctest::Approx(std::numbers::pi / 4));
    CHECK(cascade_moment(0, 0.5, {1, 1}, {1, 1}, 2, rule) == 0.0);
    CHECK(cascade_moment(5, 0.0, {1, 1}, {1, 1}, 3, rule) == 0.0);
  }
}

TEST_CASE("cascade moments: independent rule matches the convolution oracle") {
  for (std::size_t k : {1u, 2u, 5u, 34u, 128u})
    for (double beta : {0.25, 0.5, 1.0})
      for (NakagamiParams a : {NakagamiParams{1, 1}, NakagamiParams{2, 0.3}})
        for (NakagamiParams b : {NakagamiParams{2, 1}, NakagamiParams{0.7, 2}}) {
          std::vector<double> x(5, 1.0);
          for (int p = 1; p <= 4; ++p) x[p] = nakagami_moment(a, p) * nakagami_moment(b, p);
          const auto s = iid_sum_moments(x, k);
          for (int p = 1; p <= 4; ++p)
            CHECK(cascade_moment(k, beta, a, b, p) ==
                  doctest::Approx(std::pow(beta, p / 2.0) * s[p]).epsilon(1e-12));
        }
}

TEST_CASE("cascade moments: coherent rule is the printed closed form") {
  for (std::size_t k : {1u, 17u, 34u})
    for (int p = 1; p <= 4; ++p)
      CHECK(cascade_moment(k, 0.5, {2, 1.5}, {3, 0.2}, p, CascadeMomentRule::CoherentScaling) ==
            doctest::Approx(printed_cascade(k, 0.5, {2, 1.5}, {3, 0.2}, p)).epsilon(1e-12));
}

TEST_CASE("gamma fit from moments") {
  auto g = gamma_from_moments({1.0, 2.0});
  CHECK(g.shape == doctest::Approx(1.0));
  CHECK(g.scale == doctest::Approx(1.0));
  g = gamma_from_moments({2.0, 6.0});
  CHECK(g.shape == doctest::Approx(2.0));
  CHECK(g.scale == doctest::Approx(1.0));
  g = gamma_from_moments({1.5, 3.0 * 4.0 * 0.25});
  CHECK(g.shape == doctest::Approx(3.0));
  CHECK(g.scale == doctest::Approx(0.5));
  CHECK_THROWS_AS(gamma_from_moments({1.0, 1.0}), FitError);
  CHECK_THROWS_AS(gamma_from_moments({1.0, 0.5}), FitError);

  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const double m1 = rng.uniform(1e-6, 1e3), m2 = m1 * m1 * rng.uniform(1.0001, 10.0);
    const auto back = gamma_from_moments({m1, m2}).moments();
    CHECK(back.m1 == doctest::Approx(m1).epsilon(1e-12));
    CHECK(back.m2 == doctest::Approx(m2).epsilon(1e-12));
  }
}

TEST_CASE("effective power moments") {
  const NakagamiParams d{2.0, 0.7};
  auto m = effective_power_moments({d, 0, 0.5, {1, 1}, {1, 1}});
  CHECK(m.m1 == doctest::Approx(0.7));
  CHECK(m.m2 == doctest::Approx(0.49 * 1.5));

  m = effective_power_moments({{1.0, 0.0}, 1, 1.0, {1, 1}, {1, 1}});
  CHECK(m.m1 == doctest::Approx(1.0));

  // printed closed expression under the coherent rule
  const RisLink link = fig_link();
  const auto mc = effective_power_moments(link, CascadeMomentRule::CoherentScaling);
  const double h1 = nakagami_moment(link.direct, 1), h2 = nakagami_moment(link.direct, 2);
  const double g1 = printed_cascade(34, 0.5, link.bs_ris, link.ris_user, 1);
  const double g2 = printed_cascade(34, 0.5, link.bs_ris, link.ris_user, 2);
  CHECK(mc.m1 == doctest::Approx(h2 + 2 * h1 * g1 + g2).epsilon(1e-9));
}

TEST_CASE("effective power moments: independent rule against Monte Carlo") {
  const RisLink link = fig_link();
  const auto m = effective_power_moments(link);
  Rng rng(2024);
  const int n = 1000000;
  double s1 = 0.0, s2 = 0.0;
  const double sb = std::sqrt(link.beta);
  for (int i = 0; i < n; ++i) {
    double g = 0.0;
    for (std::size_t k = 0; k < link.elements; ++k)
      g += std::sqrt(rng.gamma(2.0, 0.5)) * std::sqrt(rng.gamma(2.0, 0.5));
    const double z = std::pow(std::sqrt(rng.gamma(1.0, 1.0)) + sb * g, 2);
    s1 += z;
    s2 += z * z;
  }
  CHECK(s1 / n == doctest::Approx(m.m1).epsilon(0.01));
  CHECK(s2 / n == doctest::Approx(m.m2).epsilon(0.01));
}

TEST_CASE("weighted sum gamma") {
  const GammaParams z{3.0, 0.5};
  auto g = weighted_sum_gamma(1.0, z, 0.0, {1, 1});
  CHECK(g.shape == doctest::Approx(3.0));
  CHECK(g.scale == doctest::Approx(0.5));
  g = weighted_sum_gamma(0.0, z, 1.0, {1, 1});
  CHECK(g.shape == doctest::Approx(1.0));
  CHECK(g.scale == doctest::Approx(1.0));
  g = weighted_sum_gamma(2.0, z, 0.0, {1, 1});
  CHECK(g.shape == doctest::Approx(3.0));
  CHECK(g.scale == doctest::Approx(1.0));
  CHECK_THROWS_AS(weighted_sum_gamma(0.0, z, 0.0, {1, 1}), FitError);

  // independent sum: Var(aZ + b|h|^2) = a^2 Var Z + b^2 Omega^2 / m
  const auto mm = weighted_sum_moments(2.0, z.moments(), 3.0, {2.0, 0.4});
  CHECK(mm.m1 == doctest::Approx(2 * 1.5 + 3 * 0.4));
  CHECK(mm.variance() == doctest::Approx(4 * 0.75 + 9 * 0.16 / 2).epsilon(1e-12));
  const auto sh = shift_moments(mm, 1.0);
  CHECK(sh.variance() == doctest::Approx(mm.variance()).epsilon(1e-12));
}

namespace {

CenterUserModel fig_center() {
  CenterUserModel m;
  m.serving = {{1.0, 2.0}, 17, 0.5, {2.0, 0.5}, {2.0, 0.8}};
  m.interferer = {1.0, 0.3};
  m.rho = 5.0;
  return m;
}

EdgeUserModel fig_edge(double rho) {
  EdgeUserModel e;
  e.serving[0] = {{1.0, 1.0}, 17, 0.5, {2.0, 1.0}, {2.0, 1.0}};
  e.serving[1] = {{1.0, 0.6}, 17, 0.5, {2.0, 0.8}, {2.0, 1.0}};
  e.rho = rho;
  return e;
}

double dense_mode(const BetaPrimeParams& p) {
  double lo = 0.0, hi = 20.0 * p.scale * p.a / std::max(p.b, 1.0);
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int i = 0; i < 300; ++i) {
    const double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    if (p.pdf(x1) < p.pdf(x2)) lo = x1; else hi = x2;
  }
  return 0.5 * (lo + hi);
}

double ratio_gamma_mc_rate(const BetaPrimeParams& p, int n, std::uint64_t seed) {
  Rng rng(seed);
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += std::log2(1.0 + p.scale * rng.gamma(p.a, 1.0) / rng.gamma(p.b, 1.0));
  return s / n;
}

}  // namespace

TEST_CASE("beta prime SINR laws integrate to one and peak where expected") {
  const auto m = fig_center();
  for (const BetaPrimeParams p : {sinr_dist_center_decode_edge(m), sinr_dist_center_own(m),
                                  sinr_dist_edge(fig_edge(3.0))}) {
    const auto r = integrate_half_line([&p](double x) { return p.pdf(x); }, {1e-12, 1e-10, 4000},
                                       {beta_prime_quantile(p, 0.5) / (1 + beta_prime_quantile(p, 0.5))});
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-6));
    REQUIRE(p.a > 1.0);
    const double mode = p.scale * (p.a - 1.0) / (p.b + 1.0);
    CHECK(dense_mode(p) == doctest::Approx(mode).epsilon(1e-4));
  }
}

TEST_CASE("edge law is symmetric in the two BSs") {
  auto e = fig_edge(2.0);
  const auto a = sinr_dist_edge(e);
  std::swap(e.serving[0], e.serving[1]);
  const auto b = sinr_dist_edge(e);
  CHECK(a.a == doctest::Approx(b.a).epsilon(1e-13));
  CHECK(a.b == doctest::Approx(b.b).epsilon(1e-13));
  CHECK(a.scale == doctest::Approx(b.scale).epsilon(1e-13));
  CHECK(ergodic_rate(a) == doctest::Approx(ergodic_rate(b)).epsilon(1e-12));
}

TEST_CASE("beta prime CDF") {
  const BetaPrimeParams p{2.5, 4.0, 0.7};
  CHECK(beta_prime_cdf(p, 0.0) == 0.0);
  CHECK(beta_prime_cdf(p, INFINITY) == 1.0);
  CHECK(beta_prime_cdf(p, 1e12) == doctest::Approx(1.0));
  CHECK(beta_prime_cdf({1, 1, 1}, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
  for (double x : {0.01, 0.3, 1.0, 4.0}) {
    const double psi = (x / 0.7) / (1 + x / 0.7);
    CHECK(beta_prime_cdf(p, x) == doctest::Approx(boost::math::ibeta(2.5, 4.0, psi)).epsilon(1e-12));
    CHECK(outage_edge_closed(p, x) == beta_prime_cdf(p, x));
  }
  CHECK(outage_edge_closed(p, 0.0) == 0.0);
  CHECK(outage_edge_closed(p, 1e15) == doctest::Approx(1.0));
}

TEST_CASE("ergodic rate quadrature") {
  SUBCASE("concentrated law approaches the constant-SINR rate") {
    const double g0 = 3.0, k = 1e6;
    // mean s*a/(b-1) = g0 with a = b = k
    const BetaPrimeParams p{k, k, g0 * (k - 1.0) / k};
    CHECK(ergodic_rate(p) == doctest::Approx(std::log2(1.0 + g0)).epsilon(1e-3));
  }
  SUBCASE("agrees with a second integrator and with sampling") {
    for (const BetaPrimeParams p : {BetaPrimeParams{0.6, 3.0, 2.0}, BetaPrimeParams{4.0, 9.0, 0.3},
                                    sinr_dist_edge(fig_edge(2.0))}) {
      const double ours = ergodic_rate(p);
      auto f = [&p](double x) { return std::log2(1.0 + x) * p.pdf(x); };
      const double ref = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
          f, 0.0, std::numeric_limits<double>::infinity(), 25, 1e-12);
      CHECK(ours == doctest::Approx(ref).epsilon(1e-8));
      CHECK(ours == doctest::Approx(ratio_gamma_mc_rate(p, 200000, 9)).epsilon(0.01));
    }
  }
  SUBCASE("increasing the scale increases the rate") {
    double prev = 0.0;
    for (double s = 0.1; s < 50.0; s *= 1.7) {
      const double r = ergodic_rate({2.0, 3.0, s});
      CHECK(r > prev);
      prev = r;
    }
  }
  CHECK_THROWS_AS(ergodic_rate({1.0, 0.0, 1.0}), DomainError);
}

TEST_CASE("high-SNR ergodic rate") {
  const auto e = fig_edge(1e6);
  CHECK(std::abs(ergodic_rate(sinr_dist_edge(e)) - ergodic_rate_high_snr(e)) < 0.05);
  CHECK(ergodic_rate_high_snr(fig_edge(1e3)) == doctest::Approx(ergodic_rate_high_snr(e)).epsilon(1e-10));

  EdgeUserModel big = e;
  for (auto& l : big.serving) l.elements = 512;
  CHECK(ergodic_rate_high_snr(big) == doctest::Approx(std::log2(1.0 + 0.7 / 0.3)).epsilon(0.01));
}

TEST_CASE("center outage closed form") {
  const auto m = fig_center();
  CHECK(outage_center_closed(m, 0.0, 0.0) == 0.0);
  CHECK(outage_center_closed(m, 1e12, 1.0) == doctest::Approx(1.0));
  const auto cf = sinr_dist_center_decode_edge(m);
  CHECK(outage_center_closed(m, 0.8, 0.0) == doctest::Approx(beta_prime_cdf(cf, 0.8)).epsilon(1e-14));
  // P1 + (1 - P1) F_c, at least as large as either term
  const double p = outage_center_closed(m, 0.8, 1.2);
  CHECK(p >= beta_prime_cdf(cf, 0.8));
  CHECK(p >= beta_prime_cdf(sinr_dist_center_own(m), 1.2) - 1e-15);
  CHECK(p <= 1.0);
}
