#include "riscomp/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "riscomp/error.hpp"
#include "riscomp/rng.hpp"

namespace riscomp {

namespace {

TrialBatch make_batch(std::size_t n, std::uint64_t seed) {
  TrialBatch b;
  b.seed = seed;
  b.n_trials = n;
  for (std::size_t i = 0; i < 2; ++i) {
    b.center_own[i].resize(n);
    b.center_decode_edge[i].resize(n);
  }
  b.edge.resize(n);
  b.edge_no_comp.resize(n);
  return b;
}

void store(TrialBatch& b, std::size_t t, const StarTrial& r) {
  for (std::size_t i = 0; i < 2; ++i) {
    b.center_own[i][t] = r.center_own[i];
    b.center_decode_edge[i][t] = r.center_decode_edge[i];
  }
  b.edge[t] = r.edge;
  b.edge_no_comp[t] = r.edge_no_comp;
}

}  // namespace

TrialBatch run_trials(const NetworkScenario& s, std::size_t n, std::uint64_t seed) {
  s.validate();
  TrialBatch b = make_batch(n, seed);
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
  for (std::int64_t t = 0; t < count; ++t) {
    Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(t));
    store(b, static_cast<std::size_t>(t), sample_star_trial(s, rng));
  }
  return b;
}

TrialBatch run_trials_serial(const NetworkScenario& s, std::size_t n, std::uint64_t seed) {
  s.validate();
  TrialBatch b = make_batch(n, seed);
  for (std::size_t t = 0; t < n; ++t) {
    Rng rng = Rng::substream(seed, t);
    store(b, t, sample_star_trial(s, rng));
  }
  return b;
}

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples) : sorted_(std::move(samples)) {
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::operator()(double x) const {
  if (sorted_.empty()) throw DomainError("empirical CDF of an empty sample");
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double EmpiricalCdf::quantile(double p) const {
  if (sorted_.empty()) throw DomainError("quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("quantile: p outside [0, 1]");
  // Smallest sample with F(x) >= p.
  const double n = static_cast<double>(sorted_.size());
  std::size_t idx = p <= 0.0 ? 0 : static_cast<std::size_t>(std::ceil(p * n)) - 1;
  return sorted_[std::min(idx, sorted_.size() - 1)];
}

KsResult ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf,
                      double c_alpha) {
  if (samples.size() < kKsMinSamples)
    throw DomainError("ks_statistic: need at least " + std::to_string(kKsMinSamples) +
                      " samples, got " + std::to_string(samples.size()));
  std::vector<double> x(samples.begin(), samples.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  // Compare both sides of every jump of the empirical CDF; the left limit of
  // `cdf` is taken one ulp below the sample so step-function CDFs work too.
  double d = 0.0;
  for (std::size_t i = 0; i < x.size();) {
    std::size_t j = i;
    while (j < x.size() && x[j] == x[i]) ++j;
    const double below = static_cast<double>(i) / n, at = static_cast<double>(j) / n;
    const double f = cdf(x[i]), f_left = cdf(std::nextafter(x[i], -INFINITY));
    d = std::max({d, std::abs(at - f), std::abs(below - f_left)});
    i = j;
  }
  KsResult r;
  r.statistic = d;
  r.critical = c_alpha / std::sqrt(n);
  r.pass = d < r.critical;
  return r;
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw DomainError("ks_two_sample: empty sample");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size()), ny = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] <= v) ++i;
    while (j < y.size() && y[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return d;
}

double outage_frequency(std::span<const std::uint8_t> indicators) {
  if (indicators.empty()) throw DomainError("outage_frequency: empty batch");
  std::size_t c = 0;
  for (auto v : indicators) c += v ? 1 : 0;
  return static_cast<double>(c) / static_cast<double>(indicators.size());
}

double mean_rate(std::span<const double> sinr) {
  if (sinr.empty()) throw DomainError("mean_rate: empty batch");
  double s = 0.0;
  for (double g : sinr) s += achievable_rate(g);
  return s / static_cast<double>(sinr.size());
}

UserStats estimate_outage(const TrialBatch& b, const RateThresholds& thr) {
  if (b.n_trials == 0) throw DomainError("estimate_outage: empty batch");
  std::vector<std::uint8_t> ind(b.n_trials);
  UserStats s;
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t t = 0; t < b.n_trials; ++t)
      ind[t] = outage_center(b.center_decode_edge[i][t], b.center_own[i][t], thr);
    s.center[i] = outage_frequency(ind);
  }
  for (std::size_t t = 0; t < b.n_trials; ++t) ind[t] = outage_edge(b.edge[t], thr);
  s.edge = outage_frequency(ind);
  for (std::size_t t = 0; t < b.n_trials; ++t) ind[t] = outage_edge(b.edge_no_comp[t], thr);
  s.edge_no_comp = outage_frequency(ind);
  return s;
}

UserStats estimate_ergodic_rate(const TrialBatch& b) {
  UserStats s;
  for (std::size_t i = 0; i < 2; ++i) s.center[i] = mean_rate(b.center_own[i]);
  s.edge = mean_rate(b.edge);
  s.edge_no_comp = mean_rate(b.edge_no_comp);
  return s;
}

void write_batch_csv(std::ostream& os, const TrialBatch& b) {
  os << "trial,center1_own,center1_decode_edge,center2_own,center2_decode_edge,edge,edge_no_comp\n";
  for (std::size_t t = 0; t < b.n_trials; ++t)
    os << t << ',' << b.center_own[0][t] << ',' << b.center_decode_edge[0][t] << ','
       << b.center_own[1][t] << ',' << b.center_decode_edge[1][t] << ',' << b.edge[t] << ','
       << b.edge_no_comp[t] << '\n';
}

}  // namespace riscomp
