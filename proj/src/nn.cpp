#include "riscomp/nn.hpp"

#include <algorithm>
#include <cmath>

#include "riscomp/error.hpp"

namespace riscomp {

Mlp::Mlp(const std::vector<std::size_t>& sizes, bool tanh_output) : tanh_output_(tanh_output) {
  if (sizes.size() < 2) throw ShapeError("MLP: need input and output sizes");
  for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
    if (sizes[i] == 0 || sizes[i + 1] == 0) throw ShapeError("MLP: zero-width layer");
    layers_.emplace_back(sizes[i], sizes[i + 1]);
  }
}

void orthogonal_fill(std::vector<double>& w, std::size_t out, std::size_t in, double gain,
                     Rng& rng) {
  // Gram-Schmidt on the shorter side of a Gaussian matrix.
  const bool by_rows = out <= in;
  const std::size_t n = by_rows ? out : in;     // vectors to orthonormalize
  const std::size_t len = by_rows ? in : out;   // their length
  std::vector<std::vector<double>> v(n, std::vector<double>(len));
  for (auto& row : v)
    for (double& x : row) x = rng.normal();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      double dot = 0.0;
      for (std::size_t k = 0; k < len; ++k) dot += v[i][k] * v[j][k];
      for (std::size_t k = 0; k < len; ++k) v[i][k] -= dot * v[j][k];
    }
    double norm = 0.0;
    for (double x : v[i]) norm += x * x;
    norm = std::sqrt(norm);
    for (double& x : v[i]) x /= norm;
  }
  w.assign(out * in, 0.0);
  for (std::size_t r = 0; r < out; ++r)
    for (std::size_t c = 0; c < in; ++c)
      w[r * in + c] = gain * (by_rows ? v[r][c] : v[c][r]);
}

void Mlp::init_orthogonal(Rng& rng, double hidden_gain, double out_gain) {
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    Dense& d = layers_[l];
    orthogonal_fill(d.w, d.out, d.in, l + 1 == layers_.size() ? out_gain : hidden_gain, rng);
    std::fill(d.b.begin(), d.b.end(), 0.0);
  }
}

std::vector<double> Mlp::forward(const std::vector<double>& x, Cache* cache) const {
  if (x.size() != input_dim()) throw ShapeError("MLP: input dimension mismatch");
  if (cache) {
    cache->acts.clear();
    cache->acts.push_back(x);
  }
  std::vector<double> a = x;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const Dense& d = layers_[l];
    std::vector<double> z(d.b);
    for (std::size_t r = 0; r < d.out; ++r) {
      const double* wr = &d.w[r * d.in];
      double s = 0.0;
      for (std::size_t c = 0; c < d.in; ++c) s += wr[c] * a[c];
      z[r] += s;
    }
    if (l + 1 < layers_.size() || tanh_output_)
      for (double& v : z) v = std::tanh(v);
    a = std::move(z);
    if (cache) cache->acts.push_back(a);
  }
  return a;
}

std::vector<double> Mlp::backward(const Cache& cache, const std::vector<double>& dout,
                                  Mlp& grad) const {
  if (cache.acts.size() != layers_.size() + 1) throw ShapeError("MLP: stale forward cache");
  if (dout.size() != output_dim()) throw ShapeError("MLP: output gradient dimension mismatch");
  std::vector<double> delta = dout;
  for (std::size_t l = layers_.size(); l-- > 0;) {
    const Dense& d = layers_[l];
    Dense& g = grad.layers_[l];
    if (l + 1 < layers_.size() || tanh_output_) {
      const auto& y = cache.acts[l + 1];
      for (std::size_t r = 0; r < d.out; ++r) delta[r] *= 1.0 - y[r] * y[r];
    }
    const auto& in = cache.acts[l];
    std::vector<double> prev(d.in, 0.0);
    for (std::size_t r = 0; r < d.out; ++r) {
      const double dr = delta[r];
      g.b[r] += dr;
      const double* wr = &d.w[r * d.in];
      double* gr = &g.w[r * d.in];
      for (std::size_t c = 0; c < d.in; ++c) {
        gr[c] += dr * in[c];
        prev[c] += dr * wr[c];
      }
    }
    delta = std::move(prev);
  }
  return delta;
}

void Mlp::zero() {
  for (auto& d : layers_) {
    std::fill(d.w.begin(), d.w.end(), 0.0);
    std::fill(d.b.begin(), d.b.end(), 0.0);
  }
}

}  // namespace riscomp
