#pragma once

#include <cstddef>
#include <vector>

#include "riscomp/rng.hpp"

namespace riscomp {

/// Fully connected layer, y = W x + b with W stored row-major (out x in).
struct Dense {
  std::size_t in = 0;
  std::size_t out = 0;
  std::vector<double> w;
  std::vector<double> b;

  Dense() = default;
  Dense(std::size_t in, std::size_t out) : in(in), out(out), w(in * out, 0.0), b(out, 0.0) {}
};

/// Multilayer perceptron: tanh on every hidden layer; the output layer is
/// linear unless `tanh_output` is set.
class Mlp {
 public:
  struct Cache {
    std::vector<std::vector<double>> acts;  // input, then each layer's output
  };

  Mlp() = default;
  /// sizes = {input, hidden..., output}.
  explicit Mlp(const std::vector<std::size_t>& sizes, bool tanh_output = false);

  std::size_t input_dim() const { return layers_.front().in; }
  std::size_t output_dim() const { return layers_.back().out; }
  bool tanh_output() const { return tanh_output_; }
  std::vector<Dense>& layers() { return layers_; }
  const std::vector<Dense>& layers() const { return layers_; }

  /// Orthogonal init per layer: `hidden_gain` on hidden layers, `out_gain` on the last.
  void init_orthogonal(Rng& rng, double hidden_gain, double out_gain);

  std::vector<double> forward(const std::vector<double>& x, Cache* cache = nullptr) const;

  /// Accumulates parameter gradients into `grad` (same shapes) and returns dL/dx.
  std::vector<double> backward(const Cache& cache, const std::vector<double>& dout,
                               Mlp& grad) const;

  void zero();

 private:
  std::vector<Dense> layers_;
  bool tanh_output_ = false;
};

/// Fills an out x in matrix with orthonormal rows (or columns, whichever is
/// shorter) scaled by `gain`.
void orthogonal_fill(std::vector<double>& w, std::size_t out, std::size_t in, double gain, Rng& rng);

}  // namespace riscomp
