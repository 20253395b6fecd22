#pragma once

#include <cstdint>
#include <random>

namespace riscomp {

/// splitmix64 finalizer; used to derive well-separated seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Random stream used by every sampler.
///
/// Substreams are addressed by (master seed, index): the engine seed is a
/// function of both, so trial i draws the same numbers no matter which
/// worker runs it or in which order.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  static Rng substream(std::uint64_t master, std::uint64_t index);

  double uniform();                          // [0, 1)
  double uniform(double lo, double hi);      // [lo, hi)
  double normal();                           // N(0, 1)
  double gamma(double shape, double scale);
  std::size_t index(std::size_t n);          // uniform on {0, ..., n-1}

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace riscomp
