#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "hullscope/types.hpp"

namespace hullscope {

// Distributions are hand-rolled so that a seed reproduces the same stream on
// every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
  }

  cplx complex_normal() { return {normal(), normal()}; }

  /// Uniform point of the open disc of the given radius.
  cplx in_disc(double radius) {
    const double r = radius * std::sqrt(uniform());
    return std::polar(r, kTwoPi * uniform());
  }

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace hullscope
