#pragma once

#include <cstdint>
#include <random>

#include "frdct/mathutil.hpp"

namespace frdct {

// Deterministic random source. Draws are produced by explicit inverse-CDF
// transforms of raw 53-bit uniforms so that streams are reproducible across
// standard libraries and platforms for a given seed.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0,1) with 53-bit resolution.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform on (0,1): never exactly 0 (safe to push through quantiles).
  double uniform_open() {
    double u = uniform();
    return (u > 0.0) ? u : 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double standard_normal() {
    return mathutil::normal_quantile(uniform_open());
  }

private:
  std::mt19937_64 engine_;
};

}  // namespace frdct
