#pragma once

#include <cstdint>
#include <random>

#include "scg/vec.hpp"

namespace scg {

// Deterministic random source. The engine is mt19937_64 (sequence fixed by the
// standard); uniform/normal transforms are implemented here instead of
// <random> distributions, whose output is implementation-defined. Traces must
// be reproducible bit-for-bit from (config, seed) alone.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // uniform on [0, 1), 53-bit resolution
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // standard normal via Box-Muller
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  Vec unit_vector(int dim) {
    Vec v(static_cast<std::size_t>(dim));
    while (true) {
      for (double& x : v) x = normal();
      const double n = norm(v);
      if (n > 1e-30) {
        scale(v, 1.0 / n);
        return v;
      }
    }
  }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace scg
