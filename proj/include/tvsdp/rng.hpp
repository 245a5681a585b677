#ifndef TVSDP_RNG_HPP
#define TVSDP_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace tvsdp {

/// Deterministic random source for instance generation.
///
/// Substreams are derived from (seed, stream) with a splitmix64 mix, so
/// drawing more values from one stream never shifts the values of another.
/// Gaussians use an explicit Box-Muller transform on top of mt19937_64
/// (whose output sequence is fixed by the standard), so generated instances
/// do not depend on the library's std::normal_distribution implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : engine_(mix(mix(seed) ^ mix(stream + 0x9E3779B97F4A7C15ull))) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform in (lo, hi].
  double uniform_open(double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53);
  }

  double normal(double mean = 0.0, double sd = 1.0) {
    const double u1 = uniform_open(0.0, 1.0);  // (0,1], keeps log finite
    const double u2 = uniform();
    const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
    return mean + sd * z;
  }

 private:
  // splitmix64 finalizer
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::mt19937_64 engine_;
};

}  // namespace tvsdp

#endif  // TVSDP_RNG_HPP
