#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace isac_fbl {

// SplitMix64 finalizer. Bijective on 64-bit words, used to whiten seeds and
// to derive substream seeds.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Seed of substream `index` under base seed `seed`. Every independently
// consumed random stream (codeword row, Monte Carlo trial, ...) gets its own
// substream, so results do not depend on how work is split across threads.
constexpr std::uint64_t substream_seed(std::uint64_t seed,
                                       std::uint64_t index) noexcept {
  return mix64(mix64(seed) ^ mix64(index * 0xD2B74407B1CE6E93ull +
                                   0x8CB92BA72F3D8DD7ull));
}

// Deterministic Gaussian source. Uniforms are mapped from mt19937_64 words by
// explicit bit manipulation and normals come from Box-Muller, because the
// std:: distribution templates are implementation-defined and would break
// cross-platform reproducibility of seeded runs.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

  // uniform on [0, 1), 53 random bits
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // uniform on [lo, hi)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // one Box-Muller pair of independent standard normals; u1 is kept in
  // (0, 1] so the log never sees zero
  void normal_pair(double& a, double& b) {
    const double u1 =
        (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    a = r * std::cos(phi);
    b = r * std::sin(phi);
  }

  double normal() {
    double a = 0.0, b = 0.0;
    normal_pair(a, b);
    return a;
  }

  // circularly-symmetric complex Gaussian with E|z|^2 = variance; exactly one
  // Box-Muller pair per sample
  std::complex<double> complex_normal(double variance) {
    double a = 0.0, b = 0.0;
    normal_pair(a, b);
    const double s = std::sqrt(0.5 * variance);
    return {s * a, s * b};
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace isac_fbl
