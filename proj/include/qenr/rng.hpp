#pragma once

#include <cstdint>
#include <cmath>
#include <random>

// Reproducible random-number plumbing. The generator contract is fixed:
// a std::mt19937_64 seeded with a single 64-bit value, uniform doubles
// formed from the top 53 bits, and normals by the Box-Muller transform.
// Substreams (per sweep point, per trial) are derived from a base seed
// with the splitmix64 finalizer so they are decorrelated and reproducible.

namespace qenr {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Seed of substream `index` of the stream rooted at `base`.
constexpr std::uint64_t derive_stream(std::uint64_t base,
                                      std::uint64_t index) {
  return splitmix64(base ^ splitmix64(index + 1));
}

class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : gen_(seed) {}

  // Uniform on (0, 1]; never zero, so log() below stays finite.
  double uniform() {
    return static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double radius = std::sqrt(-2.0 * std::log(uniform()));
    const double angle = 2.0 * 3.14159265358979323846 * uniform();
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace qenr
