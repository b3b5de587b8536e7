#pragma once

#include <cstdint>
#include <random>

namespace ctg {

// Seeded generator with bit-portable output. The engine (mt19937_64) is fully
// specified by the standard; the uniform mappings are hand-rolled because
// std::uniform_*_distribution is implementation-defined and would break
// cross-platform reproducibility of seeded instances.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform double in [0, 1), 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [lo, hi], inclusive. Rejection sampling keeps the
  // distribution exact for any span.
  int uniform_int(int lo, int hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return lo + static_cast<int>(x % span);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ctg
