#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace mcqual {

// 64-bit FNV-1a over a byte string.
std::uint64_t fnv1a64(std::string_view bytes);

// Child seed for batch `index` under role `tag`, computed as
// fnv1a64("<master>:<index>:<tag>") with decimal renderings of the integers.
// This is the only seed-derivation rule in the suite, so an independent
// implementation can reproduce published reports from the master seed alone.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index,
                          std::string_view tag);

// Deterministic random source: mt19937_64 plus explicit transforms. The
// standard <random> distributions are implementation-defined, so every
// transform is spelled out here to keep sample streams a property of this
// code base rather than of the C++ runtime.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Unbiased integer in [0, bound) by rejection; bound must be >= 1.
  std::uint64_t below(std::uint64_t bound);

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Standard normal via Box-Muller; the second value of each pair is cached.
  double normal();

  double cauchy(double location, double scale);

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace mcqual
