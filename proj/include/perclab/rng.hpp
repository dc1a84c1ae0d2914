#pragma once

#include <cstdint>

namespace perclab {

using Seed = std::uint64_t;

// SplitMix64 (Steele/Lea/Flood): golden-gamma counter plus a murmur-style
// finalizer. Small, splittable, and fully reproducible from a 64-bit seed,
// which is all the replica machinery needs.
class SplitMix64 {
 public:
  explicit SplitMix64(Seed seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // uniform in [0,1), 53 random bits
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  // uniform in {0,...,n-1}; bias is O(n/2^64), irrelevant for small n
  std::uint32_t below(std::uint32_t n) {
    return static_cast<std::uint32_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

 private:
  std::uint64_t state_;
};

// Splits one master seed into per-task seeds. Injective in task_index for a
// fixed master: the increment multiplier is odd (a bijection mod 2^64) and
// the finalizer is itself a bijection.
inline Seed derive_seed(Seed master, std::uint64_t task_index) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ull * (task_index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace perclab
