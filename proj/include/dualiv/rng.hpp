#pragma once

#include <cstdint>
#include <random>

#include "dualiv/normal.hpp"

namespace dualiv {

// SplitMix64 output function.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed of replication `index` under `master`; independent of scheduling.
constexpr std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return splitmix64(master ^ splitmix64(index));
}

// Uniforms on the open interval (0, 1) from the top 53 bits of a 64-bit
// Mersenne Twister, and standard normals by inversion. Both are bit-exact
// across platforms.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

  double uniform() noexcept {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal() noexcept { return normal::quantile(uniform()); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace dualiv
