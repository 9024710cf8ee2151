#pragma once

#include <cstdint>
#include <random>

namespace sdet {

/// Identifies one independent random stream. Streams derived from distinct
/// keys are statistically independent; equal keys give bit-identical output.
struct StreamKey {
  std::uint64_t seed = 0;
  std::uint64_t cell = 0;
  std::uint64_t replicate = 0;
  std::uint64_t hypothesis = 0;
};

/// SplitMix64 finalizer, used to fold the key into a generator seed.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class RngStream {
 public:
  explicit RngStream(const StreamKey& key);
  explicit RngStream(std::uint64_t seed) : RngStream(StreamKey{seed, 0, 0, 0}) {}

  /// Uniform draw strictly inside (0,1) with 53 random bits.
  double uniform() noexcept {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  std::uint64_t bits() noexcept { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace sdet
