#pragma once

// Counter-based random streams. Every draw is a pure function of
// (key, counter): the SplitMix64 finalizer applied to
// key + counter * 0x9E3779B97F4A7C15. Substreams get their key by mixing
// the parent key with an index, so results do not depend on the order in
// which substreams are consumed or on the standard library in use.

#include <cstdint>

namespace qve {

constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class CounterRng {
 public:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

  explicit constexpr CounterRng(std::uint64_t key) noexcept : key_(key) {}

  /// Independent stream for `index` under this stream's key.
  constexpr CounterRng substream(std::uint64_t index) const noexcept {
    return CounterRng(splitmix64_mix(key_ ^ splitmix64_mix(index + kGolden)));
  }

  constexpr std::uint64_t next_u64() noexcept {
    return splitmix64_mix(key_ + (++counter_) * kGolden);
  }

  /// Uniform on [0, 1) with 53 random bits.
  constexpr double uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller (uses two draws).
  double normal() noexcept;

  std::uint64_t key() const noexcept { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace qve
