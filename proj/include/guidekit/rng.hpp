#pragma once

#include <cstdint>

namespace guidekit {

/// SplitMix64 finalizer. Bijective 64-bit mixing with good avalanche.
constexpr uint64_t mix64(uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

/// Counter-based pseudo-random stream: draw i is mix64(key + i*golden).
///
/// The generator is splittable: split() derives a child stream whose key is
/// taken from the parent stream, so independent components (one per search,
/// one per guidance instance) can own their own streams while the whole run
/// stays reproducible from a single seed. split() consumes one slot of the
/// parent stream. Not cryptographic.
class SplitRng {
 public:
  explicit SplitRng(uint64_t seed) : key_(mix64(seed ^ kSeedTag)) {}

  uint64_t next_u64() {
    counter_ += kGolden;
    return mix64(key_ + counter_);
  }

  /// Uniform double in [0, 1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  /// Uniform integer in [0, n). n must be > 0.
  uint64_t next_below(uint64_t n) {
    return static_cast<uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  /// Derive an independent child stream.
  SplitRng split() { return SplitRng(next_u64() ^ kSplitTag); }

 private:
  static constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
  static constexpr uint64_t kSeedTag = 0x1BD11BDAA9FC1A22ULL;
  static constexpr uint64_t kSplitTag = 0xD6E8FEB86659FD93ULL;

  uint64_t key_;
  uint64_t counter_ = 0;
};

}  // namespace guidekit
