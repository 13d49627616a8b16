#pragma once

#include <cstdint>
#include <cmath>
#include <vector>

namespace covertnet {

/// Counter-based generator: each draw mixes (seed, stream, counter) through a
/// SplitMix64-style finalizer, so substreams are independent and any draw is
/// reproducible without sequential state. Substreams per trial index make
/// parallel trials deterministic.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix(seed ^ 0x9e3779b97f4a7c15ULL) ^ mix(stream + 0xbf58476d1ce4e5b9ULL)) {}

  std::uint64_t next_u64() { return mix(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

  /// Poisson sample; Knuth for small means, PTRS transformed rejection above.
  std::int64_t poisson(double mean);

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

  /// Stable substream id for (master seed, indices...) derivations.
  static std::uint64_t derive_stream(std::uint64_t a, std::uint64_t b, std::uint64_t c = 0) {
    return mix(a + 0x165667b19e3779f9ULL) ^ mix(b + 0x27d4eb2f165667c5ULL) ^ mix(c + 1);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace covertnet
