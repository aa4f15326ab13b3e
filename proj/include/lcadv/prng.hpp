#pragma once

#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

namespace lcadv {

// splitmix64 (Vigna, public domain). Used everywhere a reproducible stream
// is needed: outputs are identical across platforms for a given seed.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random mantissa bits.
  double next_unit() {
    return static_cast<double>(next() >> 11) * (1.0 / 9007199254740992.0);
  }

  // Uniform in [0, n). Modulo reduction; the slight bias is irrelevant for
  // shuffling and sampling, and the result is portable.
  std::uint64_t next_below(std::uint64_t n) { return next() % n; }

  double next_in(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

 private:
  std::uint64_t state_;
};

// Derives an independent stream key from up to three coordinates, so that
// (seed, run, index) cells can be generated in any order or in parallel.
inline std::uint64_t stream_key(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::uint64_t k = SplitMix64(seed).next();
  k = SplitMix64(k ^ a).next();
  return SplitMix64(k ^ b).next();
}

// First k indices of a Fisher-Yates pass over [0, n).
inline std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, SplitMix64& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  if (k > n) k = n;
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.next_below(n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  return idx;
}

}  // namespace lcadv
