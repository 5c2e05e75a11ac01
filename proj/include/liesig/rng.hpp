#ifndef LIESIG_RNG_HPP
#define LIESIG_RNG_HPP

// Seedable, platform-independent random stream.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard.  Doubles are built from the top 53 bits directly rather than via
// std::uniform_real_distribution (whose algorithm is implementation-defined).
//
// Stream splitting: work is cut into fixed-size chunks, and chunk c of a run
// seeded with s draws from RngStream(s, c), whose engine seed is
// splitmix64(splitmix64(s) ^ (c + 1) * golden).  The chunk-to-stream map is
// independent of the worker count, so serial and threaded runs see the same
// samples.

#include <cstdint>
#include <random>

namespace liesig {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t chunk) {
  return splitmix64(splitmix64(seed) ^ ((chunk + 1) * 0x9E3779B97F4A7C15ULL));
}

class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t chunk = 0) : engine_(derive_stream_seed(seed, chunk)) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace liesig

#endif
