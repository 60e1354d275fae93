#ifndef ISD_RNG_HPP
#define ISD_RNG_HPP

#include <cstdint>
#include <random>

namespace isd {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-based seed splitting: every stage/retry derives its own stream
/// from the single user-facing 64-bit seed, so concurrent or reordered
/// stages stay reproducible.
inline std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  return std::mt19937_64(split_seed(seed, stream));
}

/// Exact Bernoulli(num/den) draw from one 64-bit variate.
/// Deterministic across platforms (no std::distribution involved).
inline bool bernoulli_exact(std::mt19937_64& rng, std::uint64_t num, std::uint64_t den) {
  if (num >= den) return true;
  // accept iff draw < num/den * 2^64, computed without overflow via 128-bit
  unsigned __int128 threshold = (static_cast<unsigned __int128>(num) << 64) / den;
  return static_cast<unsigned __int128>(rng()) < threshold;
}

/// Uniform integer in [0, bound) by rejection; deterministic across platforms.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound <= 1) return 0;
  std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
  for (;;) {
    std::uint64_t x = rng();
    if (x >= threshold) return x % bound;
  }
}

}  // namespace isd

#endif  // ISD_RNG_HPP
