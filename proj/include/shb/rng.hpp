#ifndef SHB_RNG_HPP
#define SHB_RNG_HPP

#include <cstdint>
#include <random>

namespace shb {

/// SplitMix64 step. Used only to derive well-separated substream seeds; the
/// streams themselves are mt19937_64.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Independent substream for (seed, stream_id). Identical inputs give the
/// identical generator; distinct stream ids give statistically independent
/// streams, so replications can run on any number of workers.
inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream_id) {
  std::uint64_t state = seed;
  splitmix64(state);
  state ^= 0xD1B54A32D192ED03ull * (stream_id + 1);
  const std::uint64_t derived = splitmix64(state);
  return std::mt19937_64(derived);
}

}  // namespace shb

#endif  // SHB_RNG_HPP
