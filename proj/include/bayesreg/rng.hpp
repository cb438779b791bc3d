#ifndef BAYESREG_RNG_HPP
#define BAYESREG_RNG_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

namespace bayesreg {

using Rng = std::mt19937_64;

/// splitmix64 finaliser.
std::uint64_t mix64(std::uint64_t x);

/// Stream id derived from a root seed and a path of indices, e.g.
/// (seed, step, setting, replicate). Distinct paths give unrelated streams.
std::uint64_t stream_id(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

/// Generator for one stream id. There is no hidden global generator.
Rng make_stream(std::uint64_t id);

inline Rng make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
  return make_stream(stream_id(seed, path));
}

}  // namespace bayesreg

#endif  // BAYESREG_RNG_HPP
