#pragma once

#include <cstdint>
#include <random>

namespace antijam {

/// splitmix64 finalizer; used to spread seeds before feeding mt19937_64.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Independent substream `stream` of master seed `seed`.  Substreams are the
/// unit of parallelism: episode e of a run uses substream(seed, e), so results
/// do not depend on thread count or evaluation order.
inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t stream) {
  return std::mt19937_64(mix64(mix64(seed) ^ mix64(stream)));
}

}  // namespace antijam
