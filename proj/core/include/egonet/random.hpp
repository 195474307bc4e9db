#pragma once

// Counter-based seed derivation. Any random stream in the library is seeded
// from (master seed, stream coordinates), so results do not depend on the
// order in which parallel work items run.

#include <cstdint>
#include <initializer_list>
#include <random>

namespace egonet {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> coords) {
  std::uint64_t h = splitmix64(master);
  for (std::uint64_t c : coords) h = splitmix64(h ^ splitmix64(c + 0x632be59bd9b4e019ULL));
  return h;
}

inline Rng make_rng(std::uint64_t master, std::initializer_list<std::uint64_t> coords) {
  return Rng(derive_seed(master, coords));
}

}  // namespace egonet
