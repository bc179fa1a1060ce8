#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace pvsa {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stream key for a (seed, tag, ...) tuple; independent of evaluation order.
inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = splitmix64(seed);
  for (auto p : parts) h = splitmix64(h ^ splitmix64(p));
  return h;
}

// Uniform integer in [lo, hi]. Rejection sampling on the raw 64-bit stream so
// the sequence does not depend on the standard library's distributions.
inline long draw_uniform(std::mt19937_64& gen, long lo, long hi) {
  std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  std::uint64_t limit = span == 0 ? 0 : (~std::uint64_t{0} / span) * span;
  for (;;) {
    std::uint64_t r = gen();
    if (span == 0) return static_cast<long>(r);
    if (r < limit) return lo + static_cast<long>(r % span);
  }
}

}  // namespace pvsa
