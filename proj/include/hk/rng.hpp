#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace hk {

// splitmix64 finalizer; used to derive per-run seeds from a study seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Per-run seed for (study seed, population size, repetition index):
//   s1 = splitmix64(study_seed ^ splitmix64(n))
//   s2 = splitmix64(s1 ^ splitmix64(rep + 1))
// Documented so studies can be reproduced run by run.
inline std::uint64_t derive_run_seed(std::uint64_t study_seed, std::uint64_t n,
                                     std::uint64_t rep) {
  const std::uint64_t s1 = splitmix64(study_seed ^ splitmix64(n));
  return splitmix64(s1 ^ splitmix64(rep + 1));
}

// Uniform double in [0, 1) from the top 53 bits of one engine draw. Avoids
// std::uniform_real_distribution, whose output is implementation-defined.
inline double u01(std::mt19937_64& gen) {
  return std::ldexp(static_cast<double>(gen() >> 11), -53);
}

inline double uniform_in(std::mt19937_64& gen, double lo, double hi) {
  return lo + u01(gen) * (hi - lo);
}

}  // namespace hk
