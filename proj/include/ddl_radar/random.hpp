#pragma once

#include <cstdint>
#include <random>

#include "ddl_radar/types.hpp"

namespace ddl_radar {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent stream for (seed, a, b), e.g. (seed, sweep point, trial).
/// Streams depend only on the key, so trial order and threading do not
/// change results.
inline Rng make_stream(std::uint64_t seed, std::uint64_t a = 0, std::uint64_t b = 0) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ splitmix64(a + 0x632be59bd9b4e019ULL));
  h = splitmix64(h ^ splitmix64(b + 0x85157af5ULL));
  return Rng(h);
}

/// Circular complex Gaussian with E|z|^2 = 1.
inline cplx complex_normal(Rng& rng) {
  std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
  const double re = nd(rng);
  const double im = nd(rng);
  return {re, im};
}

inline CVector complex_normal_vector(Eigen::Index n, Rng& rng) {
  CVector g(n);
  for (Eigen::Index i = 0; i < n; ++i) g(i) = complex_normal(rng);
  return g;
}

}  // namespace ddl_radar
