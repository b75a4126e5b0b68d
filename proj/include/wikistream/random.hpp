#pragma once

#include <cstdint>
#include <random>

namespace wikistream {

using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent generator for lane `lane` of a run seeded with `seed`. Lanes
/// never depend on scheduling, so parallel and serial runs draw identically.
inline Rng substream(std::uint64_t seed, std::uint64_t lane) {
  return Rng{splitmix64(seed ^ splitmix64(lane + 0x632be59bd9b4e019ULL))};
}

inline double draw_beta(Rng& rng, double a, double b) {
  std::gamma_distribution<double> ga(a, 1.0), gb(b, 1.0);
  double x = ga(rng);
  double y = gb(rng);
  double s = x + y;
  return s > 0 ? x / s : 0.5;
}

}  // namespace wikistream
