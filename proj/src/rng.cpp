#include "gibbsgeom/rng.hpp"

#include <cmath>
#include <numbers>

namespace gibbsgeom {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return counter_draw(seed, stream, 0xD1B54A32D192ED03ULL);
}

double StreamRng::normal() {
  double u1 = open_uniform();
  double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

// Lemire-style rejection keeps the result unbiased.
std::uint64_t StreamRng::below(std::uint64_t n) {
  if (n <= 1) return 0;
  std::uint64_t limit = -n % n;
  while (true) {
    unsigned __int128 m = static_cast<unsigned __int128>(next()) * n;
    if (static_cast<std::uint64_t>(m) >= limit) return static_cast<std::uint64_t>(m >> 64);
  }
}

}  // namespace gibbsgeom
