#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <cmath>

namespace wellvoice {

/// Unbiased index in [0, bound) from a 64-bit engine; independent of the
/// standard library's distribution implementations.
inline std::uint64_t UniformIndex(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t r;
  do {
    r = rng();
  } while (r >= limit);
  return r % bound;
}

/// Fisher-Yates.
template <typename T>
void Shuffle(std::span<T> items, std::mt19937_64& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(UniformIndex(rng, i));
    std::swap(items[i - 1], items[j]);
  }
}

template <typename Container>
void Shuffle(Container& items, std::mt19937_64& rng) {
  Shuffle(std::span(items.data(), items.size()), rng);
}

/// Standard normal via Box-Muller on 53-bit uniforms.
inline double StandardNormal(std::mt19937_64& rng) {
  double u1;
  do {
    u1 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  } while (u1 <= 0.0);
  const double u2 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

inline double Uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

}  // namespace wellvoice
