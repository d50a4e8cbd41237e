#include "posthoc/random.hpp"

#include <cmath>
#include <numbers>

namespace posthoc {

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double keyed_uniform(const StreamKey& key, std::uint64_t lane) noexcept {
  std::uint64_t h = mix64(key.seed);
  h = mix64(h ^ key.rep);
  h = mix64(h ^ key.index);
  h = mix64(h ^ lane);
  return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

double keyed_normal(const StreamKey& key) noexcept {
  const double u1 = keyed_uniform(key, 0);
  const double u2 = keyed_uniform(key, 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace posthoc
