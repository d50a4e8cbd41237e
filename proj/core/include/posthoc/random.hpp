#pragma once

#include <cstdint>

namespace posthoc {

// Counter-based draws: each value is a pure function of its key, so the
// thread that generates a replicate does not affect its values.
struct StreamKey {
  std::uint64_t seed = 0;
  std::uint64_t rep = 0;
  std::uint64_t index = 0;
};

std::uint64_t mix64(std::uint64_t x) noexcept;

/// Uniform on the open interval (0, 1).
double keyed_uniform(const StreamKey& key, std::uint64_t lane) noexcept;

/// Standard normal (Box-Muller on two keyed uniforms).
double keyed_normal(const StreamKey& key) noexcept;

}  // namespace posthoc
