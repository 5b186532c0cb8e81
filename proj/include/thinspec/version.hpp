#pragma once

namespace thinspec {

inline constexpr const char* kVersion = "1.0.0";

// Default RNG seed for reproducible runs; override with --seed or the
// `seed` config key.
inline constexpr unsigned long long kDefaultSeed = 424242ULL;

}  // namespace thinspec
