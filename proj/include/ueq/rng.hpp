#ifndef UEQ_RNG_HPP
#define UEQ_RNG_HPP

#include <cstdint>
#include <random>

namespace ueq {

// std::uniform_int_distribution is implementation-defined, so seeded runs
// would not reproduce across standard libraries. These draws are pinned to
// the mt19937_64 bit stream instead.

/// Unbiased uniform draw from [0, bound) via rejection sampling.
inline std::uint64_t uniform_mod(std::mt19937_64& eng, std::uint64_t bound) {
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  for (;;) {
    std::uint64_t v = eng();
    if (v < limit) return v % bound;
  }
}

/// Uniform double in [0, 1) with 53 significant bits.
inline double uniform_unit(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1p-53;
}

/// Engine for a derived stream, deterministic in (seed, index).
/// seed_seq keeps 32 bits per entry, so both words are split.
inline std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace ueq

#endif  // UEQ_RNG_HPP
