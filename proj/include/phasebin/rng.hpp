#pragma once

#include <cstdint>
#include <random>

namespace phasebin {

/// Engine for one deterministic stream. Streams with different (seed, stream, domain)
/// are seeded independently through std::seed_seq.
inline std::mt19937_64 stream_engine(std::uint64_t seed, std::uint64_t stream, std::uint32_t domain = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32), domain};
  return std::mt19937_64(seq);
}

}  // namespace phasebin
