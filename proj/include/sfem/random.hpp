#pragma once

#include <cstdint>
#include <cstdlib>
#include <string>

namespace sfem {

/// Seed for randomized property probes: $SFEM_SEED when set, otherwise `fallback`.
inline std::uint64_t seed_from_env(std::uint64_t fallback = 20240611)
{
    if (const char* env = std::getenv("SFEM_SEED"); env != nullptr && *env != '\0') {
        return std::stoull(env);
    }
    return fallback;
}

} // namespace sfem
