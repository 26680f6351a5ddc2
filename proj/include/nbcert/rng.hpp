#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace nbcert {

// All randomness in the library goes through these helpers so that a fixed
// seed yields identical output on every platform. std::shuffle and the
// distribution classes are implementation-defined, so we avoid them.

using Rng = std::mt19937_64;

// Uniform draw in [0, bound) by rejection; bound must be > 0.
inline std::uint64_t draw_below(Rng& rng, std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

template <typename T>
void fisher_yates(Rng& rng, std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(draw_below(rng, i));
        std::swap(items[i - 1], items[j]);
    }
}

}  // namespace nbcert
