#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace mcds {

// std::uniform_int_distribution and std::shuffle are implementation-defined,
// so seeded results would differ between standard libraries. These helpers
// only rely on the engine's fully specified output sequence.

/// Uniform integer in [0, n) by rejection sampling. n must be > 0.
inline std::uint64_t uniform_index(std::mt19937_64& engine, std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t draw = engine();
    while (draw >= limit) draw = engine();
    return draw % n;
}

template <typename T>
void seeded_shuffle(std::span<T> items, std::mt19937_64& engine) {
    for (std::size_t i = items.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(uniform_index(engine, i));
        using std::swap;
        swap(items[i - 1], items[j]);
    }
}

}  // namespace mcds
