// SPDX-FileCopyrightText: © 2026 The rirforge Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "rirforge/rng.hpp"

#include <algorithm>
#include <limits>

namespace rirforge {

namespace {

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index) {
    constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
    return mix64(mix64(seed + kGolden) + (index + 1) * kGolden);
}

double Rng::uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
    return std::min(hi, lo + (hi - lo) * uniform01());
}

std::size_t Rng::index(std::size_t n) {
    // Rejection keeps the draw exactly uniform.
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t r;
    do {
        r = engine_();
    } while (r >= limit);
    return static_cast<std::size_t>(r % bound);
}

}  // namespace rirforge
