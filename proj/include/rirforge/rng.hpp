// SPDX-FileCopyrightText: © 2026 The rirforge Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace rirforge {

/// Child seed for stream `index` of `seed` (SplitMix64 finalizer over both).
/// Distinct indices give statistically independent streams.
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index);

/// mt19937_64 with distributions defined here rather than by the standard
/// library, so a seed reproduces the same draws on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// [0, 1) with 53 random bits.
    double uniform01();
    /// [lo, hi].
    double uniform(double lo, double hi);
    /// [0, n), n > 0.
    std::size_t index(std::size_t n);

    std::uint64_t next_u64() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace rirforge
