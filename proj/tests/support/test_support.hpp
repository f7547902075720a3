// SPDX-FileCopyrightText: © 2026 The rirforge Authors
//
// SPDX-License-Identifier: Apache-2.0

// Signal builders and scratch directories shared by the test binaries.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "rirforge/rir_sim.hpp"
#include "rirforge/rng.hpp"

namespace rirforge::test {

// h[n] = 10^(-3 n / (T fs)) starting at `onset`, so energy falls 60 dB in T.
inline Rir exponential_rir(double t60_s, double fs, std::size_t length, std::size_t onset = 0) {
    std::vector<double> h(length, 0.0);
    const double per_sample = -3.0 / (t60_s * fs);
    for (std::size_t n = onset; n < length; ++n) {
        h[n] = std::pow(10.0, per_sample * static_cast<double>(n - onset));
    }
    Rir rir;
    rir.samples = std::move(h);
    rir.sample_rate = fs;
    rir.direct_index = onset;
    return rir;
}

// Exponentially decaying Gaussian-ish noise with a spike at `onset` that tops
// any noise sample: the shape of a late reverberant tail, still with an exact
// energy envelope.
inline Rir noisy_exponential_rir(double t60_s, double fs, std::size_t length, std::uint64_t seed,
                                 std::size_t onset = 0) {
    Rng rng(seed);
    Rir rir = exponential_rir(t60_s, fs, length, onset);
    for (std::size_t n = onset + 1; n < length; ++n) {
        // Sum of four uniforms, variance 1/3; mean removed.
        double g = 0.0;
        for (int k = 0; k < 4; ++k) g += rng.uniform01();
        rir.samples[n] *= (g - 2.0) * std::sqrt(3.0) * 0.5;
    }
    rir.samples[onset] = 2.0;
    return rir;
}

// Speech stand-in: noise carried by a 4 Hz syllable envelope, with pauses.
inline std::vector<double> babble(std::size_t length, double fs, std::uint64_t seed, double level = 0.3) {
    Rng rng(seed);
    std::vector<double> x(length);
    double lp = 0.0;
    for (std::size_t n = 0; n < length; ++n) {
        const double t = static_cast<double>(n) / fs;
        const double env = std::max(0.0, std::sin(2.0 * std::numbers::pi * 4.0 * t)) *
                           (0.6 + 0.4 * std::sin(2.0 * std::numbers::pi * 0.7 * t));
        lp = 0.7 * lp + 0.3 * rng.uniform(-1.0, 1.0);
        x[n] = level * env * lp;
    }
    return x;
}

inline std::vector<double> white_noise(std::size_t length, std::uint64_t seed, double level = 0.1) {
    Rng rng(seed);
    std::vector<double> x(length);
    for (double& v : x) v = level * rng.uniform(-1.0, 1.0);
    return x;
}

inline double energy(const std::vector<double>& x) {
    double e = 0.0;
    for (double v : x) e += v * v;
    return e;
}

// Fresh directory under the system temp dir, removed on scope exit.
class ScratchDir {
public:
    explicit ScratchDir(const std::string& tag) {
        Rng rng(std::hash<std::string>{}(tag) ^ static_cast<std::uint64_t>(
                    std::filesystem::file_time_type::clock::now().time_since_epoch().count()));
        path_ = std::filesystem::temp_directory_path() /
                ("rirforge-" + tag + "-" + std::to_string(rng.next_u64() % 1000000007ULL));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~ScratchDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    ScratchDir(const ScratchDir&) = delete;
    ScratchDir& operator=(const ScratchDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

}  // namespace rirforge::test
