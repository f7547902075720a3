// SPDX-FileCopyrightText: © 2026 The rirforge Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "rirforge/acoustics.hpp"

namespace rirforge {

/// Sampled room impulse response. `direct_index` marks the direct-path arrival:
/// the exact arrival sample for simulated responses, the largest absolute
/// sample for responses read from elsewhere (see from_samples).
struct Rir {
    std::vector<double> samples;
    double sample_rate = 0.0;
    std::size_t direct_index = 0;

    std::size_t size() const { return samples.size(); }
    double duration_s() const { return static_cast<double>(samples.size()) / sample_rate; }

    /// sample_rate > 0, samples non-empty, direct_index in bounds.
    void validate() const;

    /// Wraps raw samples, locating the direct path by peak magnitude.
    static Rir from_samples(std::vector<double> samples, double sample_rate);
};

/// Index of the largest |sample|; the first one wins on ties.
std::size_t peak_index(std::span<const double> samples);

inline constexpr int kDefaultSincTaps = 81;

struct SimRequest {
    RoomSpec room;
    Position source;
    Position mic;
    double sample_rate = 48000.0;
    double max_rir_seconds = 1.0;
    // nullopt selects "auto": every image arriving within max_rir_seconds.
    std::optional<int> reflection_order;
    int sinc_taps = kDefaultSincTaps;
    double wall_margin = kDefaultWallMargin;

    void validate() const;
};

/// Shoebox image-source simulation. Each image contributes
/// prod(beta_wall^reflections) / (4 pi d) at delay d / c, with beta = sqrt(1 - alpha),
/// spread over `sinc_taps` samples by a Hann-windowed sinc centred on the exact
/// arrival time.
Rir simulate(const SimRequest& req);

struct SimOptions {
    double speed_of_sound = kDefaultSpeedOfSound;
    // RIR length = direct delay + length_factor * t60 (at least 1.25).
    double length_factor = 1.5;
    int sinc_taps = kDefaultSincTaps;
    double wall_margin = kDefaultWallMargin;
    // Match the T30 of the image-source decay instead of using Eyring directly.
    bool match_t60 = true;
};

/// Uniform absorption whose image-source response, rendered at
/// `sample_rate`, has a measured T60 of `t60_s` for this geometry.
///
/// A shoebox image-source response is not a diffuse field. Paths along the
/// long axes reflect less often and dominate the late decay, and images on
/// the regular lattice coincide in time and add coherently, so the Eyring
/// absorption yields a measured T60 20% (cube) to 150% (elongated rooms) too
/// long. Starting from Eyring, the per-reflection loss is refined by secant
/// steps on a nearest-sample render until estimate_t60 agrees within 1%
/// (at most 10 renders; the closest one wins).
double matched_absorption_for_t60(const RoomDims& dims, const Position& source, const Position& mic,
                                  double t60_s, double sample_rate, const SimOptions& opts = {});

/// Picks a uniform absorption for `t60_s` (matched or plain Eyring, per
/// opts.match_t60) and fills a request with automatic reflection order and
/// length d/c + max(length_factor, 1.25) * t60.
SimRequest request_for_t60(const RoomDims& dims, const Position& source, const Position& mic, double t60_s,
                           double sample_rate, const SimOptions& opts = {});

/// simulate(request_for_t60(...)).
Rir simulate_for_t60(const RoomDims& dims, const Position& source, const Position& mic, double t60_s,
                     double sample_rate, const SimOptions& opts = {});

}  // namespace rirforge
