// SPDX-FileCopyrightText: © 2026 The rirforge Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rirforge/rir_sim.hpp"

namespace rirforge {

enum class DecayMode {
    Truncate,     // "nd": unit gain through the offset, zero after
    ConstantT60,  // "const": fixed exponential reaching -60 dB at t60max
    AdaptiveT60,  // "adaptive": rate chosen from the measured T60
};

std::string_view to_string(DecayMode mode);
DecayMode decay_mode_from_string(std::string_view name);

/// Target definition: keep the response untouched for `offset_ms` past the
/// direct path, then cut or decay it. An infinite offset is the identity.
struct ShapingSpec {
    double offset_ms = 0.0;
    DecayMode mode = DecayMode::ConstantT60;
    double t60max_ms = 300.0;  // ignored by Truncate

    static ShapingSpec truncate(double offset_ms);
    static ShapingSpec constant(double offset_ms, double t60max_ms);
    static ShapingSpec adaptive(double offset_ms, double t60max_ms);
    static ShapingSpec identity();

    bool is_identity() const;

    /// offset >= 0; for decaying modes t60max finite and > offset.
    void validate() const;

    bool operator==(const ShapingSpec&) const = default;
};

inline constexpr double kOffsetPresetsMs[] = {0.0, 5.0, 30.0, 50.0, 80.0};
inline constexpr double kT60MaxPresetsMs[] = {150.0, 300.0, 500.0};

struct GainCurve {
    std::vector<double> gains;
    // Adaptive mode only: the response already decays at least as fast as
    // t60max, so the curve was left at unity.
    bool identity_fallback = false;
};

/// w(n) = 1 for n <= N1 + Noff, then 10^(-q (n - N1 - Noff)) with
/// q = 3 / (Nmax - Noff), Nmax = round(t60max fs), Noff = round(offset fs).
/// Every offset therefore meets -60 dB at N1 + Nmax.
GainCurve constant_window(std::size_t rir_len, std::size_t direct_index, double sample_rate,
                          const ShapingSpec& spec);

/// Same flat-then-exponential shape with the rate reduced by the response's
/// own decay, q = (3 - 3 Nmax / (T60 fs)) / (Nmax - Noff); with no offset this
/// is 3 / (t60max fs) - 3 / (T60 fs). Returns unity gains (flagged) when q <= 0.
GainCurve adaptive_window(const Rir& rir, double measured_t60_s, const ShapingSpec& spec);

/// Unit gain for n <= N1 + Noff, zero after.
GainCurve truncate_window(std::size_t rir_len, std::size_t direct_index, double sample_rate,
                          const ShapingSpec& spec);

/// Dispatches on spec.mode. Adaptive mode estimates the T60 when
/// `measured_t60_s` is not given.
GainCurve shaping_gains(const Rir& rir, const ShapingSpec& spec, std::optional<double> measured_t60_s = {});

/// rir * gains, same length and direct index.
Rir apply_shaping(const Rir& rir, const ShapingSpec& spec, std::optional<double> measured_t60_s = {});

}  // namespace rirforge
