// SPDX-FileCopyrightText: © 2026 The rirforge Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rirforge/rir_sim.hpp"

namespace rirforge {

/// Schroeder energy decay curve in dB, 0 at the first sample. Entries after
/// the last nonzero sample are -infinity.
struct EnergyDecayCurve {
    std::vector<double> edc_db;
    double sample_rate = 0.0;

    /// Last finite value, i.e. the level just before the energy runs out.
    double floor_db() const;
};

EnergyDecayCurve schroeder_edc(std::span<const double> samples, double sample_rate);
EnergyDecayCurve schroeder_edc(const Rir& rir);

/// Same integration over per-bin energies instead of amplitudes.
EnergyDecayCurve schroeder_edc_from_energy(std::span<const double> energy, double bin_rate);

enum class DecayFitRange { T30, T20 };

struct T60Estimate {
    double t60_s = 0.0;
    double fit_quality = 0.0;  // |Pearson r| of the decay-line fit
    DecayFitRange range = DecayFitRange::T30;

    bool used_fallback() const { return range == DecayFitRange::T20; }
};

/// Least-squares line over the EDC between -5 and -35 dB (T30), or -5 and
/// -25 dB (T20) when the usable EDC stops short of -35 dB. The usable EDC ends
/// 5 dB above its floor, so truncated responses do not bias the slope.
/// Throws AnalysisError if even -25 dB is out of reach.
T60Estimate estimate_t60(const Rir& rir);
T60Estimate estimate_t60(const EnergyDecayCurve& edc);

inline constexpr double kDefaultDirectHalfWindowMs = 2.5;
inline constexpr double kClarityWindowMs = 50.0;

/// Energy within +/- half window of the direct path over the rest, in dB.
/// +infinity when nothing lies outside the window.
double drr(const Rir& rir, double direct_half_window_ms = kDefaultDirectHalfWindowMs);

/// Energy in [N1, N1 + 50 ms) over [N1 + 50 ms, end), in dB. +infinity when
/// there is no late energy.
double c50(const Rir& rir);

struct RirStats {
    std::optional<double> t60_s;
    std::optional<double> fit_quality;
    std::optional<DecayFitRange> t60_range;
    std::string t60_error;  // set when the T60 fit failed
    double drr_db = 0.0;
    double c50_db = 0.0;
    std::size_t direct_index = 0;
    double sample_rate = 0.0;
    std::size_t length = 0;
};

/// All descriptors at once; a failed T60 fit is recorded rather than thrown.
RirStats analyze(const Rir& rir);

}  // namespace rirforge
