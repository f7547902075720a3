// SPDX-FileCopyrightText: © 2026 The rirforge Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "rirforge/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rirforge/errors.hpp"

namespace rirforge {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double energy(std::span<const double> x) {
    double e = 0.0;
    for (double v : x) e += v * v;
    return e;
}

double ratio_db(double num, double den) {
    if (den == 0.0) return kInf;
    return 10.0 * std::log10(num / den);
}

std::size_t ms_to_samples(double ms, double fs) {
    return static_cast<std::size_t>(std::llround(ms * 1e-3 * fs));
}

struct LineFit {
    double slope = 0.0;
    double r = 0.0;
};

LineFit fit_line(std::span<const double> y, std::size_t first, double fs) {
    // x is time in seconds; centred sums keep precision for long ranges.
    const auto count = static_cast<double>(y.size());
    double mean_x = 0.0;
    double mean_y = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        mean_x += static_cast<double>(first + i) / fs;
        mean_y += y[i];
    }
    mean_x /= count;
    mean_y /= count;
    double sxx = 0.0;
    double syy = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double dx = static_cast<double>(first + i) / fs - mean_x;
        const double dy = y[i] - mean_y;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.r = (syy > 0.0) ? sxy / std::sqrt(sxx * syy) : 1.0;
    return fit;
}

}  // namespace

double EnergyDecayCurve::floor_db() const {
    for (auto it = edc_db.rbegin(); it != edc_db.rend(); ++it) {
        if (std::isfinite(*it)) return *it;
    }
    return 0.0;
}

EnergyDecayCurve schroeder_edc_from_energy(std::span<const double> energy, double bin_rate) {
    if (energy.empty()) {
        throw ValidationError("cannot integrate an empty RIR");
    }
    std::vector<double> tail(energy.size());
    double acc = 0.0;
    for (std::size_t i = energy.size(); i-- > 0;) {
        acc += energy[i];
        tail[i] = acc;
    }
    const double total = acc;
    if (!(total > 0.0)) {
        throw ValidationError("RIR has zero energy");
    }
    EnergyDecayCurve edc;
    edc.sample_rate = bin_rate;
    edc.edc_db.resize(energy.size());
    double prev = 0.0;
    for (std::size_t i = 0; i < energy.size(); ++i) {
        double db = (tail[i] > 0.0) ? 10.0 * std::log10(tail[i] / total) : -kInf;
        // Rounding in the running sum may produce a tiny uptick; the curve is
        // non-increasing by definition.
        if (i == 0) {
            db = 0.0;
        } else if (db > prev) {
            db = prev;
        }
        edc.edc_db[i] = db;
        prev = db;
    }
    return edc;
}

EnergyDecayCurve schroeder_edc(std::span<const double> samples, double sample_rate) {
    std::vector<double> energy(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) energy[i] = samples[i] * samples[i];
    return schroeder_edc_from_energy(energy, sample_rate);
}

EnergyDecayCurve schroeder_edc(const Rir& rir) {
    rir.validate();
    return schroeder_edc(rir.samples, rir.sample_rate);
}

T60Estimate estimate_t60(const EnergyDecayCurve& edc) {
    constexpr double kUpper = -5.0;
    const double usable = edc.floor_db() + 5.0;

    T60Estimate est;
    double lower;
    double scale;
    if (usable <= -35.0) {
        lower = -35.0;
        scale = 2.0;
        est.range = DecayFitRange::T30;
    } else if (usable <= -25.0) {
        lower = -25.0;
        scale = 3.0;
        est.range = DecayFitRange::T20;
    } else {
        throw AnalysisError("energy decay curve does not reach -25 dB above its floor; no decay region to fit");
    }

    const auto& y = edc.edc_db;
    const auto begin = std::find_if(y.begin(), y.end(), [](double v) { return v <= kUpper; });
    const auto end = std::find_if(begin, y.end(), [&](double v) { return v < lower; });
    const auto first = static_cast<std::size_t>(begin - y.begin());
    const auto count = static_cast<std::size_t>(end - begin);
    if (count < 2) {
        throw AnalysisError("decay region too short to fit");
    }
    const LineFit fit = fit_line(std::span<const double>(&y[first], count), first, edc.sample_rate);
    if (!(fit.slope < 0.0)) {
        throw AnalysisError("energy decay curve has no negative slope");
    }
    // Time to fall (upper - lower) dB along the fit, extrapolated to 60 dB.
    est.t60_s = scale * (kUpper - lower) / -fit.slope;
    est.fit_quality = std::min(1.0, std::abs(fit.r));
    return est;
}

T60Estimate estimate_t60(const Rir& rir) {
    return estimate_t60(schroeder_edc(rir));
}

double drr(const Rir& rir, double direct_half_window_ms) {
    rir.validate();
    if (!(direct_half_window_ms >= 0.0)) {
        throw ValidationError("direct window half-width must be non-negative");
    }
    const std::span<const double> h = rir.samples;
    const std::size_t w = ms_to_samples(direct_half_window_ms, rir.sample_rate);
    const std::size_t n1 = rir.direct_index;
    const std::size_t lo = n1 >= w ? n1 - w : 0;
    const std::size_t hi = std::min(h.size(), n1 + w + 1);
    const double total = energy(h);
    if (!(total > 0.0)) {
        throw ValidationError("RIR has zero energy");
    }
    const double direct = energy(h.subspan(lo, hi - lo));
    const double rest = energy(h.first(lo)) + energy(h.subspan(hi));
    return ratio_db(direct, rest);
}

double c50(const Rir& rir) {
    rir.validate();
    const std::span<const double> h = rir.samples;
    if (!(energy(h) > 0.0)) {
        throw ValidationError("RIR has zero energy");
    }
    const std::size_t n1 = rir.direct_index;
    const std::size_t split = std::min(h.size(), n1 + ms_to_samples(kClarityWindowMs, rir.sample_rate));
    const double early = energy(h.subspan(n1, split - n1));
    const double late = energy(h.subspan(split));
    return ratio_db(early, late);
}

RirStats analyze(const Rir& rir) {
    rir.validate();
    RirStats stats;
    stats.direct_index = rir.direct_index;
    stats.sample_rate = rir.sample_rate;
    stats.length = rir.size();
    stats.drr_db = drr(rir);
    stats.c50_db = c50(rir);
    try {
        const T60Estimate est = estimate_t60(rir);
        stats.t60_s = est.t60_s;
        stats.fit_quality = est.fit_quality;
        stats.t60_range = est.range;
    } catch (const AnalysisError& e) {
        stats.t60_error = e.what();
    }
    return stats;
}

}  // namespace rirforge
