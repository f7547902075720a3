// SPDX-FileCopyrightText: © 2026 The rirforge Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "rirforge/shaping.hpp"

#include <cmath>
#include <limits>

#include "rirforge/analysis.hpp"
#include "rirforge/errors.hpp"

namespace rirforge {

namespace {

// Last index of the flat region, saturating for infinite or huge offsets.
std::size_t flat_end(std::size_t direct_index, double offset_ms, double fs) {
    const double off = offset_ms * 1e-3 * fs;
    if (!std::isfinite(off) || off >= static_cast<double>(std::numeric_limits<std::size_t>::max() / 2)) {
        return std::numeric_limits<std::size_t>::max();
    }
    return direct_index + static_cast<std::size_t>(std::llround(off));
}

std::size_t ms_to_samples(double ms, double fs) {
    return static_cast<std::size_t>(std::llround(ms * 1e-3 * fs));
}

// Flat through `knee`, then 10^(-rate (n - knee)).
std::vector<double> exponential_gains(std::size_t len, std::size_t knee, double rate) {
    std::vector<double> g(len, 1.0);
    for (std::size_t n = 0; n < len; ++n) {
        if (n > knee) {
            g[n] = std::pow(10.0, -rate * static_cast<double>(n - knee));
        }
    }
    return g;
}

void require_mode(const ShapingSpec& spec, DecayMode mode) {
    spec.validate();
    if (spec.mode != mode) {
        throw ValidationError("shaping spec has mode '" + std::string(to_string(spec.mode)) + "', expected '" +
                              std::string(to_string(mode)) + "'");
    }
}

void require_sample_rate(double fs) {
    if (!(fs > 0.0) || !std::isfinite(fs)) {
        throw ValidationError("sample rate must be positive");
    }
}

}  // namespace

std::string_view to_string(DecayMode mode) {
    switch (mode) {
        case DecayMode::Truncate: return "nd";
        case DecayMode::ConstantT60: return "const";
        case DecayMode::AdaptiveT60: return "adaptive";
    }
    return "?";
}

DecayMode decay_mode_from_string(std::string_view name) {
    if (name == "nd") return DecayMode::Truncate;
    if (name == "const") return DecayMode::ConstantT60;
    if (name == "adaptive") return DecayMode::AdaptiveT60;
    throw ValidationError("unknown shaping mode '" + std::string(name) + "' (expected nd, const or adaptive)");
}

ShapingSpec ShapingSpec::truncate(double offset_ms) {
    return ShapingSpec{offset_ms, DecayMode::Truncate, 0.0};
}

ShapingSpec ShapingSpec::constant(double offset_ms, double t60max_ms) {
    return ShapingSpec{offset_ms, DecayMode::ConstantT60, t60max_ms};
}

ShapingSpec ShapingSpec::adaptive(double offset_ms, double t60max_ms) {
    return ShapingSpec{offset_ms, DecayMode::AdaptiveT60, t60max_ms};
}

ShapingSpec ShapingSpec::identity() {
    return truncate(std::numeric_limits<double>::infinity());
}

bool ShapingSpec::is_identity() const {
    return std::isinf(offset_ms) && offset_ms > 0.0;
}

void ShapingSpec::validate() const {
    if (!(offset_ms >= 0.0)) {
        throw ValidationError("shaping offset must be >= 0 ms");
    }
    if (mode == DecayMode::Truncate || is_identity()) return;
    if (!std::isfinite(t60max_ms) || !(t60max_ms > offset_ms)) {
        throw DomainError("t60max (" + std::to_string(t60max_ms) + " ms) must exceed the offset (" +
                          std::to_string(offset_ms) + " ms)");
    }
}

GainCurve constant_window(std::size_t rir_len, std::size_t direct_index, double sample_rate,
                          const ShapingSpec& spec) {
    require_mode(spec, DecayMode::ConstantT60);
    require_sample_rate(sample_rate);
    GainCurve curve;
    if (spec.is_identity()) {
        curve.gains.assign(rir_len, 1.0);
        return curve;
    }
    const std::size_t n_off = ms_to_samples(spec.offset_ms, sample_rate);
    const std::size_t n_max = ms_to_samples(spec.t60max_ms, sample_rate);
    if (n_max <= n_off) {
        throw DomainError("t60max and offset round to the same sample count");
    }
    const double rate = 3.0 / static_cast<double>(n_max - n_off);
    curve.gains = exponential_gains(rir_len, direct_index + n_off, rate);
    return curve;
}

GainCurve adaptive_window(const Rir& rir, double measured_t60_s, const ShapingSpec& spec) {
    require_mode(spec, DecayMode::AdaptiveT60);
    rir.validate();
    if (!(measured_t60_s > 0.0) || !std::isfinite(measured_t60_s)) {
        throw DomainError("measured T60 must be positive");
    }
    GainCurve curve;
    const double fs = rir.sample_rate;
    if (spec.is_identity()) {
        curve.gains.assign(rir.size(), 1.0);
        return curve;
    }
    const std::size_t n_off = ms_to_samples(spec.offset_ms, fs);
    const std::size_t n_max = ms_to_samples(spec.t60max_ms, fs);
    if (n_max <= n_off) {
        throw DomainError("t60max and offset round to the same sample count");
    }
    // The response alone falls 3 Nmax / (T60 fs) decades by N1 + Nmax; the
    // window supplies the rest of the 3 decades over the decaying span.
    const double own_decades = 3.0 * static_cast<double>(n_max) / (measured_t60_s * fs);
    const double rate = (3.0 - own_decades) / static_cast<double>(n_max - n_off);
    if (!(rate > 0.0)) {
        curve.gains.assign(rir.size(), 1.0);
        curve.identity_fallback = true;
        return curve;
    }
    curve.gains = exponential_gains(rir.size(), rir.direct_index + n_off, rate);
    return curve;
}

GainCurve truncate_window(std::size_t rir_len, std::size_t direct_index, double sample_rate,
                          const ShapingSpec& spec) {
    require_mode(spec, DecayMode::Truncate);
    require_sample_rate(sample_rate);
    const std::size_t knee = flat_end(direct_index, spec.offset_ms, sample_rate);
    GainCurve curve;
    curve.gains.assign(rir_len, 1.0);
    for (std::size_t n = 0; n < rir_len; ++n) {
        if (n > knee) curve.gains[n] = 0.0;
    }
    return curve;
}

GainCurve shaping_gains(const Rir& rir, const ShapingSpec& spec, std::optional<double> measured_t60_s) {
    rir.validate();
    switch (spec.mode) {
        case DecayMode::Truncate:
            return truncate_window(rir.size(), rir.direct_index, rir.sample_rate, spec);
        case DecayMode::ConstantT60:
            return constant_window(rir.size(), rir.direct_index, rir.sample_rate, spec);
        case DecayMode::AdaptiveT60: {
            spec.validate();
            if (spec.is_identity()) {
                return GainCurve{std::vector<double>(rir.size(), 1.0), false};
            }
            const double t60 = measured_t60_s ? *measured_t60_s : estimate_t60(rir).t60_s;
            return adaptive_window(rir, t60, spec);
        }
    }
    throw ValidationError("unknown shaping mode");
}

Rir apply_shaping(const Rir& rir, const ShapingSpec& spec, std::optional<double> measured_t60_s) {
    const GainCurve curve = shaping_gains(rir, spec, measured_t60_s);
    Rir out = rir;
    for (std::size_t n = 0; n < out.samples.size(); ++n) {
        out.samples[n] *= curve.gains[n];
    }
    return out;
}

}  // namespace rirforge
