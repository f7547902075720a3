// SPDX-FileCopyrightText: © 2026 The rirforge Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "rirforge/metrics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "rirforge/errors.hpp"

namespace rirforge {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

}  // namespace

MetricResult si_sdr(std::span<const double> estimate, std::span<const double> reference) {
    if (estimate.size() != reference.size()) {
        throw ValidationError("si-sdr needs equal lengths, got " + std::to_string(estimate.size()) + " and " +
                              std::to_string(reference.size()));
    }
    const double ref_energy = dot(reference, reference);
    if (!(ref_energy > 0.0)) {
        throw ValidationError("si-sdr reference has zero energy");
    }
    const double alpha = dot(estimate, reference) / ref_energy;
    double target = 0.0;
    double residual = 0.0;
    for (std::size_t i = 0; i < reference.size(); ++i) {
        const double t = alpha * reference[i];
        const double r = estimate[i] - t;
        target += t * t;
        residual += r * r;
    }
    MetricResult result;
    if (!(dot(estimate, estimate) > 0.0)) {
        // Nothing to project; flagged rather than reported as a perfect match.
        result.value_db = -std::numeric_limits<double>::infinity();
        return result;
    }
    result.valid = true;
    result.value_db = residual == 0.0 ? std::numeric_limits<double>::infinity()
                                      : 10.0 * std::log10(target / residual);
    return result;
}

double measured_snr(std::span<const double> speech, std::span<const double> noise) {
    const double es = dot(speech, speech);
    const double en = dot(noise, noise);
    if (!(es > 0.0) || !(en > 0.0)) {
        throw ValidationError("SNR needs nonzero speech and noise energy");
    }
    return 10.0 * std::log10(es / en);
}

}  // namespace rirforge
