// SPDX-FileCopyrightText: © 2026 The rirforge Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>

namespace rirforge {

struct MetricResult {
    double value_db = 0.0;  // +infinity when the residual is exactly zero
    bool valid = false;
};

/// Scale-invariant SDR: project the estimate onto the reference and compare
/// the projection's energy with the residual's. Lengths must match and the
/// reference must carry energy. A silent estimate yields valid = false and
/// -infinity.
MetricResult si_sdr(std::span<const double> estimate, std::span<const double> reference);

/// 10 log10(sum s^2 / sum n^2) over the full signals.
double measured_snr(std::span<const double> speech, std::span<const double> noise);

}  // namespace rirforge
