// SPDX-FileCopyrightText: © 2026 The rirforge Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rirforge {

/// Linear convolution via FFT, returning the first `out_len` samples of
/// signal * kernel (zero-padded past the full length). Results depend only on
/// the inputs, never on which thread runs them.
std::vector<double> fft_convolve(std::span<const double> signal, std::span<const double> kernel,
                                 std::size_t out_len);

/// Full-length convolution (size a + b - 1).
std::vector<double> fft_convolve(std::span<const double> signal, std::span<const double> kernel);

}  // namespace rirforge
