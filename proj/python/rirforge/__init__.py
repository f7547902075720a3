# SPDX-FileCopyrightText: © 2026 The rirforge Authors
#
# SPDX-License-Identifier: Apache-2.0

"""Room impulse response simulation, shaping and dataset generation."""

from ._rirforge import (
    AnalysisError,
    DomainError,
    GenerationError,
    IoError,
    Rir,
    ValidationError,
    absorption_for_t60,
    analyze,
    apply_shaping,
    c50,
    drr,
    estimate_t60,
    eyring_t60,
    fft_convolve,
    generate_dataset,
    matched_absorption_for_t60,
    measured_snr,
    min_volume_for_t60_law,
    read_wav,
    sabine_absorption_for_t60,
    sample_scenario,
    schroeder_edc,
    shaping_gains,
    si_sdr,
    simulate,
    simulate_for_t60,
    split_seed,
    t60_band,
    t60_from_volume,
    write_wav,
)

__version__ = "0.1.0"

SCENARIO_PRESETS = ("CloseSmall", "CloseLarge", "MediumSmall", "FarLarge")
