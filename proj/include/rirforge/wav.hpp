// SPDX-FileCopyrightText: © 2026 The rirforge Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace rirforge {

/// Decoded audio, one sample vector per channel.
struct AudioBuffer {
    std::vector<std::vector<float>> channels;
    std::uint32_t sample_rate = 0;

    std::size_t channel_count() const { return channels.size(); }
    std::size_t frames() const { return channels.empty() ? 0 : channels.front().size(); }

    /// The single channel as doubles. Throws ValidationError for multichannel.
    std::vector<double> mono() const;
};

inline constexpr std::uint32_t kSupportedSampleRates[] = {16000, 48000};

bool is_supported_sample_rate(std::uint32_t rate);

/// Reads 16-bit PCM or 32-bit IEEE float WAV. Missing, short or malformed
/// files raise IoError; unsupported encodings raise ValidationError.
AudioBuffer read_wav(const std::filesystem::path& path);

/// read_wav plus the tool's input contract: mono, 16 or 48 kHz.
AudioBuffer read_mono_wav(const std::filesystem::path& path);

/// Writes a mono 32-bit float WAV. Creates parent directories.
void write_wav(const std::filesystem::path& path, std::span<const float> samples, std::uint32_t sample_rate);
void write_wav(const std::filesystem::path& path, std::span<const double> samples, std::uint32_t sample_rate);

}  // namespace rirforge
