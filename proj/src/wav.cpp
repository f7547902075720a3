// SPDX-FileCopyrightText: © 2026 The rirforge Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "rirforge/wav.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "rirforge/errors.hpp"

namespace rirforge {

namespace {

static_assert(std::endian::native == std::endian::little, "WAV I/O assumes a little-endian host");

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

template <typename T>
T load(const std::uint8_t* p) {
    T v;
    std::memcpy(&v, p, sizeof(T));
    return v;
}

template <typename T>
void put(std::string& out, T v) {
    char bytes[sizeof(T)];
    std::memcpy(bytes, &v, sizeof(T));
    out.append(bytes, sizeof(T));
}

std::string describe(const std::filesystem::path& path) {
    return "'" + path.string() + "'";
}

}  // namespace

std::vector<double> AudioBuffer::mono() const {
    if (channels.size() != 1) {
        throw ValidationError("expected mono audio, got " + std::to_string(channels.size()) + " channels");
    }
    return {channels.front().begin(), channels.front().end()};
}

bool is_supported_sample_rate(std::uint32_t rate) {
    return std::ranges::find(kSupportedSampleRates, rate) != std::end(kSupportedSampleRates);
}

AudioBuffer read_wav(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + describe(path));
    }
    const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
        std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
        throw IoError(describe(path) + " is not a RIFF/WAVE file");
    }

    std::uint16_t format = 0;
    std::uint16_t channels = 0;
    std::uint32_t rate = 0;
    std::uint16_t bits = 0;
    bool have_fmt = false;
    const std::uint8_t* data = nullptr;
    std::size_t data_size = 0;

    std::size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const std::uint8_t* chunk = bytes.data() + pos;
        const auto size = load<std::uint32_t>(chunk + 4);
        const std::size_t body = pos + 8;
        if (std::memcmp(chunk, "fmt ", 4) == 0) {
            if (size < 16 || body + size > bytes.size()) {
                throw IoError(describe(path) + ": truncated fmt chunk");
            }
            format = load<std::uint16_t>(bytes.data() + body);
            channels = load<std::uint16_t>(bytes.data() + body + 2);
            rate = load<std::uint32_t>(bytes.data() + body + 4);
            bits = load<std::uint16_t>(bytes.data() + body + 14);
            if (format == kFormatExtensible && size >= 26) {
                format = load<std::uint16_t>(bytes.data() + body + 24);
            }
            have_fmt = true;
        } else if (std::memcmp(chunk, "data", 4) == 0) {
            if (body + size > bytes.size()) {
                throw IoError(describe(path) + ": truncated data chunk");
            }
            data = bytes.data() + body;
            data_size = size;
            break;
        }
        pos = body + size + (size & 1u);
    }
    if (!have_fmt || data == nullptr) {
        throw IoError(describe(path) + ": missing fmt or data chunk");
    }
    if (channels == 0) {
        throw IoError(describe(path) + ": zero channels");
    }

    const bool pcm16 = format == kFormatPcm && bits == 16;
    const bool float32 = format == kFormatFloat && bits == 32;
    if (!pcm16 && !float32) {
        throw ValidationError(describe(path) + ": unsupported encoding (format " + std::to_string(format) + ", " +
                              std::to_string(bits) + " bits); expected 16-bit PCM or 32-bit float");
    }
    const std::size_t width = bits / 8;
    const std::size_t frame_bytes = width * channels;
    if (data_size % frame_bytes != 0) {
        throw IoError(describe(path) + ": data chunk is not a whole number of frames");
    }
    const std::size_t frames = data_size / frame_bytes;

    AudioBuffer buf;
    buf.sample_rate = rate;
    buf.channels.assign(channels, std::vector<float>(frames));
    for (std::size_t f = 0; f < frames; ++f) {
        for (std::size_t c = 0; c < channels; ++c) {
            const std::uint8_t* p = data + f * frame_bytes + c * width;
            buf.channels[c][f] = pcm16 ? static_cast<float>(load<std::int16_t>(p)) / 32768.0f : load<float>(p);
        }
    }
    return buf;
}

AudioBuffer read_mono_wav(const std::filesystem::path& path) {
    AudioBuffer buf = read_wav(path);
    if (buf.channel_count() != 1) {
        throw ValidationError(describe(path) + ": multichannel input (" + std::to_string(buf.channel_count()) +
                              " channels) is not supported; provide mono audio");
    }
    if (!is_supported_sample_rate(buf.sample_rate)) {
        throw ValidationError(describe(path) + ": unsupported sample rate " + std::to_string(buf.sample_rate) +
                              " Hz (expected 16000 or 48000)");
    }
    return buf;
}

void write_wav(const std::filesystem::path& path, std::span<const float> samples, std::uint32_t sample_rate) {
    const auto data_bytes = static_cast<std::uint32_t>(samples.size() * sizeof(float));
    std::string out;
    out.reserve(44 + data_bytes);
    out.append("RIFF");
    put<std::uint32_t>(out, 36 + data_bytes);
    out.append("WAVE");
    out.append("fmt ");
    put<std::uint32_t>(out, 16);
    put<std::uint16_t>(out, kFormatFloat);
    put<std::uint16_t>(out, 1);
    put<std::uint32_t>(out, sample_rate);
    put<std::uint32_t>(out, sample_rate * sizeof(float));
    put<std::uint16_t>(out, sizeof(float));
    put<std::uint16_t>(out, 32);
    out.append("data");
    put<std::uint32_t>(out, data_bytes);
    out.append(reinterpret_cast<const char*>(samples.data()), data_bytes);

    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw IoError("cannot open " + describe(path) + " for writing");
    }
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f) {
        throw IoError("failed writing " + describe(path));
    }
}

void write_wav(const std::filesystem::path& path, std::span<const double> samples, std::uint32_t sample_rate) {
    std::vector<float> f(samples.size());
    std::ranges::transform(samples, f.begin(), [](double v) { return static_cast<float>(v); });
    write_wav(path, f, sample_rate);
}

}  // namespace rirforge
