// SPDX-FileCopyrightText: © 2026 The rirforge Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rirforge/acoustics.hpp"
#include "rirforge/analysis.hpp"
#include "rirforge/shaping.hpp"

namespace rirforge {

// ---------------------------------------------------------------------------
// Scenarios
// ---------------------------------------------------------------------------

/// T60 drawn uniformly in volume-law center * [1 - fraction, 1 + fraction].
struct VolumeBasedT60 {
    double fraction = kT60BandFraction;
    bool operator==(const VolumeBasedT60&) const = default;
};

/// T60 drawn uniformly in [lo_s, hi_s], regardless of the room.
struct NaiveUniformT60 {
    double lo_s = 0.1;
    double hi_s = 1.8;
    bool operator==(const NaiveUniformT60&) const = default;
};

using T60Mode = std::variant<VolumeBasedT60, NaiveUniformT60>;

struct ScenarioSpec {
    std::string name;
    double min_distance_m = 0.0;
    double max_distance_m = 0.0;
    RoomDims room_min;
    RoomDims room_max;
    T60Mode t60_mode = VolumeBasedT60{};
    double wall_margin_m = kDefaultWallMargin;

    void validate() const;

    /// CloseSmall, CloseLarge, MediumSmall or FarLarge.
    static ScenarioSpec preset(std::string_view name, T60Mode mode = VolumeBasedT60{});
};

inline constexpr std::string_view kScenarioPresets[] = {"CloseSmall", "CloseLarge", "MediumSmall", "FarLarge"};

/// One draw from a ScenarioSpec. `room.absorption` holds the uniform Eyring
/// absorption realizing `t60_target_s`.
struct ScenarioInstance {
    std::string scenario;
    RoomSpec room;
    double t60_target_s = 0.0;
    std::optional<T60Band> t60_band;  // VolumeBased mode only
    Position source;
    Position mic;
    double distance_m = 0.0;
    std::uint64_t seed = 0;
};

// Retry caps for placement.
inline constexpr int kSourcePlacementTries = 1000;
inline constexpr int kMicPlacementTries = 64;
inline constexpr int kRoomPlacementTries = 16;

/// Dimensions uniform per axis, T60 from the mode, mic uniform inside the
/// wall margin, source at a uniform direction and uniform distance from the
/// mic (rejection-sampled until inside). Same seed, same instance.
ScenarioInstance sample_scenario(const ScenarioSpec& spec, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Mixing
// ---------------------------------------------------------------------------

struct MixSpec {
    std::array<double, 2> snr_range_db{-5.0, 40.0};
    double segment_seconds = 10.0;
    ShapingSpec shaping = ShapingSpec::constant(0.0, 300.0);
    double sample_rate = 48000.0;
    bool reverberate_noise = false;
    double peak_level = 0.9;
    double speech_skip_seconds = 0.5;
    double crossfade_ms = 10.0;

    std::size_t segment_samples() const;
    void validate() const;
};

struct ManifestRecord {
    static constexpr int kSchema = 1;

    std::size_t example_id = 0;
    std::uint64_t seed = 0;
    std::string speech_path;
    std::string noise_path;
    std::string input_path;
    std::string target_path;
    std::vector<std::string> substitutions;

    ScenarioInstance scenario;
    ShapingSpec shaping;
    bool shaping_identity_fallback = false;

    double sample_rate = 0.0;
    std::size_t segment_samples = 0;
    std::size_t speech_offset = 0;
    std::size_t noise_offset = 0;
    bool noise_tiled = false;
    bool reverberate_noise = false;

    double snr_db = 0.0;           // drawn
    double realized_snr_db = 0.0;  // measured on the stored components
    double noise_gain = 0.0;
    double output_gain = 1.0;      // joint peak normalization

    RirStats rir_stats;
    RirStats target_rir_stats;
};

struct SynthesizedExample {
    std::vector<double> input;
    std::vector<double> target;
    // Scaled exactly as they are summed into `input`.
    std::vector<double> speech_component;
    std::vector<double> noise_component;
    ManifestRecord record;  // paths and example_id left for the caller
};

/// Simulates the instance's RIR, mixes a crop of `speech` convolved with it
/// against `noise` at an SNR drawn from the mix range, and convolves the same
/// crop with the shaped RIR for the target. Input and target share the RIR's
/// time origin and are jointly peak-normalized.
SynthesizedExample synthesize_example(const ScenarioInstance& instance, std::span<const double> speech,
                                      std::span<const double> noise, const MixSpec& mix);

// ---------------------------------------------------------------------------
// Dataset generation
// ---------------------------------------------------------------------------

struct DatasetConfig {
    ScenarioSpec scenario = ScenarioSpec::preset("FarLarge");
    MixSpec mix;
    std::size_t count = 0;
    std::vector<std::string> speech_list;  // as written in the config
    std::vector<std::string> noise_list;
    std::uint64_t master_seed = 0;  // used when the caller supplies none
    // Relative list entries resolve against this directory.
    std::filesystem::path base_dir;

    void validate() const;
};

inline constexpr std::string_view kManifestFileName = "manifest.jsonl";

/// Generates `config.count` examples under out_dir (input/, target/,
/// manifest.jsonl). Example i draws from split_seed(master_seed, i), so output
/// bytes do not depend on `workers`. Warnings about substituted files go to
/// `log`. Throws GenerationError naming the first failing example.
std::vector<ManifestRecord> generate_dataset(const DatasetConfig& config, std::uint64_t master_seed,
                                             const std::filesystem::path& out_dir, unsigned workers = 1,
                                             std::ostream* log = nullptr);

}  // namespace rirforge
