// SPDX-FileCopyrightText: © 2026 The rirforge Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "rirforge/analysis.hpp"
#include "rirforge/pipeline.hpp"
#include "rirforge/shaping.hpp"

namespace rirforge {

using Json = nlohmann::json;

/// Finite values as numbers; infinities as the strings "+inf" / "-inf", NaN as null.
Json number_to_json(double v);
double number_from_json(const Json& j);

/// {"offset_ms", "mode", "t60max_ms"}; an infinite offset is written as "+inf".
/// t60max_ms is null for "nd".
Json shaping_to_json(const ShapingSpec& spec);
ShapingSpec shaping_from_json(const Json& j);

/// {"t60_s", "fit_quality", "t60_method", "t60_error", "drr_db", "c50_db",
///  "direct_index", "sample_rate", "length"}. A failed fit has null t60_s and a
/// non-empty t60_error.
Json rir_stats_to_json(const RirStats& stats);

Json scenario_instance_to_json(const ScenarioInstance& inst);
Json t60_mode_to_json(const T60Mode& mode);

Json manifest_record_to_json(const ManifestRecord& rec);
/// One compact manifest line (no trailing newline).
std::string manifest_line(const ManifestRecord& rec);

/// Keys: scenario, t60_mode, snr_range_db, shaping, sample_rate,
/// segment_seconds, count, speech_list, noise_list, master_seed and the
/// optional reverberate_noise. Lists are arrays of paths or the path of a text
/// file with one entry per line. Unknown keys are rejected.
DatasetConfig parse_dataset_config(const Json& j, const std::filesystem::path& base_dir);

/// Reads and parses a JSON config file; relative paths resolve against its
/// directory. Throws ValidationError on malformed content, IoError if unreadable.
DatasetConfig load_dataset_config(const std::filesystem::path& path);

}  // namespace rirforge
