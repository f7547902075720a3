// SPDX-FileCopyrightText: © 2026 The rirforge Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "rirforge/serialize.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "rirforge/errors.hpp"

namespace rirforge {

namespace {

Json position_to_json(const Position& p) {
    return Json::array({p.x, p.y, p.z});
}

Json dims_to_json(const RoomDims& d) {
    return Json::array({d.length, d.width, d.height});
}

RoomDims dims_from_json(const Json& j, const char* key) {
    if (!j.is_array() || j.size() != 3) {
        throw ValidationError(std::string(key) + " must be an array of three numbers");
    }
    return RoomDims{j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

const char* range_name(DecayFitRange r) {
    return r == DecayFitRange::T30 ? "T30" : "T20";
}

std::vector<std::string> read_list(const Json& j, const std::filesystem::path& base_dir, const char* key) {
    std::vector<std::string> out;
    if (j.is_array()) {
        for (const auto& e : j) out.push_back(e.get<std::string>());
        return out;
    }
    if (!j.is_string()) {
        throw ValidationError(std::string(key) + " must be an array of paths or a list-file path");
    }
    std::filesystem::path list_path(j.get<std::string>());
    if (list_path.is_relative()) list_path = base_dir / list_path;
    std::ifstream in(list_path);
    if (!in) {
        throw ValidationError(std::string(key) + ": cannot read list file '" + list_path.string() + "'");
    }
    // Entries in a list file are relative to the list file itself; store them
    // relative to base_dir so the manifest records what the config names.
    const std::filesystem::path list_dir = list_path.parent_path();
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        line = line.substr(first, line.find_last_not_of(" \t\r") - first + 1);
        if (line.empty() || line.front() == '#') continue;
        std::filesystem::path p(line);
        if (p.is_relative()) p = (list_dir / p).lexically_relative(base_dir.empty() ? "." : base_dir);
        out.push_back(p.generic_string());
    }
    return out;
}

T60Mode t60_mode_from_json(const Json& j) {
    std::string type;
    if (j.is_string()) {
        type = j.get<std::string>();
    } else if (j.is_object()) {
        type = j.at("type").get<std::string>();
    } else {
        throw ValidationError("t60_mode must be \"volume\", \"naive\" or an object with a type");
    }
    if (type == "volume") {
        VolumeBasedT60 m;
        if (j.is_object() && j.contains("fraction")) m.fraction = j["fraction"].get<double>();
        return m;
    }
    if (type == "naive") {
        NaiveUniformT60 m;
        if (j.is_object()) {
            if (j.contains("lo_s")) m.lo_s = j["lo_s"].get<double>();
            if (j.contains("hi_s")) m.hi_s = j["hi_s"].get<double>();
        }
        return m;
    }
    throw ValidationError("unknown t60_mode '" + type + "' (expected volume or naive)");
}

ScenarioSpec scenario_from_json(const Json& j, const T60Mode& mode) {
    if (j.is_string()) {
        return ScenarioSpec::preset(j.get<std::string>(), mode);
    }
    if (!j.is_object()) {
        throw ValidationError("scenario must be a preset name or an object");
    }
    ScenarioSpec s;
    if (j.contains("preset")) s = ScenarioSpec::preset(j["preset"].get<std::string>(), mode);
    s.t60_mode = mode;
    if (j.contains("name")) s.name = j["name"].get<std::string>();
    if (j.contains("distance_range_m")) {
        const auto& d = j["distance_range_m"];
        if (!d.is_array() || d.size() != 2) throw ValidationError("distance_range_m must be [min, max]");
        s.min_distance_m = d[0].get<double>();
        s.max_distance_m = d[1].get<double>();
    }
    if (j.contains("room_min_dims_m")) s.room_min = dims_from_json(j["room_min_dims_m"], "room_min_dims_m");
    if (j.contains("room_max_dims_m")) s.room_max = dims_from_json(j["room_max_dims_m"], "room_max_dims_m");
    if (j.contains("wall_margin_m")) s.wall_margin_m = j["wall_margin_m"].get<double>();
    if (s.name.empty()) s.name = "custom";
    return s;
}

}  // namespace

Json number_to_json(double v) {
    if (std::isnan(v)) return nullptr;
    if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
    return v;
}

double number_from_json(const Json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "+inf" || s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
    }
    if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
    throw ValidationError("expected a number, got " + j.dump());
}

Json shaping_to_json(const ShapingSpec& spec) {
    Json j;
    j["offset_ms"] = number_to_json(spec.offset_ms);
    j["mode"] = std::string(to_string(spec.mode));
    j["t60max_ms"] = spec.mode == DecayMode::Truncate ? Json(nullptr) : number_to_json(spec.t60max_ms);
    return j;
}

ShapingSpec shaping_from_json(const Json& j) {
    if (!j.is_object()) {
        throw ValidationError("shaping must be an object {mode, offset_ms, t60max_ms}");
    }
    ShapingSpec spec;
    spec.mode = decay_mode_from_string(j.at("mode").get<std::string>());
    spec.offset_ms = j.contains("offset_ms") ? number_from_json(j["offset_ms"]) : 0.0;
    if (spec.mode == DecayMode::Truncate) {
        spec.t60max_ms = 0.0;
    } else {
        if (!j.contains("t60max_ms") || j["t60max_ms"].is_null()) {
            throw ValidationError("shaping mode '" + std::string(to_string(spec.mode)) + "' needs t60max_ms");
        }
        spec.t60max_ms = number_from_json(j["t60max_ms"]);
    }
    spec.validate();
    return spec;
}

Json rir_stats_to_json(const RirStats& s) {
    Json j;
    j["t60_s"] = s.t60_s ? Json(*s.t60_s) : Json(nullptr);
    j["fit_quality"] = s.fit_quality ? Json(*s.fit_quality) : Json(nullptr);
    j["t60_method"] = s.t60_range ? Json(range_name(*s.t60_range)) : Json(nullptr);
    j["t60_error"] = s.t60_error.empty() ? Json(nullptr) : Json(s.t60_error);
    j["drr_db"] = number_to_json(s.drr_db);
    j["c50_db"] = number_to_json(s.c50_db);
    j["direct_index"] = s.direct_index;
    j["sample_rate"] = s.sample_rate;
    j["length"] = s.length;
    return j;
}

Json t60_mode_to_json(const T60Mode& mode) {
    if (const auto* vb = std::get_if<VolumeBasedT60>(&mode)) {
        return Json{{"type", "volume"}, {"fraction", vb->fraction}};
    }
    const auto& nu = std::get<NaiveUniformT60>(mode);
    return Json{{"type", "naive"}, {"lo_s", nu.lo_s}, {"hi_s", nu.hi_s}};
}

Json scenario_instance_to_json(const ScenarioInstance& inst) {
    Json j;
    j["scenario"] = inst.scenario;
    j["seed"] = inst.seed;
    j["room_dims_m"] = dims_to_json(inst.room.dims);
    j["volume_m3"] = inst.room.volume();
    j["surface_area_m2"] = inst.room.surface_area();
    j["absorption"] = inst.room.absorption[0];
    j["speed_of_sound"] = inst.room.speed_of_sound;
    j["t60_target_s"] = inst.t60_target_s;
    j["t60_band_s"] = inst.t60_band ? Json::array({inst.t60_band->low_s, inst.t60_band->high_s}) : Json(nullptr);
    j["source_m"] = position_to_json(inst.source);
    j["mic_m"] = position_to_json(inst.mic);
    j["distance_m"] = inst.distance_m;
    return j;
}

Json manifest_record_to_json(const ManifestRecord& r) {
    Json j;
    j["schema"] = ManifestRecord::kSchema;
    j["example_id"] = r.example_id;
    j["seed"] = r.seed;
    j["speech_path"] = r.speech_path;
    j["noise_path"] = r.noise_path.empty() ? Json(nullptr) : Json(r.noise_path);
    j["input_path"] = r.input_path;
    j["target_path"] = r.target_path;
    j["substitutions"] = r.substitutions;
    j["scenario"] = scenario_instance_to_json(r.scenario);
    j["shaping"] = shaping_to_json(r.shaping);
    j["shaping_identity_fallback"] = r.shaping_identity_fallback;
    j["sample_rate"] = r.sample_rate;
    j["segment_samples"] = r.segment_samples;
    j["speech_offset"] = r.speech_offset;
    j["noise_offset"] = r.noise_offset;
    j["noise_tiled"] = r.noise_tiled;
    j["reverberate_noise"] = r.reverberate_noise;
    j["snr_reference"] = "reverberant_speech";
    j["snr_db"] = number_to_json(r.snr_db);
    j["realized_snr_db"] = number_to_json(r.realized_snr_db);
    j["noise_gain"] = r.noise_gain;
    j["output_gain"] = r.output_gain;
    j["rir_stats"] = rir_stats_to_json(r.rir_stats);
    j["target_rir_stats"] = rir_stats_to_json(r.target_rir_stats);
    return j;
}

std::string manifest_line(const ManifestRecord& rec) {
    return manifest_record_to_json(rec).dump();
}

DatasetConfig parse_dataset_config(const Json& j, const std::filesystem::path& base_dir) {
    static const std::set<std::string> kKnown = {
        "scenario",    "t60_mode", "snr_range_db", "shaping",    "sample_rate",       "segment_seconds",
        "count",       "speech_list", "noise_list", "master_seed", "reverberate_noise",
    };
    if (!j.is_object()) {
        throw ValidationError("config must be a JSON object");
    }
    for (const auto& [key, _] : j.items()) {
        if (!kKnown.contains(key)) {
            throw ValidationError("unknown config key '" + key + "'");
        }
    }
    for (const char* required : {"speech_list", "count"}) {
        if (!j.contains(required)) {
            throw ValidationError(std::string("config is missing '") + required + "'");
        }
    }

    try {
        DatasetConfig cfg;
        cfg.base_dir = base_dir;
        const T60Mode mode = j.contains("t60_mode") ? t60_mode_from_json(j["t60_mode"]) : T60Mode{VolumeBasedT60{}};
        cfg.scenario = scenario_from_json(j.value("scenario", Json("FarLarge")), mode);
        if (j.contains("snr_range_db")) {
            const auto& r = j["snr_range_db"];
            if (!r.is_array() || r.size() != 2) throw ValidationError("snr_range_db must be [low, high]");
            cfg.mix.snr_range_db = {number_from_json(r[0]), number_from_json(r[1])};
        }
        if (j.contains("shaping")) cfg.mix.shaping = shaping_from_json(j["shaping"]);
        if (j.contains("sample_rate")) cfg.mix.sample_rate = j["sample_rate"].get<double>();
        if (j.contains("segment_seconds")) cfg.mix.segment_seconds = j["segment_seconds"].get<double>();
        if (j.contains("reverberate_noise")) cfg.mix.reverberate_noise = j["reverberate_noise"].get<bool>();
        const auto count = j["count"].get<long long>();
        if (count <= 0) throw ValidationError("count must be positive");
        cfg.count = static_cast<std::size_t>(count);
        cfg.speech_list = read_list(j["speech_list"], base_dir, "speech_list");
        if (j.contains("noise_list")) cfg.noise_list = read_list(j["noise_list"], base_dir, "noise_list");
        if (j.contains("master_seed")) cfg.master_seed = j["master_seed"].get<std::uint64_t>();
        cfg.validate();
        return cfg;
    } catch (const Json::exception& e) {
        throw ValidationError(std::string("config: ") + e.what());
    }
}

DatasetConfig load_dataset_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config '" + path.string() + "'");
    }
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ValidationError("config '" + path.string() + "' is not valid JSON: " + e.what());
    }
    return parse_dataset_config(j, path.parent_path());
}

}  // namespace rirforge
