// SPDX-FileCopyrightText: © 2026 The rirforge Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <cmath>
#include <fstream>
#include <limits>

#include "rirforge/errors.hpp"
#include "rirforge/serialize.hpp"
#include "test_support.hpp"

using namespace rirforge;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Json minimal_config() {
    return Json{{"count", 3}, {"speech_list", {"a.wav", "b.wav"}}, {"noise_list", {"n.wav"}}};
}

}  // namespace

TEST_CASE("infinities travel as strings", "[serialize]") {
    CHECK(number_to_json(kInf) == "+inf");
    CHECK(number_to_json(-kInf) == "-inf");
    CHECK(number_to_json(std::nan("")).is_null());
    CHECK(number_to_json(1.5) == 1.5);
    CHECK(number_from_json(Json("+inf")) == kInf);
    CHECK(number_from_json(Json("-inf")) == -kInf);
    CHECK(number_from_json(Json(2.25)) == 2.25);
    CHECK_THROWS_AS(number_from_json(Json("lots")), ValidationError);
}

TEST_CASE("shaping specs round-trip through JSON", "[serialize]") {
    for (const ShapingSpec& s : {ShapingSpec::constant(0.0, 300.0), ShapingSpec::adaptive(5.0, 500.0),
                                 ShapingSpec::truncate(30.0), ShapingSpec::identity()}) {
        const Json j = shaping_to_json(s);
        const ShapingSpec back = shaping_from_json(j);
        CHECK(back.mode == s.mode);
        CHECK(back.offset_ms == s.offset_ms);
        if (s.mode != DecayMode::Truncate) CHECK(back.t60max_ms == s.t60max_ms);
    }
    const Json id = shaping_to_json(ShapingSpec::identity());
    CHECK(id["offset_ms"] == "+inf");
    CHECK(id["mode"] == "nd");
    CHECK(id["t60max_ms"].is_null());

    CHECK_THROWS_AS(shaping_from_json(Json{{"mode", "const"}, {"offset_ms", 0}}), ValidationError);
    CHECK_THROWS_AS(shaping_from_json(Json{{"mode", "const"}, {"offset_ms", 300}, {"t60max_ms", 300}}), DomainError);
    CHECK_THROWS_AS(shaping_from_json(Json{{"mode", "wobble"}}), ValidationError);
}

TEST_CASE("RIR stats JSON keeps sentinels and fit errors", "[serialize]") {
    RirStats s;
    s.drr_db = kInf;
    s.c50_db = kInf;
    s.t60_error = "no decay";
    s.direct_index = 10;
    s.sample_rate = 48000.0;
    s.length = 100;
    const Json j = rir_stats_to_json(s);
    CHECK(j["t60_s"].is_null());
    CHECK(j["t60_error"] == "no decay");
    CHECK(j["drr_db"] == "+inf");
    CHECK(j["c50_db"] == "+inf");
    for (const char* key : {"t60_s", "fit_quality", "t60_method", "t60_error", "drr_db", "c50_db", "direct_index",
                            "sample_rate", "length"}) {
        CHECK(j.contains(key));
    }
}

TEST_CASE("config parsing: defaults and overrides", "[serialize]") {
    const DatasetConfig d = parse_dataset_config(minimal_config(), "/data");
    CHECK(d.count == 3);
    CHECK(d.scenario.name == "FarLarge");
    CHECK(std::holds_alternative<VolumeBasedT60>(d.scenario.t60_mode));
    CHECK(d.mix.shaping == ShapingSpec::constant(0.0, 300.0));
    CHECK(d.mix.sample_rate == 48000.0);
    CHECK(d.mix.segment_seconds == 10.0);
    CHECK(d.mix.snr_range_db == std::array<double, 2>{-5.0, 40.0});
    CHECK_FALSE(d.mix.reverberate_noise);
    CHECK(d.speech_list == std::vector<std::string>{"a.wav", "b.wav"});

    Json j = minimal_config();
    j["scenario"] = "CloseSmall";
    j["t60_mode"] = Json{{"type", "naive"}, {"lo_s", 0.2}, {"hi_s", 1.0}};
    j["snr_range_db"] = {5, 40};
    j["shaping"] = Json{{"mode", "nd"}, {"offset_ms", 30}};
    j["sample_rate"] = 16000;
    j["segment_seconds"] = 2.5;
    j["master_seed"] = 1234;
    j["reverberate_noise"] = true;
    const DatasetConfig c = parse_dataset_config(j, "/data");
    CHECK(c.scenario.name == "CloseSmall");
    CHECK(std::get<NaiveUniformT60>(c.scenario.t60_mode) == NaiveUniformT60{0.2, 1.0});
    CHECK(c.mix.snr_range_db == std::array<double, 2>{5.0, 40.0});
    CHECK(c.mix.shaping == ShapingSpec::truncate(30.0));
    CHECK(c.mix.sample_rate == 16000.0);
    CHECK(c.mix.segment_seconds == 2.5);
    CHECK(c.master_seed == 1234);
    CHECK(c.mix.reverberate_noise);
}

TEST_CASE("config parsing: custom scenario object", "[serialize]") {
    Json j = minimal_config();
    j["scenario"] = Json{{"name", "lab"},
                         {"distance_range_m", {0.5, 1.5}},
                         {"room_min_dims_m", {4, 4, 3}},
                         {"room_max_dims_m", {6, 5, 3}}};
    const DatasetConfig c = parse_dataset_config(j, ".");
    CHECK(c.scenario.name == "lab");
    CHECK(c.scenario.min_distance_m == 0.5);
    CHECK(c.scenario.room_max == RoomDims{6.0, 5.0, 3.0});
}

TEST_CASE("config parsing: errors", "[serialize]") {
    Json j = minimal_config();
    j.erase("speech_list");
    CHECK_THROWS_AS(parse_dataset_config(j, "."), ValidationError);

    j = minimal_config();
    j["speech_list"] = Json::array();
    CHECK_THROWS_AS(parse_dataset_config(j, "."), ValidationError);

    j = minimal_config();
    j["colour"] = "blue";
    CHECK_THROWS_AS(parse_dataset_config(j, "."), ValidationError);

    j = minimal_config();
    j["count"] = 0;
    CHECK_THROWS_AS(parse_dataset_config(j, "."), ValidationError);

    j = minimal_config();
    j["count"] = "three";
    CHECK_THROWS_AS(parse_dataset_config(j, "."), ValidationError);

    j = minimal_config();
    j["scenario"] = "Stadium";
    CHECK_THROWS_AS(parse_dataset_config(j, "."), ValidationError);

    j = minimal_config();
    j["snr_range_db"] = {40, 5};
    CHECK_THROWS_AS(parse_dataset_config(j, "."), ValidationError);

    j = minimal_config();
    j.erase("noise_list");
    CHECK_THROWS_AS(parse_dataset_config(j, "."), ValidationError);
    // Noise-free mixes need no noise list.
    j["snr_range_db"] = {"+inf", "+inf"};
    CHECK_NOTHROW(parse_dataset_config(j, "."));
}

TEST_CASE("config file with list files", "[serialize]") {
    test::ScratchDir dir("cfg");
    std::filesystem::create_directories(dir / "lists");
    std::ofstream(dir / "lists/speech.txt") << "# clean speech\nclips/one.wav\n\n  clips/two.wav  \n";
    std::ofstream(dir / "cfg.json") << R"({"count": 2, "speech_list": "lists/speech.txt",
                                          "noise_list": ["noise/n.wav"], "scenario": "MediumSmall"})";
    const DatasetConfig c = load_dataset_config(dir / "cfg.json");
    CHECK(c.base_dir == dir.path());
    CHECK(c.speech_list == std::vector<std::string>{"lists/clips/one.wav", "lists/clips/two.wav"});
    CHECK(c.noise_list == std::vector<std::string>{"noise/n.wav"});

    std::ofstream(dir / "bad.json") << "{ not json";
    CHECK_THROWS_AS(load_dataset_config(dir / "bad.json"), ValidationError);
    CHECK_THROWS_AS(load_dataset_config(dir / "absent.json"), IoError);

    std::ofstream(dir / "nolist.json") << R"({"count": 2, "speech_list": "lists/absent.txt", "noise_list": []})";
    CHECK_THROWS_AS(load_dataset_config(dir / "nolist.json"), ValidationError);
}

TEST_CASE("manifest line is one compact JSON object with schema 1", "[serialize]") {
    ManifestRecord rec;
    rec.example_id = 7;
    rec.snr_db = 12.5;
    rec.realized_snr_db = 12.5;
    rec.rir_stats.drr_db = 3.0;
    rec.target_rir_stats.c50_db = kInf;
    const std::string line = manifest_line(rec);
    CHECK(line.find('\n') == std::string::npos);
    const Json j = Json::parse(line);
    CHECK(j["schema"] == 1);
    CHECK(j["example_id"] == 7);
    CHECK(j["snr_reference"] == "reverberant_speech");
    CHECK(j["target_rir_stats"]["c50_db"] == "+inf");
}
