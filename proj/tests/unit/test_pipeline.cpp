// SPDX-FileCopyrightText: © 2026 The rirforge Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>

#include "rirforge/analysis.hpp"
#include "rirforge/errors.hpp"
#include "rirforge/metrics.hpp"
#include "rirforge/pipeline.hpp"
#include "rirforge/rir_sim.hpp"
#include "rirforge/serialize.hpp"
#include "rirforge/wav.hpp"
#include "test_support.hpp"

using namespace rirforge;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double kFs = 16000.0;

MixSpec short_mix() {
    MixSpec mix;
    mix.sample_rate = kFs;
    mix.segment_seconds = 1.0;
    return mix;
}

ScenarioInstance office(double t60) {
    ScenarioInstance inst;
    inst.scenario = "office";
    inst.room = RoomSpec::uniform({8.0, 6.0, 3.0}, absorption_for_t60({8.0, 6.0, 3.0}, t60));
    inst.t60_target_s = t60;
    inst.mic = {2.0, 3.0, 1.4};
    inst.source = {2.6, 3.2, 1.5};
    inst.distance_m = distance(inst.mic, inst.source);
    inst.seed = 77;
    return inst;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("scenario presets", "[pipeline]") {
    const ScenarioSpec cs = ScenarioSpec::preset("CloseSmall");
    CHECK(cs.min_distance_m == 0.1);
    CHECK(cs.max_distance_m == 0.5);
    CHECK(cs.room_min == RoomDims{3.0, 3.0, 2.5});
    CHECK(cs.room_max == RoomDims{10.0, 10.0, 5.0});
    const ScenarioSpec cl = ScenarioSpec::preset("CloseLarge");
    CHECK(cl.max_distance_m == 1.0);
    CHECK(cl.room_max == RoomDims{40.0, 40.0, 20.0});
    CHECK(ScenarioSpec::preset("MediumSmall").max_distance_m == 2.0);
    const ScenarioSpec fl = ScenarioSpec::preset("FarLarge", NaiveUniformT60{});
    CHECK(fl.min_distance_m == 0.2);
    CHECK(fl.max_distance_m == 10.0);
    CHECK(std::get<NaiveUniformT60>(fl.t60_mode) == NaiveUniformT60{0.1, 1.8});
    CHECK_THROWS_AS(ScenarioSpec::preset("Cathedral"), ValidationError);
}

TEST_CASE("scenario spec validation", "[pipeline]") {
    ScenarioSpec s = ScenarioSpec::preset("CloseSmall");
    s.min_distance_m = 0.6;
    CHECK_THROWS_AS(s.validate(), ValidationError);
    s = ScenarioSpec::preset("CloseSmall");
    s.room_min = {12.0, 3.0, 2.5};
    CHECK_THROWS_AS(s.validate(), ValidationError);
    s = ScenarioSpec::preset("CloseSmall", NaiveUniformT60{1.0, 0.5});
    CHECK_THROWS_AS(s.validate(), ValidationError);
    s = ScenarioSpec::preset("CloseSmall");
    s.room_min = {1.4, 1.4, 1.4};  // 2.74 m^3, under the volume law's floor
    CHECK_THROWS_AS(s.validate(), ValidationError);
}

TEST_CASE("every preset honours distance, margin, band and realism over 10^4 draws", "[pipeline][property]") {
    for (std::string_view name : kScenarioPresets) {
        const ScenarioSpec spec = ScenarioSpec::preset(name);
        int violations = 0;
        for (std::uint64_t i = 0; i < 10000; ++i) {
            const ScenarioInstance inst = sample_scenario(spec, split_seed(0xabc, i));
            const RoomDims& d = inst.room.dims;
            const double v = d.volume();
            bool ok = inst.distance_m >= spec.min_distance_m && inst.distance_m <= spec.max_distance_m;
            ok = ok && std::abs(distance(inst.source, inst.mic) - inst.distance_m) < 1e-12;
            ok = ok && is_inside(d, inst.source, spec.wall_margin_m) && is_inside(d, inst.mic, spec.wall_margin_m);
            ok = ok && d.length >= spec.room_min.length && d.length <= spec.room_max.length;
            ok = ok && d.height >= spec.room_min.height && d.height <= spec.room_max.height;
            const T60Band band = t60_band_from_volume(v);
            ok = ok && inst.t60_band.has_value() && band.contains(inst.t60_target_s);
            ok = ok && !(v < 25.0 && inst.t60_target_s > 1.0) && !(v > 1e4 && inst.t60_target_s < 0.5);
            ok = ok && inst.room.absorption[0] == absorption_for_t60(d, inst.t60_target_s);
            if (!ok) ++violations;
        }
        INFO(name);
        CHECK(violations == 0);
    }
}

TEST_CASE("naive mode ignores the room", "[pipeline]") {
    const ScenarioSpec spec = ScenarioSpec::preset("CloseSmall", NaiveUniformT60{});
    double lo = 10.0;
    double hi = 0.0;
    for (std::uint64_t i = 0; i < 2000; ++i) {
        const ScenarioInstance inst = sample_scenario(spec, i);
        CHECK(inst.t60_target_s >= 0.1);
        CHECK(inst.t60_target_s <= 1.8);
        CHECK_FALSE(inst.t60_band.has_value());
        lo = std::min(lo, inst.t60_target_s);
        hi = std::max(hi, inst.t60_target_s);
    }
    CHECK(lo < 0.15);
    CHECK(hi > 1.75);
}

TEST_CASE("sampling is a function of the seed", "[pipeline]") {
    const ScenarioSpec spec = ScenarioSpec::preset("FarLarge");
    const ScenarioInstance a = sample_scenario(spec, 42);
    const ScenarioInstance b = sample_scenario(spec, 42);
    const ScenarioInstance c = sample_scenario(spec, 43);
    CHECK(scenario_instance_to_json(a) == scenario_instance_to_json(b));
    CHECK(scenario_instance_to_json(a) != scenario_instance_to_json(c));
    CHECK(a.seed == 42);
}

TEST_CASE("impossible geometry fails after the retry cap", "[pipeline]") {
    ScenarioSpec s;
    s.name = "cramped";
    s.min_distance_m = 8.0;
    s.max_distance_m = 9.0;
    s.room_min = {3.0, 3.0, 2.5};
    s.room_max = {3.5, 3.5, 2.5};
    CHECK_THROWS_AS(sample_scenario(s, 1), ValidationError);
}

TEST_CASE("requested SNR is realized exactly on the stored components", "[pipeline]") {
    const std::vector<double> speech = test::babble(3 * 16000, kFs, 1);
    const std::vector<double> noise = test::white_noise(7000, 2);  // shorter than the segment: tiled
    MixSpec mix = short_mix();
    mix.snr_range_db = {7.3, 7.3};
    const SynthesizedExample ex = synthesize_example(office(0.5), speech, noise, mix);
    CHECK(ex.record.snr_db == 7.3);
    CHECK_THAT(ex.record.realized_snr_db, WithinAbs(7.3, 1e-6));
    CHECK_THAT(measured_snr(ex.speech_component, ex.noise_component), WithinAbs(7.3, 1e-9));
    CHECK(ex.record.noise_tiled);
    CHECK(ex.input.size() == 16000);
    CHECK(ex.target.size() == 16000);
    for (std::size_t i = 0; i < ex.input.size(); ++i) {
        REQUIRE(ex.input[i] == ex.speech_component[i] + ex.noise_component[i]);
    }
}

TEST_CASE("drawn SNRs stay in range and are realized", "[pipeline][property]") {
    const std::vector<double> speech = test::babble(2 * 16000, kFs, 3);
    const std::vector<double> noise = test::white_noise(40000, 4);
    MixSpec mix = short_mix();
    mix.snr_range_db = {-5.0, 40.0};
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        ScenarioInstance inst = office(0.3);
        inst.seed = seed;
        const SynthesizedExample ex = synthesize_example(inst, speech, noise, mix);
        CHECK(ex.record.snr_db >= -5.0);
        CHECK(ex.record.snr_db <= 40.0);
        CHECK_THAT(ex.record.realized_snr_db, WithinAbs(ex.record.snr_db, 1e-6));
    }
}

TEST_CASE("identity shaping without noise makes input equal target", "[pipeline]") {
    const std::vector<double> speech = test::babble(2 * 16000, kFs, 5);
    MixSpec mix = short_mix();
    mix.snr_range_db = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    mix.shaping = ShapingSpec::identity();
    const SynthesizedExample ex = synthesize_example(office(0.4), speech, {}, mix);
    CHECK(ex.input == ex.target);
    CHECK(ex.record.realized_snr_db == std::numeric_limits<double>::infinity());
}

TEST_CASE("joint peak normalization", "[pipeline]") {
    const std::vector<double> speech = test::babble(2 * 16000, kFs, 6);
    const std::vector<double> noise = test::white_noise(20000, 7);
    const SynthesizedExample ex = synthesize_example(office(0.4), speech, noise, short_mix());
    double p = 0.0;
    for (double v : ex.input) p = std::max(p, std::abs(v));
    for (double v : ex.target) p = std::max(p, std::abs(v));
    CHECK_THAT(p, WithinRel(0.9, 1e-12));
}

TEST_CASE("constant (0, 300) target is drier than the input", "[pipeline]") {
    const std::vector<double> speech = test::babble(2 * 16000, kFs, 8);
    const std::vector<double> noise = test::white_noise(20000, 9);
    const SynthesizedExample ex = synthesize_example(office(0.6), speech, noise, short_mix());
    REQUIRE(ex.record.rir_stats.t60_s.has_value());
    REQUIRE(ex.record.target_rir_stats.t60_s.has_value());
    CHECK_THAT(*ex.record.rir_stats.t60_s, WithinRel(0.6, 0.2));
    CHECK(*ex.record.target_rir_stats.t60_s < 0.3);
}

TEST_CASE("target and input share the direct-path time origin", "[pipeline]") {
    const std::vector<double> speech = test::babble(2 * 16000, kFs, 10);
    MixSpec mix = short_mix();
    mix.snr_range_db = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    mix.shaping = ShapingSpec::truncate(0.0);
    const SynthesizedExample ex = synthesize_example(office(0.4), speech, {}, mix);
    int best_lag = 0;
    double best = -1.0;
    for (int lag = -40; lag <= 40; ++lag) {
        double acc = 0.0;
        for (std::size_t i = 40; i + 40 < ex.target.size(); ++i) {
            acc += ex.target[i] * ex.input[static_cast<std::size_t>(static_cast<long>(i) + lag)];
        }
        if (acc > best) {
            best = acc;
            best_lag = lag;
        }
    }
    CHECK(best_lag == 0);
}

TEST_CASE("synthesis is deterministic per instance seed", "[pipeline]") {
    const std::vector<double> speech = test::babble(3 * 16000, kFs, 11);
    const std::vector<double> noise = test::white_noise(20000, 12);
    const SynthesizedExample a = synthesize_example(office(0.4), speech, noise, short_mix());
    const SynthesizedExample b = synthesize_example(office(0.4), speech, noise, short_mix());
    CHECK(a.input == b.input);
    CHECK(a.target == b.target);
    CHECK(manifest_line(a.record) == manifest_line(b.record));
}

TEST_CASE("unusable speech is rejected", "[pipeline]") {
    const std::vector<double> noise = test::white_noise(20000, 13);
    CHECK_THROWS_AS(synthesize_example(office(0.4), test::babble(8000, kFs, 1), noise, short_mix()), ValidationError);
    CHECK_THROWS_AS(synthesize_example(office(0.4), std::vector<double>(40000, 0.0), noise, short_mix()),
                    ValidationError);
    CHECK_THROWS_AS(synthesize_example(office(0.4), test::babble(40000, kFs, 1), {}, short_mix()), ValidationError);
}

TEST_CASE("mix spec validation", "[pipeline]") {
    MixSpec m = short_mix();
    CHECK_NOTHROW(m.validate());
    m.snr_range_db = {10.0, 5.0};
    CHECK_THROWS_AS(m.validate(), ValidationError);
    m = short_mix();
    m.snr_range_db = {5.0, std::numeric_limits<double>::infinity()};
    CHECK_THROWS_AS(m.validate(), ValidationError);
    m = short_mix();
    m.segment_seconds = 0.0;
    CHECK_THROWS_AS(m.validate(), ValidationError);
    m = short_mix();
    m.shaping = ShapingSpec::constant(50.0, 30.0);
    CHECK_THROWS_AS(m.validate(), DomainError);
}

namespace {

struct Corpus {
    test::ScratchDir dir{"corpus"};
    DatasetConfig config;

    Corpus() {
        write_wav(dir / "speech/a.wav", std::span<const double>(test::babble(40000, kFs, 21)), 16000);
        write_wav(dir / "speech/b.wav", std::span<const double>(test::babble(50000, kFs, 22)), 16000);
        std::ofstream(dir / "speech/broken.wav") << "RIFF....";
        write_wav(dir / "noise/n.wav", std::span<const double>(test::white_noise(12000, 23)), 16000);
        config.scenario = ScenarioSpec::preset("CloseSmall");
        config.mix = short_mix();
        config.mix.snr_range_db = {5.0, 40.0};
        config.count = 5;
        config.speech_list = {"speech/broken.wav", "speech/a.wav", "speech/b.wav"};
        config.noise_list = {"noise/n.wav"};
        config.base_dir = dir.path();
    }
};

}  // namespace

TEST_CASE("dataset output does not depend on the worker count", "[pipeline]") {
    Corpus corpus;
    test::ScratchDir out1("ds1");
    test::ScratchDir out3("ds3");
    std::ostringstream log1;
    std::ostringstream log3;
    const auto recs = generate_dataset(corpus.config, 99, out1.path(), 1, &log1);
    generate_dataset(corpus.config, 99, out3.path(), 3, &log3);
    REQUIRE(recs.size() == 5);
    CHECK(log1.str() == log3.str());

    const std::string manifest = slurp(out1 / std::string(kManifestFileName));
    CHECK(manifest == slurp(out3 / std::string(kManifestFileName)));
    CHECK(std::count(manifest.begin(), manifest.end(), '\n') == 5);

    bool any_substitution = false;
    for (const ManifestRecord& r : recs) {
        CHECK(r.seed == split_seed(99, r.example_id));
        CHECK(std::filesystem::exists(out1 / r.input_path));
        CHECK(slurp(out1 / r.input_path) == slurp(out3 / r.input_path));
        CHECK(slurp(out1 / r.target_path) == slurp(out3 / r.target_path));
        CHECK(r.speech_path != "speech/broken.wav");
        CHECK_THAT(r.realized_snr_db, WithinAbs(r.snr_db, 1e-6));
        if (!r.substitutions.empty()) {
            any_substitution = true;
            CHECK(r.substitutions.front().find("broken.wav") != std::string::npos);
        }
    }
    // Each example picks one of three files; 5 draws all missing the broken one is unlikely but possible.
    if (any_substitution) CHECK(log1.str().find("warning:") != std::string::npos);

    // A different seed moves the bytes.
    test::ScratchDir other("ds-other");
    generate_dataset(corpus.config, 100, other.path(), 2);
    CHECK(slurp(other / std::string(kManifestFileName)) != manifest);
}

TEST_CASE("dataset files read back at the configured rate", "[pipeline]") {
    Corpus corpus;
    corpus.config.count = 2;
    test::ScratchDir out("ds-read");
    const auto recs = generate_dataset(corpus.config, 5, out.path(), 2);
    for (const ManifestRecord& r : recs) {
        const AudioBuffer in = read_mono_wav(out / r.input_path);
        CHECK(in.sample_rate == 16000);
        CHECK(in.frames() == 16000);
        const Json line = Json::parse(manifest_line(r));
        CHECK(line["input_path"] == r.input_path);
    }
}

TEST_CASE("dataset failures name the example", "[pipeline]") {
    Corpus corpus;
    corpus.config.speech_list = {"speech/broken.wav"};
    test::ScratchDir out("ds-fail");
    try {
        generate_dataset(corpus.config, 1, out.path(), 2);
        FAIL("expected a generation error");
    } catch (const GenerationError& e) {
        CHECK(e.example_index() == 0);
    }

    corpus.config.speech_list.clear();
    CHECK_THROWS_AS(generate_dataset(corpus.config, 1, out.path()), ValidationError);
}

TEST_CASE("record carries the absorption that was simulated", "[pipeline]") {
    const std::vector<double> speech = test::babble(2 * 16000, kFs, 8);
    const std::vector<double> noise = test::white_noise(20000, 9);
    const ScenarioInstance inst = office(0.5);
    const SynthesizedExample ex = synthesize_example(inst, speech, noise, short_mix());
    const double matched = matched_absorption_for_t60(inst.room.dims, inst.source, inst.mic, 0.5, kFs,
                                                      SimOptions{.wall_margin = 0.0});
    for (double a : ex.record.scenario.room.absorption) CHECK(a == matched);
    CHECK(matched != inst.room.absorption[0]);
    CHECK(ex.record.scenario.t60_target_s == 0.5);
    REQUIRE(ex.record.rir_stats.t60_s);
    CHECK_THAT(*ex.record.rir_stats.t60_s, WithinRel(0.5, 0.05));
}
