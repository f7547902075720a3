// SPDX-FileCopyrightText: © 2026 The rirforge Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>

#include "rirforge/acoustics.hpp"
#include "rirforge/analysis.hpp"
#include "rirforge/errors.hpp"
#include "rirforge/metrics.hpp"
#include "rirforge/pipeline.hpp"
#include "rirforge/rir_sim.hpp"
#include "rirforge/rng.hpp"
#include "rirforge/serialize.hpp"
#include "rirforge/shaping.hpp"
#include "rirforge/wav.hpp"

namespace rirforge::cli {

namespace {

// Prefixes a validation failure with the flag it came from.
[[noreturn]] void flag_error(const std::string& flag, const std::string& what) {
    throw ValidationError(flag + ": " + what);
}

std::array<double, 3> parse_triple(const std::string& text, const std::string& flag) {
    std::array<double, 3> v{};
    std::stringstream ss(text);
    std::string part;
    std::size_t i = 0;
    while (std::getline(ss, part, ',')) {
        if (i == 3) flag_error(flag, "expected three comma-separated numbers, got '" + text + "'");
        try {
            std::size_t used = 0;
            v[i] = std::stod(part, &used);
            if (used != part.size()) throw std::invalid_argument(part);
        } catch (const std::exception&) {
            flag_error(flag, "'" + part + "' is not a number");
        }
        if (!std::isfinite(v[i])) flag_error(flag, "values must be finite");
        ++i;
    }
    if (i != 3) flag_error(flag, "expected three comma-separated numbers, got '" + text + "'");
    return v;
}

Position to_position(const std::array<double, 3>& v) {
    return Position{v[0], v[1], v[2]};
}

std::string format_db(double v) {
    if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

// Without an explicit index the direct path is taken to be the peak. That is
// wrong whenever stacked reflections outweigh the direct sound, which is
// common for simulated rooms; `rir simulate` prints the true index.
Rir read_rir(const std::string& path, std::optional<std::size_t> direct_index = {}) {
    const AudioBuffer buf = read_mono_wav(path);
    Rir rir = Rir::from_samples(buf.mono(), buf.sample_rate);
    if (direct_index) {
        if (*direct_index >= rir.size()) flag_error("--direct-index", "past the end of the RIR");
        rir.direct_index = *direct_index;
    }
    return rir;
}

// --- rir simulate -----------------------------------------------------------

struct SimulateArgs {
    std::string room;
    std::optional<double> t60;
    std::optional<double> absorption;
    std::string src;
    std::string mic;
    double fs = 48000.0;
    std::optional<double> length;
    std::optional<int> order;
    double margin = kDefaultWallMargin;
    std::string out;
};

int cmd_rir_simulate(const SimulateArgs& a, std::ostream& out) {
    const auto dims_v = parse_triple(a.room, "--room");
    const RoomDims dims{dims_v[0], dims_v[1], dims_v[2]};
    try {
        dims.validate();
    } catch (const ValidationError& e) {
        flag_error("--room", e.what());
    }
    if (!is_supported_sample_rate(static_cast<std::uint32_t>(a.fs)) || a.fs != std::floor(a.fs)) {
        flag_error("--fs", "sample rate must be 16000 or 48000");
    }
    const Position src = to_position(parse_triple(a.src, "--src"));
    const Position mic = to_position(parse_triple(a.mic, "--mic"));
    if (!is_inside(dims, src, a.margin)) flag_error("--src", "source must lie inside the room wall margin");
    if (!is_inside(dims, mic, a.margin)) flag_error("--mic", "mic must lie inside the room wall margin");
    if (src == mic) flag_error("--src/--mic", "source and mic coincide");

    double alpha;
    double nominal_t60;
    if (a.t60) {
        if (!(*a.t60 > 0.0) || !std::isfinite(*a.t60)) flag_error("--t60", "must be a positive number of seconds");
        alpha = matched_absorption_for_t60(dims, src, mic, *a.t60, a.fs, SimOptions{.wall_margin = a.margin});
        nominal_t60 = *a.t60;
    } else {
        if (!(*a.absorption > 0.0 && *a.absorption <= 1.0)) flag_error("--absorption", "must lie in (0, 1]");
        alpha = *a.absorption;
        nominal_t60 = alpha < 1.0 ? eyring_t60(dims, alpha) : 0.0;
    }

    SimRequest req;
    req.room = RoomSpec::uniform(dims, alpha);
    req.source = src;
    req.mic = mic;
    req.sample_rate = a.fs;
    req.wall_margin = a.margin;
    req.reflection_order = a.order;
    const double delay = distance(src, mic) / req.room.speed_of_sound;
    if (a.length) {
        if (!(*a.length > delay)) flag_error("--length", "RIR length must exceed the direct-path delay");
        req.max_rir_seconds = *a.length;
    } else {
        req.max_rir_seconds = delay + std::max(1.5 * nominal_t60, 0.01);
    }
    if (a.order && *a.order < 0) flag_error("--order", "must be non-negative");

    const Rir rir = simulate(req);
    write_wav(a.out, std::span<const double>(rir.samples), static_cast<std::uint32_t>(a.fs));

    Json j = rir_stats_to_json(analyze(rir));
    j["absorption"] = alpha;
    j["target_t60_s"] = a.t60 ? Json(*a.t60) : Json(nullptr);
    j["distance_m"] = distance(src, mic);
    j["output"] = a.out;
    out << j.dump(2) << '\n';
    return kOk;
}

// --- rir shape --------------------------------------------------------------

struct ShapeArgs {
    std::string in;
    std::string out;
    std::string mode = "const";
    double offset_ms = 0.0;
    std::optional<double> t60max_ms;
    std::optional<double> measured_t60;
    std::optional<std::size_t> direct_index;
};

int cmd_rir_shape(const ShapeArgs& a, std::ostream& out) {
    ShapingSpec spec;
    try {
        spec.mode = decay_mode_from_string(a.mode);
    } catch (const ValidationError& e) {
        flag_error("--mode", e.what());
    }
    spec.offset_ms = a.offset_ms;
    if (!(spec.offset_ms >= 0.0)) flag_error("--offset-ms", "must be >= 0");
    if (spec.mode != DecayMode::Truncate) {
        if (!a.t60max_ms) flag_error("--t60max-ms", "required for mode '" + a.mode + "'");
        spec.t60max_ms = *a.t60max_ms;
        if (!(spec.t60max_ms > spec.offset_ms)) flag_error("--t60max-ms", "must exceed --offset-ms");
    }
    if (a.measured_t60 && !(*a.measured_t60 > 0.0)) flag_error("--measured-t60", "must be positive");

    const Rir rir = read_rir(a.in, a.direct_index);
    const GainCurve curve = shaping_gains(rir, spec, a.measured_t60);
    std::vector<double> shaped(rir.samples);
    for (std::size_t n = 0; n < shaped.size(); ++n) shaped[n] *= curve.gains[n];
    write_wav(a.out, std::span<const double>(shaped), static_cast<std::uint32_t>(rir.sample_rate));

    Json j;
    j["shaping"] = shaping_to_json(spec);
    j["direct_index"] = rir.direct_index;
    j["identity_fallback"] = curve.identity_fallback;
    j["output"] = a.out;
    out << j.dump(2) << '\n';
    return kOk;
}

// --- rir analyze ------------------------------------------------------------

int cmd_rir_analyze(const std::string& in, std::optional<std::size_t> direct_index, std::ostream& out) {
    const Rir rir = read_rir(in, direct_index);
    out << rir_stats_to_json(analyze(rir)).dump(2) << '\n';
    return kOk;
}

// --- dataset generate -------------------------------------------------------

struct GenerateArgs {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> workers;
    std::string out;
};

unsigned default_workers() {
    if (const char* env = std::getenv(kWorkersEnvVar)) {
        try {
            const long v = std::stol(env);
            if (v > 0) return static_cast<unsigned>(v);
        } catch (const std::exception&) {
        }
        throw ValidationError(std::string(kWorkersEnvVar) + " must be a positive integer");
    }
    return 1;
}

int cmd_dataset_generate(const GenerateArgs& a, std::ostream& out, std::ostream& err) {
    const DatasetConfig cfg = load_dataset_config(a.config);
    const unsigned workers = a.workers ? *a.workers : default_workers();
    if (workers == 0) flag_error("--workers", "must be positive");
    const std::uint64_t seed = a.seed ? *a.seed : cfg.master_seed;
    const auto records = generate_dataset(cfg, seed, a.out, workers, &err);
    out << "generated " << records.size() << " examples in " << a.out << " ("
        << (std::filesystem::path(a.out) / kManifestFileName).string() << ")\n";
    return kOk;
}

// --- metrics si-sdr ---------------------------------------------------------

int cmd_metrics_si_sdr(const std::string& estimate, const std::string& reference, std::ostream& out) {
    const AudioBuffer est = read_mono_wav(estimate);
    const AudioBuffer ref = read_mono_wav(reference);
    if (est.sample_rate != ref.sample_rate) {
        flag_error("--estimate", "sample rate differs from --reference");
    }
    const MetricResult r = si_sdr(est.mono(), ref.mono());
    out << format_db(r.value_db) << '\n';
    return kOk;
}

// --- scenario sample --------------------------------------------------------

struct ScenarioArgs {
    std::string preset = "FarLarge";
    std::string t60_mode = "volume";
    std::uint64_t seed = 0;
    std::size_t count = 1;
};

int cmd_scenario_sample(const ScenarioArgs& a, std::ostream& out) {
    T60Mode mode;
    if (a.t60_mode == "volume") {
        mode = VolumeBasedT60{};
    } else if (a.t60_mode == "naive") {
        mode = NaiveUniformT60{};
    } else {
        flag_error("--t60-mode", "expected volume or naive");
    }
    ScenarioSpec spec;
    try {
        spec = ScenarioSpec::preset(a.preset, mode);
    } catch (const ValidationError& e) {
        flag_error("--preset", e.what());
    }
    for (std::size_t i = 0; i < a.count; ++i) {
        const std::uint64_t seed = a.count == 1 ? a.seed : split_seed(a.seed, i);
        out << scenario_instance_to_json(sample_scenario(spec, seed)).dump() << '\n';
    }
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"rirforge: room impulse responses and dereverberation training data"};
    app.name("rirforge");
    app.require_subcommand(1);

    // rir
    auto* rir = app.add_subcommand("rir", "Simulate, shape and analyze room impulse responses");
    rir->require_subcommand(1);

    SimulateArgs sim;
    auto* simulate_cmd = rir->add_subcommand("simulate", "Simulate a shoebox RIR with the image-source method");
    simulate_cmd->add_option("--room", sim.room, "Room dimensions L,W,H in meters")->required();
    auto* t60_opt = simulate_cmd->add_option("--t60", sim.t60, "Target reverberation time in seconds");
    auto* abs_opt = simulate_cmd->add_option("--absorption", sim.absorption, "Uniform wall absorption in (0, 1]");
    t60_opt->excludes(abs_opt);
    simulate_cmd->add_option("--src", sim.src, "Source position x,y,z")->required();
    simulate_cmd->add_option("--mic", sim.mic, "Microphone position x,y,z")->required();
    simulate_cmd->add_option("--fs", sim.fs, "Sample rate (16000 or 48000)");
    simulate_cmd->add_option("--length", sim.length, "RIR length in seconds (default: delay + 1.5 T60)");
    simulate_cmd->add_option("--order", sim.order, "Maximum reflection order (default: auto)");
    simulate_cmd->add_option("--margin", sim.margin, "Minimum wall distance for source and mic");
    simulate_cmd->add_option("--out", sim.out, "Output WAV path")->required();

    ShapeArgs shape;
    auto* shape_cmd = rir->add_subcommand("shape", "Apply a dereverberation target window to an RIR");
    shape_cmd->add_option("--in", shape.in, "Input RIR WAV")->required();
    shape_cmd->add_option("--out", shape.out, "Output WAV path")->required();
    shape_cmd->add_option("--mode", shape.mode, "nd, const or adaptive");
    shape_cmd->add_option("--offset-ms", shape.offset_ms, "Early-reflection offset after the direct path");
    shape_cmd->add_option("--t60max-ms", shape.t60max_ms, "Residual decay time of the target");
    shape_cmd->add_option("--measured-t60", shape.measured_t60, "Adaptive mode: RIR T60 in seconds (default: measured)");
    shape_cmd->add_option("--direct-index", shape.direct_index, "Direct-path sample (default: peak)");

    std::string analyze_in;
    auto* analyze_cmd = rir->add_subcommand("analyze", "Print T60, DRR and C50 of an RIR as JSON");
    analyze_cmd->add_option("--in,in", analyze_in, "RIR WAV")->required();
    std::optional<std::size_t> analyze_direct;
    analyze_cmd->add_option("--direct-index", analyze_direct, "Direct-path sample (default: peak)");

    // dataset
    auto* dataset = app.add_subcommand("dataset", "Dataset generation");
    dataset->require_subcommand(1);
    GenerateArgs gen;
    auto* generate_cmd = dataset->add_subcommand("generate", "Generate noisy-reverberant/target pairs");
    generate_cmd->add_option("--config", gen.config, "JSON config file")->required();
    generate_cmd->add_option("--seed", gen.seed, "Master seed (overrides the config)");
    generate_cmd->add_option("--workers", gen.workers,
                             std::string("Worker threads (default: $") + kWorkersEnvVar + " or 1)");
    generate_cmd->add_option("--out", gen.out, "Output directory")->required();

    // metrics
    auto* metrics = app.add_subcommand("metrics", "Signal metrics");
    metrics->require_subcommand(1);
    std::string est_path;
    std::string ref_path;
    auto* si_sdr_cmd = metrics->add_subcommand("si-sdr", "Scale-invariant SDR in dB");
    si_sdr_cmd->add_option("--estimate", est_path, "Estimate WAV")->required();
    si_sdr_cmd->add_option("--reference", ref_path, "Reference WAV")->required();

    // scenario
    auto* scenario = app.add_subcommand("scenario", "Scenario sampling");
    scenario->require_subcommand(1);
    ScenarioArgs sc;
    auto* sample_cmd = scenario->add_subcommand("sample", "Print sampled scenario instances as JSON lines");
    sample_cmd->add_option("--preset", sc.preset, "CloseSmall, CloseLarge, MediumSmall or FarLarge");
    sample_cmd->add_option("--t60-mode", sc.t60_mode, "volume or naive");
    sample_cmd->add_option("--seed", sc.seed, "Seed");
    sample_cmd->add_option("--count", sc.count, "Number of instances (seeds split from --seed when > 1)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }

    try {
        if (simulate_cmd->parsed()) {
            if (!sim.t60 && !sim.absorption) flag_error("--t60", "one of --t60 or --absorption is required");
            return cmd_rir_simulate(sim, out);
        }
        if (shape_cmd->parsed()) return cmd_rir_shape(shape, out);
        if (analyze_cmd->parsed()) return cmd_rir_analyze(analyze_in, analyze_direct, out);
        if (generate_cmd->parsed()) return cmd_dataset_generate(gen, out, err);
        if (si_sdr_cmd->parsed()) return cmd_metrics_si_sdr(est_path, ref_path, out);
        if (sample_cmd->parsed()) return cmd_scenario_sample(sc, out);
    } catch (const GenerationError& e) {
        err << "error: " << e.what() << '\n';
        return kGeneration;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIo;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return kUsage;
}

}  // namespace rirforge::cli
