// SPDX-FileCopyrightText: © 2026 The rirforge Authors
//
// SPDX-License-Identifier: Apache-2.0

// Python bindings. Arrays cross as float64 numpy copies; composite records
// (scenario draws, manifest rows, stats) cross as their JSON form, decoded in
// Python, so the field names match the manifest files exactly.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rirforge/acoustics.hpp"
#include "rirforge/analysis.hpp"
#include "rirforge/convolve.hpp"
#include "rirforge/errors.hpp"
#include "rirforge/metrics.hpp"
#include "rirforge/pipeline.hpp"
#include "rirforge/rir_sim.hpp"
#include "rirforge/rng.hpp"
#include "rirforge/serialize.hpp"
#include "rirforge/shaping.hpp"
#include "rirforge/wav.hpp"

namespace py = pybind11;
using namespace rirforge;

namespace {

using Vec3 = std::array<double, 3>;
using InArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

RoomDims to_dims(const Vec3& v) { return {v[0], v[1], v[2]}; }
Position to_pos(const Vec3& v) { return {v[0], v[1], v[2]}; }

std::span<const double> as_span(const InArray& a) {
    if (a.ndim() != 1) throw ValidationError("expected a 1-D array");
    return {a.data(), static_cast<std::size_t>(a.shape(0))};
}

py::array_t<double> to_numpy(const std::vector<double>& v) {
    return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

py::object to_python(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

ShapingSpec make_shaping(const std::string& mode, double offset_ms, double t60max_ms) {
    if (mode == "identity") return ShapingSpec::identity();
    ShapingSpec spec{offset_ms, decay_mode_from_string(mode), t60max_ms};
    spec.validate();
    return spec;
}

py::dict estimate_to_dict(const T60Estimate& e) {
    py::dict d;
    d["t60_s"] = e.t60_s;
    d["fit_quality"] = e.fit_quality;
    d["range"] = e.range == DecayFitRange::T30 ? "T30" : "T20";
    return d;
}

}  // namespace

PYBIND11_MODULE(_rirforge, m) {
    m.doc() = "Room impulse response simulation, shaping and dataset generation";

    auto validation = py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", validation.ptr());
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);
    py::register_exception<AnalysisError>(m, "AnalysisError", PyExc_RuntimeError);
    py::register_exception<GenerationError>(m, "GenerationError", PyExc_RuntimeError);

    // acoustics
    m.def("t60_from_volume", &t60_from_volume, py::arg("volume_m3"));
    m.def("min_volume_for_t60_law", &min_volume_for_t60_law);
    m.def(
        "t60_band",
        [](double volume, double fraction) {
            const T60Band b = t60_band_from_volume(volume, fraction);
            return std::make_tuple(b.low_s, b.center_s, b.high_s);
        },
        py::arg("volume_m3"), py::arg("fraction") = kT60BandFraction,
        "(low, centre, high) in seconds");
    m.def(
        "absorption_for_t60", [](const Vec3& dims, double t60) { return absorption_for_t60(to_dims(dims), t60); },
        py::arg("dims"), py::arg("t60_s"));
    m.def(
        "sabine_absorption_for_t60",
        [](const Vec3& dims, double t60) { return sabine_absorption_for_t60(to_dims(dims), t60); },
        py::arg("dims"), py::arg("t60_s"));
    m.def(
        "eyring_t60", [](const Vec3& dims, double alpha) { return eyring_t60(to_dims(dims), alpha); },
        py::arg("dims"), py::arg("alpha"));

    // responses
    py::class_<Rir>(m, "Rir")
        .def(py::init([](const InArray& samples, double sample_rate, std::optional<std::size_t> direct_index) {
                 std::vector<double> v(as_span(samples).begin(), as_span(samples).end());
                 if (!direct_index) return Rir::from_samples(std::move(v), sample_rate);
                 Rir rir{std::move(v), sample_rate, *direct_index};
                 rir.validate();
                 return rir;
             }),
             py::arg("samples"), py::arg("sample_rate"), py::arg("direct_index") = py::none())
        .def_property_readonly("samples", [](const Rir& r) { return to_numpy(r.samples); })
        .def_readonly("sample_rate", &Rir::sample_rate)
        .def_readonly("direct_index", &Rir::direct_index)
        .def("__len__", &Rir::size)
        .def("__repr__", [](const Rir& r) {
            return "<Rir " + std::to_string(r.size()) + " samples @ " + std::to_string(r.sample_rate) +
                   " Hz, direct at " + std::to_string(r.direct_index) + ">";
        });

    m.def(
        "simulate",
        [](const Vec3& dims, const std::variant<double, std::array<double, 6>>& absorption, const Vec3& source,
           const Vec3& mic, double sample_rate, double max_seconds, std::optional<int> reflection_order,
           double wall_margin, double speed_of_sound) {
            SimRequest req;
            req.room.dims = to_dims(dims);
            req.room.speed_of_sound = speed_of_sound;
            if (const double* a = std::get_if<double>(&absorption)) {
                req.room.absorption.fill(*a);
            } else {
                req.room.absorption = std::get<std::array<double, 6>>(absorption);
            }
            req.source = to_pos(source);
            req.mic = to_pos(mic);
            req.sample_rate = sample_rate;
            req.max_rir_seconds = max_seconds;
            req.reflection_order = reflection_order;
            req.wall_margin = wall_margin;
            py::gil_scoped_release release;
            return simulate(req);
        },
        py::arg("dims"), py::arg("absorption"), py::arg("source"), py::arg("mic"), py::arg("sample_rate") = 48000.0,
        py::arg("max_seconds") = 1.0, py::arg("reflection_order") = py::none(),
        py::arg("wall_margin") = kDefaultWallMargin, py::arg("speed_of_sound") = kDefaultSpeedOfSound,
        "Shoebox image-source response. absorption is one coefficient or six (x0, x1, y0, y1, z0, z1).");
    m.def(
        "matched_absorption_for_t60",
        [](const Vec3& dims, const Vec3& source, const Vec3& mic, double t60, double sample_rate, double wall_margin) {
            py::gil_scoped_release release;
            return matched_absorption_for_t60(to_dims(dims), to_pos(source), to_pos(mic), t60, sample_rate,
                                              SimOptions{.wall_margin = wall_margin});
        },
        py::arg("dims"), py::arg("source"), py::arg("mic"), py::arg("t60_s"), py::arg("sample_rate") = 48000.0,
        py::arg("wall_margin") = kDefaultWallMargin);
    m.def(
        "simulate_for_t60",
        [](const Vec3& dims, const Vec3& source, const Vec3& mic, double t60, double sample_rate, bool match_t60,
           double wall_margin) {
            py::gil_scoped_release release;
            return simulate_for_t60(to_dims(dims), to_pos(source), to_pos(mic), t60, sample_rate,
                                    SimOptions{.wall_margin = wall_margin, .match_t60 = match_t60});
        },
        py::arg("dims"), py::arg("source"), py::arg("mic"), py::arg("t60_s"), py::arg("sample_rate") = 48000.0,
        py::arg("match_t60") = true, py::arg("wall_margin") = kDefaultWallMargin);

    // analysis
    m.def(
        "estimate_t60", [](const Rir& rir) { return estimate_to_dict(estimate_t60(rir)); }, py::arg("rir"));
    m.def(
        "schroeder_edc",
        [](const Rir& rir) {
            const EnergyDecayCurve edc = schroeder_edc(rir);
            return to_numpy(edc.edc_db);
        },
        py::arg("rir"), "Energy decay curve in dB, 0 at the first sample.");
    m.def("drr", &drr, py::arg("rir"), py::arg("direct_half_window_ms") = kDefaultDirectHalfWindowMs);
    m.def("c50", &c50, py::arg("rir"));
    m.def(
        "analyze", [](const Rir& rir) { return to_python(rir_stats_to_json(analyze(rir))); }, py::arg("rir"));

    // shaping
    m.def(
        "shaping_gains",
        [](const Rir& rir, const std::string& mode, double offset_ms, double t60max_ms) {
            return to_numpy(shaping_gains(rir, make_shaping(mode, offset_ms, t60max_ms)).gains);
        },
        py::arg("rir"), py::arg("mode") = "const", py::arg("offset_ms") = 0.0, py::arg("t60max_ms") = 300.0);
    m.def(
        "apply_shaping",
        [](const Rir& rir, const std::string& mode, double offset_ms, double t60max_ms) {
            return apply_shaping(rir, make_shaping(mode, offset_ms, t60max_ms));
        },
        py::arg("rir"), py::arg("mode") = "const", py::arg("offset_ms") = 0.0, py::arg("t60max_ms") = 300.0,
        "mode is one of nd, const, adaptive, identity.");

    // signals
    m.def(
        "fft_convolve",
        [](const InArray& signal, const InArray& kernel, std::optional<std::size_t> out_len) {
            return to_numpy(out_len ? fft_convolve(as_span(signal), as_span(kernel), *out_len)
                                    : fft_convolve(as_span(signal), as_span(kernel)));
        },
        py::arg("signal"), py::arg("kernel"), py::arg("out_len") = py::none());
    m.def(
        "si_sdr",
        [](const InArray& estimate, const InArray& reference) {
            const MetricResult r = si_sdr(as_span(estimate), as_span(reference));
            return std::make_pair(r.value_db, r.valid);
        },
        py::arg("estimate"), py::arg("reference"), "(value_db, valid)");
    m.def(
        "measured_snr",
        [](const InArray& speech, const InArray& noise) { return measured_snr(as_span(speech), as_span(noise)); },
        py::arg("speech"), py::arg("noise"));
    m.def("split_seed", &split_seed, py::arg("seed"), py::arg("index"));

    // wav
    m.def(
        "read_wav",
        [](const std::filesystem::path& path) {
            const AudioBuffer buf = read_wav(path);
            py::array_t<float> out({static_cast<py::ssize_t>(buf.frames()), static_cast<py::ssize_t>(buf.channel_count())});
            auto v = out.mutable_unchecked<2>();
            for (std::size_t c = 0; c < buf.channel_count(); ++c) {
                for (std::size_t n = 0; n < buf.frames(); ++n) v(n, c) = buf.channels[c][n];
            }
            return std::make_pair(out, buf.sample_rate);
        },
        py::arg("path"), "(frames x channels float32 array, sample_rate)");
    m.def(
        "write_wav",
        [](const std::filesystem::path& path, const InArray& samples, std::uint32_t sample_rate) {
            write_wav(path, as_span(samples), sample_rate);
        },
        py::arg("path"), py::arg("samples"), py::arg("sample_rate"), "Mono 32-bit float WAV.");

    // scenarios and datasets
    m.def(
        "sample_scenario",
        [](const std::string& preset, std::uint64_t seed, std::optional<std::pair<double, double>> naive_t60) {
            const T60Mode mode = naive_t60 ? T60Mode{NaiveUniformT60{naive_t60->first, naive_t60->second}}
                                           : T60Mode{VolumeBasedT60{}};
            return to_python(scenario_instance_to_json(sample_scenario(ScenarioSpec::preset(preset, mode), seed)));
        },
        py::arg("preset"), py::arg("seed"), py::arg("naive_t60") = py::none(),
        "Draw one scenario. naive_t60=(lo, hi) swaps the volume law for a uniform draw.");
    m.def(
        "generate_dataset",
        [](const std::filesystem::path& config_path, const std::filesystem::path& out_dir,
           std::optional<std::uint64_t> seed, unsigned workers) {
            const DatasetConfig config = load_dataset_config(config_path);
            std::vector<ManifestRecord> records;
            {
                py::gil_scoped_release release;
                records = generate_dataset(config, seed.value_or(config.master_seed), out_dir, workers);
            }
            py::list out;
            for (const auto& r : records) out.append(to_python(manifest_record_to_json(r)));
            return out;
        },
        py::arg("config"), py::arg("out_dir"), py::arg("seed") = py::none(), py::arg("workers") = 1,
        "Render a dataset from a JSON config; returns the manifest rows.");
}
