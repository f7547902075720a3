// SPDX-FileCopyrightText: © 2026 The rirforge Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "rirforge/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>
#include <thread>

#include "rirforge/convolve.hpp"
#include "rirforge/errors.hpp"
#include "rirforge/metrics.hpp"
#include "rirforge/rng.hpp"
#include "rirforge/serialize.hpp"
#include "rirforge/wav.hpp"

namespace rirforge {

namespace {

constexpr RoomDims kSmallRoomMin{3.0, 3.0, 2.5};
constexpr RoomDims kSmallRoomMax{10.0, 10.0, 5.0};
constexpr RoomDims kLargeRoomMax{40.0, 40.0, 20.0};

constexpr int kCropTries = 10;
// Mean square below this (-80 dBFS) counts as silence.
constexpr double kSilenceMeanSquare = 1e-8;

// Stream indices under an example seed.
constexpr std::uint64_t kScenarioStream = 0;
constexpr std::uint64_t kFileStream = 1;
// Under a scenario instance seed.
constexpr std::uint64_t kMixStream = 1;

double mean_square(std::span<const double> x) {
    if (x.empty()) return 0.0;
    double e = 0.0;
    for (double v : x) e += v * v;
    return e / static_cast<double>(x.size());
}

double peak(std::span<const double> x) {
    double p = 0.0;
    for (double v : x) p = std::max(p, std::abs(v));
    return p;
}

double draw_t60(const T60Mode& mode, double volume, Rng& rng, std::optional<T60Band>& band) {
    if (const auto* vb = std::get_if<VolumeBasedT60>(&mode)) {
        band = t60_band_from_volume(volume, vb->fraction);
        return rng.uniform(band->low_s, band->high_s);
    }
    const auto& nu = std::get<NaiveUniformT60>(mode);
    band.reset();
    return rng.uniform(nu.lo_s, nu.hi_s);
}

// Noise segment of exactly `len` samples. Short noise is loop-tiled with a
// linear crossfade of `xf` samples at each seam.
std::vector<double> fit_noise(std::span<const double> noise, std::size_t len, std::size_t xf, Rng& rng,
                              std::size_t& offset, bool& tiled) {
    std::vector<double> out(len);
    if (noise.size() >= len) {
        offset = rng.index(noise.size() - len + 1);
        tiled = false;
        std::copy_n(noise.begin() + static_cast<std::ptrdiff_t>(offset), len, out.begin());
        return out;
    }
    tiled = true;
    xf = std::min(xf, noise.size() / 4);
    // One loop period: the body, whose first xf samples blend in the tail.
    const std::size_t period = noise.size() - xf;
    std::vector<double> loop(period);
    for (std::size_t j = 0; j < period; ++j) {
        if (j < xf) {
            const double fade_in = (static_cast<double>(j) + 0.5) / static_cast<double>(xf);
            loop[j] = fade_in * noise[j] + (1.0 - fade_in) * noise[period + j];
        } else {
            loop[j] = noise[j];
        }
    }
    offset = rng.index(period);
    for (std::size_t i = 0; i < len; ++i) {
        out[i] = loop[(offset + i) % period];
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------

void ScenarioSpec::validate() const {
    if (!(min_distance_m > 0.0 && min_distance_m < max_distance_m) || !std::isfinite(max_distance_m)) {
        throw ValidationError("scenario '" + name + "': need 0 < min distance < max distance");
    }
    room_min.validate();
    room_max.validate();
    const auto lo = room_min.as_array();
    const auto hi = room_max.as_array();
    for (int a = 0; a < 3; ++a) {
        if (lo[a] > hi[a]) {
            throw ValidationError("scenario '" + name + "': room minimum exceeds maximum");
        }
        if (lo[a] <= 2.0 * wall_margin_m) {
            throw ValidationError("scenario '" + name + "': smallest room leaves no space inside the wall margin");
        }
    }
    if (!(wall_margin_m >= 0.0)) {
        throw ValidationError("scenario '" + name + "': wall margin must be non-negative");
    }
    if (const auto* vb = std::get_if<VolumeBasedT60>(&t60_mode)) {
        if (!(vb->fraction >= 0.0 && vb->fraction < 1.0)) {
            throw ValidationError("scenario '" + name + "': volume band fraction must lie in [0, 1)");
        }
        if (!(room_min.volume() > min_volume_for_t60_law())) {
            throw ValidationError("scenario '" + name + "': smallest room is below the volume law's domain");
        }
    } else {
        const auto& nu = std::get<NaiveUniformT60>(t60_mode);
        if (!(nu.lo_s > 0.0 && nu.lo_s < nu.hi_s) || !std::isfinite(nu.hi_s)) {
            throw ValidationError("scenario '" + name + "': need 0 < naive T60 low < high");
        }
    }
}

ScenarioSpec ScenarioSpec::preset(std::string_view name, T60Mode mode) {
    ScenarioSpec s;
    s.name = std::string(name);
    s.t60_mode = mode;
    s.room_min = kSmallRoomMin;
    if (name == "CloseSmall") {
        s.min_distance_m = 0.1;
        s.max_distance_m = 0.5;
        s.room_max = kSmallRoomMax;
    } else if (name == "CloseLarge") {
        s.min_distance_m = 0.1;
        s.max_distance_m = 1.0;
        s.room_max = kLargeRoomMax;
    } else if (name == "MediumSmall") {
        s.min_distance_m = 0.1;
        s.max_distance_m = 2.0;
        s.room_max = kSmallRoomMax;
    } else if (name == "FarLarge") {
        s.min_distance_m = 0.2;
        s.max_distance_m = 10.0;
        s.room_max = kLargeRoomMax;
    } else {
        throw ValidationError("unknown scenario preset '" + std::string(name) +
                              "' (expected CloseSmall, CloseLarge, MediumSmall or FarLarge)");
    }
    return s;
}

ScenarioInstance sample_scenario(const ScenarioSpec& spec, std::uint64_t seed) {
    spec.validate();
    Rng rng(seed);
    const auto lo = spec.room_min.as_array();
    const auto hi = spec.room_max.as_array();
    const double margin = spec.wall_margin_m;

    for (int room_try = 0; room_try < kRoomPlacementTries; ++room_try) {
        ScenarioInstance inst;
        inst.scenario = spec.name;
        inst.seed = seed;
        RoomDims dims{rng.uniform(lo[0], hi[0]), rng.uniform(lo[1], hi[1]), rng.uniform(lo[2], hi[2])};
        inst.t60_target_s = draw_t60(spec.t60_mode, dims.volume(), rng, inst.t60_band);
        inst.room = RoomSpec::uniform(dims, absorption_for_t60(dims, inst.t60_target_s));

        for (int mic_try = 0; mic_try < kMicPlacementTries; ++mic_try) {
            const Position mic{rng.uniform(margin, dims.length - margin), rng.uniform(margin, dims.width - margin),
                               rng.uniform(margin, dims.height - margin)};
            for (int src_try = 0; src_try < kSourcePlacementTries; ++src_try) {
                const double cos_theta = rng.uniform(-1.0, 1.0);
                const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
                const double r = rng.uniform(spec.min_distance_m, spec.max_distance_m);
                const double sin_theta = std::sqrt(std::max(0.0, 1.0 - cos_theta * cos_theta));
                const Position src{mic.x + r * sin_theta * std::cos(phi), mic.y + r * sin_theta * std::sin(phi),
                                   mic.z + r * cos_theta};
                if (!is_inside(dims, src, margin)) continue;
                const double d = distance(src, mic);
                if (d < spec.min_distance_m || d > spec.max_distance_m || d == 0.0) continue;
                inst.mic = mic;
                inst.source = src;
                inst.distance_m = d;
                return inst;
            }
        }
    }
    throw ValidationError("scenario '" + spec.name + "': could not place source and mic after retry cap");
}

// ---------------------------------------------------------------------------

std::size_t MixSpec::segment_samples() const {
    return static_cast<std::size_t>(std::llround(segment_seconds * sample_rate));
}

void MixSpec::validate() const {
    if (std::isnan(snr_range_db[0]) || std::isnan(snr_range_db[1]) || snr_range_db[0] > snr_range_db[1]) {
        throw ValidationError("snr_range_db must satisfy low <= high");
    }
    if (std::isinf(snr_range_db[0]) != std::isinf(snr_range_db[1])) {
        throw ValidationError("snr_range_db bounds must both be finite, or both +inf for noise-free mixes");
    }
    if (std::isinf(snr_range_db[0]) && snr_range_db[0] < 0.0) {
        throw ValidationError("snr_range_db cannot be -inf");
    }
    if (!(segment_seconds > 0.0) || !std::isfinite(segment_seconds)) {
        throw ValidationError("segment_seconds must be positive");
    }
    if (!(sample_rate > 0.0) || sample_rate != std::floor(sample_rate)) {
        throw ValidationError("sample_rate must be a positive integer");
    }
    if (!(peak_level > 0.0 && peak_level <= 1.0)) {
        throw ValidationError("peak level must lie in (0, 1]");
    }
    if (!(speech_skip_seconds >= 0.0) || !(crossfade_ms >= 0.0)) {
        throw ValidationError("speech skip and crossfade must be non-negative");
    }
    shaping.validate();
}

SynthesizedExample synthesize_example(const ScenarioInstance& instance, std::span<const double> speech,
                                      std::span<const double> noise, const MixSpec& mix) {
    mix.validate();
    const double fs = mix.sample_rate;
    const std::size_t len = mix.segment_samples();
    if (speech.size() < len) {
        throw ValidationError("speech is shorter than the segment (" + std::to_string(speech.size()) + " < " +
                              std::to_string(len) + " samples)");
    }
    const bool noise_free = std::isinf(mix.snr_range_db[0]);
    if (!noise_free && noise.empty()) {
        throw ValidationError("noise signal is empty");
    }

    Rng rng(split_seed(instance.seed, kMixStream));
    SynthesizedExample ex;
    ManifestRecord& rec = ex.record;
    rec.seed = instance.seed;
    rec.scenario = instance;
    rec.shaping = mix.shaping;
    rec.sample_rate = fs;
    rec.segment_samples = len;
    rec.reverberate_noise = mix.reverberate_noise;

    // Crop window: skip the recording's first moments when the file is long
    // enough, and redraw on silence.
    const auto skip = static_cast<std::size_t>(std::llround(mix.speech_skip_seconds * fs));
    const std::size_t first = (speech.size() - len >= skip) ? skip : 0;
    std::span<const double> seg;
    bool found = false;
    for (int attempt = 0; attempt < kCropTries && !found; ++attempt) {
        rec.speech_offset = first + rng.index(speech.size() - len - first + 1);
        seg = speech.subspan(rec.speech_offset, len);
        found = mean_square(seg) >= kSilenceMeanSquare;
    }
    if (!found) {
        throw ValidationError("speech crop is silent after " + std::to_string(kCropTries) + " attempts");
    }

    // The sampler already enforced its own wall margin.
    const SimRequest req = request_for_t60(instance.room.dims, instance.source, instance.mic, instance.t60_target_s,
                                           fs, SimOptions{.speed_of_sound = instance.room.speed_of_sound,
                                                          .wall_margin = 0.0});
    rec.scenario.room = req.room;  // the absorption actually simulated
    const Rir rir = simulate(req);
    const GainCurve gains = shaping_gains(rir, mix.shaping);
    Rir shaped = rir;
    for (std::size_t n = 0; n < shaped.samples.size(); ++n) shaped.samples[n] *= gains.gains[n];
    rec.shaping_identity_fallback = gains.identity_fallback;
    rec.rir_stats = analyze(rir);
    rec.target_rir_stats = analyze(shaped);

    std::vector<double> reverberant = fft_convolve(seg, rir.samples, len);
    ex.target = fft_convolve(seg, shaped.samples, len);

    rec.snr_db = noise_free ? mix.snr_range_db[0] : rng.uniform(mix.snr_range_db[0], mix.snr_range_db[1]);
    std::vector<double> noise_seg(len, 0.0);
    if (!noise_free) {
        const auto xf = static_cast<std::size_t>(std::llround(mix.crossfade_ms * 1e-3 * fs));
        found = false;
        for (int attempt = 0; attempt < kCropTries && !found; ++attempt) {
            noise_seg = fit_noise(noise, len, xf, rng, rec.noise_offset, rec.noise_tiled);
            found = mean_square(noise_seg) > 0.0;
        }
        if (!found) {
            throw ValidationError("noise crop is silent after " + std::to_string(kCropTries) + " attempts");
        }
        if (mix.reverberate_noise) {
            noise_seg = fft_convolve(noise_seg, rir.samples, len);
        }
        const double es = mean_square(reverberant);
        const double en = mean_square(noise_seg);
        if (!(es > 0.0)) {
            throw ValidationError("reverberant speech has zero energy");
        }
        rec.noise_gain = std::sqrt(es / (en * std::pow(10.0, rec.snr_db / 10.0)));
    }

    double input_peak = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
        noise_seg[i] *= rec.noise_gain;
        input_peak = std::max(input_peak, std::abs(reverberant[i] + noise_seg[i]));
    }

    // Scale the components first so input == speech + noise holds exactly.
    const double p = std::max(input_peak, peak(ex.target));
    rec.output_gain = p > 0.0 ? mix.peak_level / p : 1.0;
    ex.input.resize(len);
    for (std::size_t i = 0; i < len; ++i) {
        ex.target[i] *= rec.output_gain;
        reverberant[i] *= rec.output_gain;
        noise_seg[i] *= rec.output_gain;
        ex.input[i] = reverberant[i] + noise_seg[i];
    }

    if (noise_free) {
        rec.realized_snr_db = std::numeric_limits<double>::infinity();
    } else {
        // Measured at the precision the WAV files store.
        std::vector<double> s(len);
        std::vector<double> n(len);
        for (std::size_t i = 0; i < len; ++i) {
            s[i] = static_cast<float>(reverberant[i]);
            n[i] = static_cast<float>(noise_seg[i]);
        }
        rec.realized_snr_db = measured_snr(s, n);
    }
    ex.speech_component = std::move(reverberant);
    ex.noise_component = std::move(noise_seg);
    return ex;
}

// ---------------------------------------------------------------------------

void DatasetConfig::validate() const {
    scenario.validate();
    mix.validate();
    if (count == 0) {
        throw ValidationError("count must be positive");
    }
    if (speech_list.empty()) {
        throw ValidationError("speech_list is empty");
    }
    if (noise_list.empty() && !std::isinf(mix.snr_range_db[0])) {
        throw ValidationError("noise_list is empty");
    }
}

namespace {

struct LoadedFile {
    std::string listed_path;
    std::vector<double> samples;
};

// Loads list entry `start` or, if it is unusable, the next usable one,
// recording each skip. `min_len` of 0 accepts any length.
LoadedFile load_with_substitution(const std::vector<std::string>& list, std::size_t start,
                                  const std::filesystem::path& base_dir, double sample_rate, std::size_t min_len,
                                  std::string_view kind, std::vector<std::string>& substitutions) {
    for (std::size_t k = 0; k < list.size(); ++k) {
        const std::string& entry = list[(start + k) % list.size()];
        std::filesystem::path path(entry);
        if (path.is_relative()) path = base_dir / path;
        std::string reason;
        try {
            AudioBuffer buf = read_mono_wav(path);
            if (buf.sample_rate != static_cast<std::uint32_t>(sample_rate)) {
                reason = "sample rate " + std::to_string(buf.sample_rate) + " Hz differs from the mix rate";
            } else if (buf.frames() < std::max<std::size_t>(min_len, 1)) {
                reason = "too short (" + std::to_string(buf.frames()) + " samples)";
            } else {
                return LoadedFile{entry, buf.mono()};
            }
        } catch (const IoError& e) {
            reason = e.what();
        } catch (const ValidationError& e) {
            reason = e.what();
        }
        substitutions.push_back(std::string(kind) + " '" + entry + "' skipped: " + reason);
    }
    throw ValidationError("no usable " + std::string(kind) + " file in the list");
}

std::string example_stem(std::size_t index) {
    std::string digits = std::to_string(index);
    if (digits.size() < 6) digits.insert(0, 6 - digits.size(), '0');
    return digits;
}

}  // namespace

std::vector<ManifestRecord> generate_dataset(const DatasetConfig& config, std::uint64_t master_seed,
                                             const std::filesystem::path& out_dir, unsigned workers,
                                             std::ostream* log) {
    config.validate();
    const std::size_t count = config.count;
    const std::size_t len = config.mix.segment_samples();
    const bool noise_free = std::isinf(config.mix.snr_range_db[0]);

    std::vector<ManifestRecord> records(count);
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};

    auto run_one = [&](std::size_t i) {
        const std::uint64_t example_seed = split_seed(master_seed, i);
        ScenarioInstance inst = sample_scenario(config.scenario, split_seed(example_seed, kScenarioStream));
        Rng file_rng(split_seed(example_seed, kFileStream));
        std::vector<std::string> subs;
        const LoadedFile speech = load_with_substitution(config.speech_list, file_rng.index(config.speech_list.size()),
                                                         config.base_dir, config.mix.sample_rate, len, "speech", subs);
        LoadedFile noise;
        if (!noise_free) {
            noise = load_with_substitution(config.noise_list, file_rng.index(config.noise_list.size()),
                                           config.base_dir, config.mix.sample_rate, 0, "noise", subs);
        }
        SynthesizedExample ex = synthesize_example(inst, speech.samples, noise.samples, config.mix);

        ManifestRecord& rec = ex.record;
        rec.example_id = i;
        rec.seed = example_seed;
        rec.speech_path = speech.listed_path;
        rec.noise_path = noise.listed_path;
        rec.input_path = "input/" + example_stem(i) + ".wav";
        rec.target_path = "target/" + example_stem(i) + ".wav";
        rec.substitutions = std::move(subs);
        const auto fs = static_cast<std::uint32_t>(config.mix.sample_rate);
        write_wav(out_dir / rec.input_path, std::span<const double>(ex.input), fs);
        write_wav(out_dir / rec.target_path, std::span<const double>(ex.target), fs);
        records[i] = std::move(rec);
    };

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count || failed.load()) return;
            try {
                run_one(i);
            } catch (...) {
                errors[i] = std::current_exception();
                failed.store(true);
            }
        }
    };

    std::filesystem::create_directories(out_dir);
    const unsigned n_threads = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(count)));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n_threads);
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    }

    for (std::size_t i = 0; i < count; ++i) {
        if (!errors[i]) continue;
        try {
            std::rethrow_exception(errors[i]);
        } catch (const IoError&) {
            throw;
        } catch (const std::exception& e) {
            throw GenerationError(i, e.what());
        }
    }

    const std::filesystem::path manifest_path = out_dir / kManifestFileName;
    std::ofstream manifest(manifest_path, std::ios::binary | std::ios::trunc);
    if (!manifest) {
        throw IoError("cannot open '" + manifest_path.string() + "' for writing");
    }
    for (const ManifestRecord& rec : records) {
        manifest << manifest_line(rec) << '\n';
        if (log) {
            for (const std::string& s : rec.substitutions) {
                *log << "warning: example " << rec.example_id << ": " << s << '\n';
            }
        }
    }
    if (!manifest) {
        throw IoError("failed writing '" + manifest_path.string() + "'");
    }
    return records;
}

}  // namespace rirforge
