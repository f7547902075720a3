// SPDX-FileCopyrightText: © 2026 The rirforge Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "rirforge/rir_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "rirforge/analysis.hpp"
#include "rirforge/errors.hpp"

namespace rirforge {

namespace {

// Windowed-sinc fractional-delay kernel. For an arrival at round(t0) + f with
// f in [-0.5, 0.5], tap k (|k| <= half) samples x = k - f:
//   sin(pi x) = -(-1)^k sin(pi f)
//   cos(pi x / L) = cos(pi k / L) cos(pi f / L) + sin(pi k / L) sin(pi f / L)
// so each image costs three trig calls regardless of the tap count.
class SincKernel {
public:
    explicit SincKernel(int taps) : half_(taps / 2), width_(static_cast<double>(half_) + 1.0) {
        cos_k_.resize(taps);
        sin_k_.resize(taps);
        for (int k = -half_; k <= half_; ++k) {
            const double a = std::numbers::pi * k / width_;
            cos_k_[k + half_] = std::cos(a);
            sin_k_[k + half_] = std::sin(a);
        }
        taps_.resize(taps);
    }

    int half() const { return half_; }

    // Fills taps for fractional offset f in [-0.5, 0.5].
    std::span<const double> evaluate(double f) {
        const double sin_pf = std::sin(std::numbers::pi * f);
        const double cos_w = std::cos(std::numbers::pi * f / width_);
        const double sin_w = std::sin(std::numbers::pi * f / width_);
        for (int k = -half_; k <= half_; ++k) {
            const int i = k + half_;
            const double x = k - f;
            const double window = 0.5 * (1.0 + cos_k_[i] * cos_w + sin_k_[i] * sin_w);
            double sinc;
            if (x == 0.0) {
                sinc = 1.0;
            } else {
                const double sign = (k % 2 == 0) ? -1.0 : 1.0;
                sinc = sign * sin_pf / (std::numbers::pi * x);
            }
            taps_[i] = window * sinc;
        }
        return taps_;
    }

private:
    int half_;
    double width_;
    std::vector<double> cos_k_;
    std::vector<double> sin_k_;
    std::vector<double> taps_;
};

// beta^|m - q| * beta'^|m| for the two walls normal to one axis, indexed by
// (m + n) * 2 + q.
std::vector<double> axis_reflection_gains(int n, double beta_low, double beta_high) {
    std::vector<double> gains(static_cast<std::size_t>(2 * n + 1) * 2);
    for (int m = -n; m <= n; ++m) {
        for (int q = 0; q <= 1; ++q) {
            gains[static_cast<std::size_t>(m + n) * 2 + q] =
                std::pow(beta_low, std::abs(m - q)) * std::pow(beta_high, std::abs(m));
        }
    }
    return gains;
}

struct ImageIndex {
    int m;
    int q;
};

// Visits every image source (m, q per axis) whose path length is at most
// `max_dist`, optionally bounded by reflection order. The visitor receives
// the three axis indices and the path length.
template <typename Visit>
void for_each_image(const std::array<double, 3>& ext, const Position& source, const Position& mic,
                    double max_dist, std::optional<int> order, Visit&& visit) {
    const double src[3] = {source.x, source.y, source.z};
    const double rcv[3] = {mic.x, mic.y, mic.z};
    int n[3];
    for (int a = 0; a < 3; ++a) {
        n[a] = static_cast<int>(std::ceil(max_dist / (2.0 * ext[a])));
        if (order) n[a] = std::min(n[a], (*order + 1) / 2);
    }
    const double max_sq = max_dist * max_dist;
    for (int mx = -n[0]; mx <= n[0]; ++mx) {
        for (int qx = 0; qx <= 1; ++qx) {
            const double dx = (1 - 2 * qx) * src[0] - rcv[0] + 2.0 * mx * ext[0];
            const double dx2 = dx * dx;
            if (dx2 > max_sq) continue;
            for (int my = -n[1]; my <= n[1]; ++my) {
                for (int qy = 0; qy <= 1; ++qy) {
                    const double dy = (1 - 2 * qy) * src[1] - rcv[1] + 2.0 * my * ext[1];
                    const double dxy2 = dx2 + dy * dy;
                    if (dxy2 > max_sq) continue;
                    for (int mz = -n[2]; mz <= n[2]; ++mz) {
                        for (int qz = 0; qz <= 1; ++qz) {
                            const double dz = (1 - 2 * qz) * src[2] - rcv[2] + 2.0 * mz * ext[2];
                            const double d2 = dxy2 + dz * dz;
                            if (d2 > max_sq) continue;
                            if (order && std::abs(2 * mx - qx) + std::abs(2 * my - qy) + std::abs(2 * mz - qz) >
                                             *order) {
                                continue;
                            }
                            visit(ImageIndex{mx, qx}, ImageIndex{my, qy}, ImageIndex{mz, qz}, std::sqrt(d2));
                        }
                    }
                }
            }
        }
    }
}

int reflection_count(ImageIndex i) {
    return std::abs(i.m - i.q) + std::abs(i.m);
}

}  // namespace

void Rir::validate() const {
    if (!(sample_rate > 0.0) || !std::isfinite(sample_rate)) {
        throw ValidationError("RIR sample rate must be positive");
    }
    if (samples.empty()) {
        throw ValidationError("RIR has no samples");
    }
    if (direct_index >= samples.size()) {
        throw ValidationError("RIR direct index out of bounds");
    }
}

Rir Rir::from_samples(std::vector<double> samples, double sample_rate) {
    Rir rir;
    rir.direct_index = peak_index(samples);
    rir.samples = std::move(samples);
    rir.sample_rate = sample_rate;
    rir.validate();
    return rir;
}

std::size_t peak_index(std::span<const double> samples) {
    std::size_t best = 0;
    double best_abs = -1.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double a = std::abs(samples[i]);
        if (a > best_abs) {
            best_abs = a;
            best = i;
        }
    }
    return best;
}

void SimRequest::validate() const {
    room.validate();
    validate_position(room.dims, source, wall_margin, "source");
    validate_position(room.dims, mic, wall_margin, "mic");
    if (source == mic) {
        throw ValidationError("source and mic must not coincide");
    }
    if (!(sample_rate > 0.0) || !std::isfinite(sample_rate)) {
        throw ValidationError("sample rate must be positive");
    }
    if (!(max_rir_seconds > 0.0) || !std::isfinite(max_rir_seconds)) {
        throw ValidationError("RIR length must be positive");
    }
    if (reflection_order && *reflection_order < 0) {
        throw ValidationError("reflection order must be non-negative");
    }
    if (sinc_taps < 1 || sinc_taps % 2 == 0) {
        throw ValidationError("sinc tap count must be odd and positive");
    }
    const double direct_delay = distance(source, mic) / room.speed_of_sound;
    if (max_rir_seconds <= direct_delay) {
        throw ValidationError("RIR length " + std::to_string(max_rir_seconds) + " s is shorter than the direct delay " +
                              std::to_string(direct_delay) + " s");
    }
}

Rir simulate(const SimRequest& req) {
    req.validate();

    const double fs = req.sample_rate;
    const double c = req.room.speed_of_sound;
    const auto length = static_cast<std::size_t>(std::ceil(req.max_rir_seconds * fs));
    const auto ext = req.room.dims.as_array();

    SincKernel kernel(req.sinc_taps);
    const int half = kernel.half();
    const double samples_per_meter = fs / c;
    // Images whose kernel still reaches the last sample.
    const double max_dist = (static_cast<double>(length) + half) / samples_per_meter;

    std::vector<double> gains[3];
    for (int a = 0; a < 3; ++a) {
        const int n = static_cast<int>(std::ceil(max_dist / (2.0 * ext[a])));
        gains[a] = axis_reflection_gains(n, std::sqrt(1.0 - req.room.absorption[2 * a]),
                                         std::sqrt(1.0 - req.room.absorption[2 * a + 1]));
    }
    const auto gain_of = [&](int axis, ImageIndex i) {
        const int n = static_cast<int>(gains[axis].size() / 4);
        return gains[axis][static_cast<std::size_t>(i.m + n) * 2 + i.q];
    };

    std::vector<double> h(length, 0.0);
    for_each_image(ext, req.source, req.mic, max_dist, req.reflection_order,
                   [&](ImageIndex ix, ImageIndex iy, ImageIndex iz, double dist) {
                       const double g = gain_of(0, ix) * gain_of(1, iy) * gain_of(2, iz);
                       if (g == 0.0) return;
                       const double delay = dist * samples_per_meter;
                       const double centre = std::round(delay);
                       const auto taps = kernel.evaluate(delay - centre);
                       const double amp = g / (4.0 * std::numbers::pi * dist);
                       const auto first = static_cast<long long>(centre) - half;
                       const long long lo = std::max(0LL, -first);
                       const long long hi =
                           std::min(static_cast<long long>(taps.size()), static_cast<long long>(length) - first);
                       for (long long k = lo; k < hi; ++k) {
                           h[static_cast<std::size_t>(first + k)] += amp * taps[static_cast<std::size_t>(k)];
                       }
                   });

    Rir rir;
    rir.samples = std::move(h);
    rir.sample_rate = fs;
    // The direct arrival is known exactly. Usually it is also the peak, but a
    // group of lattice images landing on one sample can outweigh it.
    rir.direct_index = std::min(length - 1, static_cast<std::size_t>(std::llround(distance(req.source, req.mic) *
                                                                                  samples_per_meter)));
    return rir;
}

namespace {

// Image-source response with each arrival rounded to the nearest sample.
// Keeps the coherent summation of coinciding images that governs the late
// decay, at a fraction of the cost of the windowed-sinc render.
std::vector<double> render_nearest(const RoomDims& dims, const Position& source, const Position& mic, double beta,
                                   double fs, double c, std::size_t length) {
    std::vector<double> h(length, 0.0);
    const double samples_per_meter = fs / c;
    const double max_dist = static_cast<double>(length) / samples_per_meter;
    std::vector<double> beta_pow;
    for_each_image(dims.as_array(), source, mic, max_dist, std::nullopt,
                   [&](ImageIndex ix, ImageIndex iy, ImageIndex iz, double dist) {
                       const auto order = static_cast<std::size_t>(reflection_count(ix) + reflection_count(iy) +
                                                                   reflection_count(iz));
                       while (beta_pow.size() <= order) {
                           beta_pow.push_back(beta_pow.empty() ? 1.0 : beta_pow.back() * beta);
                       }
                       const auto idx = static_cast<std::size_t>(std::llround(dist * samples_per_meter));
                       if (idx < length) h[idx] += beta_pow[order] / (4.0 * std::numbers::pi * dist);
                   });
    return h;
}

}  // namespace

double matched_absorption_for_t60(const RoomDims& dims, const Position& source, const Position& mic,
                                  double t60_s, double sample_rate, const SimOptions& opts) {
    const double eyring = absorption_for_t60(dims, t60_s);
    validate_position(dims, source, opts.wall_margin, "source");
    validate_position(dims, mic, opts.wall_margin, "mic");
    if (!(sample_rate > 0.0) || !std::isfinite(sample_rate)) {
        throw ValidationError("sample rate must be positive");
    }

    const double c = opts.speed_of_sound;
    const double factor = std::max(opts.length_factor, 1.25);
    const auto length =
        static_cast<std::size_t>(std::ceil((distance(source, mic) / c + factor * t60_s) * sample_rate));

    // x = -ln(1 - alpha): energy lost per reflection, in nepers. The measured
    // T60 behaves roughly like k / x^p, so iterate in log space.
    enum class Outcome { Measured, TooSlow, TooFast };
    const auto measure = [&](double x, double& t60) {
        const std::vector<double> h = render_nearest(dims, source, mic, std::exp(-0.5 * x), sample_rate, c, length);
        const EnergyDecayCurve edc = schroeder_edc(h, sample_rate);
        try {
            t60 = estimate_t60(edc).t60_s;
            return Outcome::Measured;
        } catch (const AnalysisError&) {
            // No room to fit: either the decay never got 25 dB deep, or it
            // collapsed within a couple of samples of the direct path.
            return edc.floor_db() + 5.0 > -25.0 ? Outcome::TooSlow : Outcome::TooFast;
        }
    };

    constexpr int kMaxIterations = 10;
    constexpr double kTolerance = 0.01;
    double x = -std::log1p(-eyring);
    double prev_x = 0.0;
    double prev_log_ratio = 0.0;
    bool have_prev = false;
    double best_x = x;
    double best_err = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < kMaxIterations; ++iter) {
        double t60 = 0.0;
        const Outcome outcome = measure(x, t60);
        if (outcome != Outcome::Measured) {
            x *= outcome == Outcome::TooSlow ? 2.0 : 0.5;
            have_prev = false;
            continue;
        }
        const double log_ratio = std::log(t60 / t60_s);
        if (std::abs(log_ratio) < best_err) {
            best_err = std::abs(log_ratio);
            best_x = x;
        }
        if (std::abs(log_ratio) < std::log1p(kTolerance)) break;

        double p = 1.0;
        if (have_prev && x != prev_x) {
            p = -(log_ratio - prev_log_ratio) / (std::log(x) - std::log(prev_x));
            p = std::clamp(p, 0.3, 3.0);
        }
        prev_x = x;
        prev_log_ratio = log_ratio;
        have_prev = true;
        x *= std::exp(std::clamp(log_ratio / p, -2.0, 2.0));
    }
    const double alpha = -std::expm1(-best_x);
    return std::clamp(alpha, std::numeric_limits<double>::min(), std::nextafter(1.0, 0.0));
}

SimRequest request_for_t60(const RoomDims& dims, const Position& source, const Position& mic, double t60_s,
                           double sample_rate, const SimOptions& opts) {
    const double alpha = opts.match_t60 ? matched_absorption_for_t60(dims, source, mic, t60_s, sample_rate, opts)
                                        : absorption_for_t60(dims, t60_s);
    SimRequest req;
    req.room = RoomSpec::uniform(dims, alpha, opts.speed_of_sound);
    req.source = source;
    req.mic = mic;
    req.sample_rate = sample_rate;
    req.sinc_taps = opts.sinc_taps;
    req.wall_margin = opts.wall_margin;
    const double factor = std::max(opts.length_factor, 1.25);
    req.max_rir_seconds = distance(source, mic) / opts.speed_of_sound + factor * t60_s;
    return req;
}

Rir simulate_for_t60(const RoomDims& dims, const Position& source, const Position& mic, double t60_s,
                     double sample_rate, const SimOptions& opts) {
    return simulate(request_for_t60(dims, source, mic, t60_s, sample_rate, opts));
}

}  // namespace rirforge
