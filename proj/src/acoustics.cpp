// SPDX-FileCopyrightText: © 2026 The rirforge Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "rirforge/acoustics.hpp"

#include <cmath>
#include <string>

#include "rirforge/errors.hpp"

namespace rirforge {

namespace {

constexpr RoomTypeReference kRoomTypeReferences[] = {
    {"radio_studio", {100.0, 500.0, 2000.0}, {0.4, 0.75, 1.2}},
    {"catholic_church", {500.0, 1000.0, 5000.0}, {1.3, 1.5, 1.8}},
    {"speech_auditorium", {200.0, 1e3, 1e4}, {0.7, 0.8, 1.0}},
    {"conference_room", {200.0, 1e3, 1e4}, {0.6, 0.84, 1.17}},
};

void require_positive_t60(double t60_s) {
    if (!(t60_s > 0.0) || !std::isfinite(t60_s)) {
        throw DomainError("t60 must be a positive finite number of seconds, got " + std::to_string(t60_s));
    }
}

}  // namespace

double distance(const Position& a, const Position& b) {
    return std::hypot(a.x - b.x, a.y - b.y, a.z - b.z);
}

void RoomDims::validate() const {
    for (double d : as_array()) {
        if (!(d > 0.0) || !std::isfinite(d)) {
            throw ValidationError("room dimensions must be positive and finite");
        }
    }
}

RoomSpec RoomSpec::uniform(const RoomDims& dims, double alpha, double speed_of_sound) {
    RoomSpec room;
    room.dims = dims;
    room.absorption.fill(alpha);
    room.speed_of_sound = speed_of_sound;
    return room;
}

void RoomSpec::validate() const {
    dims.validate();
    for (double a : absorption) {
        if (!(a > 0.0 && a <= 1.0)) {
            throw ValidationError("wall absorption coefficients must lie in (0, 1], got " + std::to_string(a));
        }
    }
    if (!(speed_of_sound > 0.0) || !std::isfinite(speed_of_sound)) {
        throw ValidationError("speed of sound must be positive");
    }
}

double min_volume_for_t60_law() {
    return std::exp(kT60VolumeIntercept / kT60VolumeSlope);
}

double t60_from_volume(double volume_m3) {
    const double v_min = min_volume_for_t60_law();
    if (!(volume_m3 > v_min) || !std::isfinite(volume_m3)) {
        throw DomainError("volume must exceed " + std::to_string(v_min) + " m^3 for the volume/T60 law, got " +
                          std::to_string(volume_m3));
    }
    return kT60VolumeSlope * std::log(volume_m3) - kT60VolumeIntercept;
}

T60Band t60_band_from_volume(double volume_m3, double fraction) {
    if (!(fraction >= 0.0 && fraction < 1.0)) {
        throw DomainError("band fraction must lie in [0, 1)");
    }
    const double center = t60_from_volume(volume_m3);
    return T60Band{center, (1.0 - fraction) * center, (1.0 + fraction) * center};
}

double absorption_for_t60(const RoomDims& dims, double t60_s) {
    dims.validate();
    require_positive_t60(t60_s);
    const double x = kSabineConstant * dims.volume() / (dims.surface_area() * t60_s);
    // -expm1(-x) keeps precision as x -> 0 (very long T60).
    const double alpha = -std::expm1(-x);
    if (!(alpha > 0.0)) {
        throw DomainError("t60 too long: absorption underflows to zero");
    }
    // Clamp the x -> inf limit (vanishing T60) to the open interval.
    return alpha < 1.0 ? alpha : std::nextafter(1.0, 0.0);
}

double sabine_absorption_for_t60(const RoomDims& dims, double t60_s) {
    dims.validate();
    require_positive_t60(t60_s);
    return kSabineConstant * dims.volume() / (dims.surface_area() * t60_s);
}

double eyring_t60(const RoomDims& dims, double alpha) {
    dims.validate();
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DomainError("Eyring T60 needs absorption in (0, 1)");
    }
    return kSabineConstant * dims.volume() / (-dims.surface_area() * std::log1p(-alpha));
}

bool is_inside(const RoomDims& dims, const Position& p, double margin_m) {
    const auto ext = dims.as_array();
    const double coords[3] = {p.x, p.y, p.z};
    for (int i = 0; i < 3; ++i) {
        if (!std::isfinite(coords[i]) || coords[i] < margin_m || coords[i] > ext[i] - margin_m) {
            return false;
        }
    }
    return true;
}

void validate_position(const RoomDims& dims, const Position& p, double margin_m, std::string_view what) {
    if (!is_inside(dims, p, margin_m)) {
        throw ValidationError(std::string(what) + " must lie inside the room at least " + std::to_string(margin_m) +
                              " m from every wall");
    }
}

std::span<const RoomTypeReference> room_type_references() {
    return kRoomTypeReferences;
}

}  // namespace rirforge
