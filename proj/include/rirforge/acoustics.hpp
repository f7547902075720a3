// SPDX-FileCopyrightText: © 2026 The rirforge Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <span>
#include <string_view>

namespace rirforge {

inline constexpr double kDefaultSpeedOfSound = 343.0;  // m/s
inline constexpr double kSabineConstant = 0.161;       // s/m, at 343 m/s
inline constexpr double kDefaultWallMargin = 0.3;      // m

// Conference-room fit: T60 = slope * ln(V) - intercept.
inline constexpr double kT60VolumeSlope = 0.145;
inline constexpr double kT60VolumeIntercept = 0.165;
inline constexpr double kT60BandFraction = 0.2;

struct Position {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    bool operator==(const Position&) const = default;
};

double distance(const Position& a, const Position& b);

/// Shoebox extent in meters.
struct RoomDims {
    double length = 0.0;
    double width = 0.0;
    double height = 0.0;

    double volume() const { return length * width * height; }
    double surface_area() const { return 2.0 * (length * width + length * height + width * height); }
    std::array<double, 3> as_array() const { return {length, width, height}; }

    /// Throws ValidationError unless every extent is finite and positive.
    void validate() const;

    bool operator==(const RoomDims&) const = default;
};

/// Wall order: x=0, x=L, y=0, y=W, z=0 (floor), z=H (ceiling).
using WallAbsorption = std::array<double, 6>;

struct RoomSpec {
    RoomDims dims;
    WallAbsorption absorption{1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
    double speed_of_sound = kDefaultSpeedOfSound;

    static RoomSpec uniform(const RoomDims& dims, double alpha,
                            double speed_of_sound = kDefaultSpeedOfSound);

    double volume() const { return dims.volume(); }
    double surface_area() const { return dims.surface_area(); }

    /// Dimensions positive, every coefficient in (0, 1], speed of sound positive.
    void validate() const;
};

/// Expected T60 interval around the volume law, center scaled by (1 -/+ fraction).
struct T60Band {
    double center_s = 0.0;
    double low_s = 0.0;
    double high_s = 0.0;

    bool contains(double t60_s) const { return t60_s >= low_s && t60_s <= high_s; }
};

/// Smallest volume for which the volume law yields a positive T60, e^(b/a).
double min_volume_for_t60_law();

/// Conference-room volume law. Throws DomainError when volume is not above
/// min_volume_for_t60_law().
double t60_from_volume(double volume_m3);

T60Band t60_band_from_volume(double volume_m3, double fraction = kT60BandFraction);

/// Uniform wall absorption realizing `t60_s` by inverting Eyring's formula:
/// alpha = 1 - exp(-0.161 V / (S t60)). Always in (0, 1) for t60 > 0.
double absorption_for_t60(const RoomDims& dims, double t60_s);

/// Sabine inversion 0.161 V / (S t60), kept as a cross-check for Eyring. May
/// exceed 1 for large rooms with short T60.
double sabine_absorption_for_t60(const RoomDims& dims, double t60_s);

/// Eyring reverberation time of a room with uniform absorption.
double eyring_t60(const RoomDims& dims, double alpha);

/// True if `p` lies inside the room at least `margin_m` from every wall.
bool is_inside(const RoomDims& dims, const Position& p, double margin_m = kDefaultWallMargin);

/// Throws ValidationError naming `what` when `p` is not inside the room margin.
void validate_position(const RoomDims& dims, const Position& p, double margin_m = kDefaultWallMargin,
                       std::string_view what = "position");

/// Published reverberation-time guidelines per room type. Only the conference
/// room row backs the volume law; the rest are reference values.
struct RoomTypeReference {
    std::string_view room_type;
    std::array<double, 3> volumes_m3;
    std::array<double, 3> t60_s;
};

std::span<const RoomTypeReference> room_type_references();

}  // namespace rirforge
