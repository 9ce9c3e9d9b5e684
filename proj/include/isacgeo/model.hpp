// SPDX-License-Identifier: Apache-2.0
//
// isacgeo: scatterer geometry and bistatic RCS from monostatic mmWave scans
// Copyright (C) 2026 The isacgeo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Shared domain types, unit conventions and the scene description.
//
// Units: meters, seconds, Hz, degrees. Powers are dB relative to one common
// (arbitrary) reference. The global frame has its x axis pointing from Mono1
// toward Mono2; a node's steering angle grows toward -y for both nodes, with
// Mono1 facing +x and Mono2 facing -x.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace isacgeo
{

// ------------------------------------------------------------------------
// Errors

class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
    virtual const char *kind() const noexcept { return "error"; }
};

#define ISACGEO_DEFINE_ERROR(Name, tag)                                \
    class Name : public Error                                          \
    {                                                                  \
    public:                                                            \
        using Error::Error;                                            \
        const char *kind() const noexcept override { return tag; }     \
    };

ISACGEO_DEFINE_ERROR(DomainError, "domain")
ISACGEO_DEFINE_ERROR(EmptyInputError, "empty_input")
ISACGEO_DEFINE_ERROR(LengthError, "length")
ISACGEO_DEFINE_ERROR(ConfigError, "config")
ISACGEO_DEFINE_ERROR(AliasingError, "aliasing")
ISACGEO_DEFINE_ERROR(SingularRangeError, "singular_range")
ISACGEO_DEFINE_ERROR(CausalityError, "causality")
ISACGEO_DEFINE_ERROR(GeometryError, "inconsistent_geometry")
ISACGEO_DEFINE_ERROR(CalibrationError, "calibration")
ISACGEO_DEFINE_ERROR(ParseError, "parse")

#undef ISACGEO_DEFINE_ERROR

// ------------------------------------------------------------------------
// Constants and small helpers

inline constexpr double kSpeedOfLight = 299'792'458.0; // m/s, exact SI value
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

inline double pow2db(double p) { return 10.0 * std::log10(p); }
inline double db2pow(double db) { return std::pow(10.0, db / 10.0); }
inline double mag2db(double a) { return 20.0 * std::log10(a); }
inline double db2mag(double db) { return std::pow(10.0, db / 20.0); }

struct Vec2
{
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2 operator+(const Vec2 &o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(const Vec2 &o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
    constexpr bool operator==(const Vec2 &) const = default;

    constexpr double dot(const Vec2 &o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
};

inline double distance(const Vec2 &a, const Vec2 &b) { return (a - b).norm(); }

// Unsigned angle between two nonzero vectors, degrees in [0, 180].
inline double angle_between_deg(const Vec2 &u, const Vec2 &v)
{
    const double cross = u.x * v.y - u.y * v.x;
    return rad2deg(std::atan2(std::abs(cross), u.dot(v)));
}

enum class Node
{
    mono1,
    mono2
};

inline std::string_view to_string(Node n) { return n == Node::mono1 ? "mono1" : "mono2"; }

inline Node node_from_string(std::string_view s)
{
    if (s == "mono1")
        return Node::mono1;
    if (s == "mono2")
        return Node::mono2;
    throw ParseError("unknown node '" + std::string(s) + "'");
}

// Direction a node faces at steering angle theta (unit vector).
inline Vec2 steering_direction(Node node, double theta_deg)
{
    const double t = deg2rad(theta_deg);
    return node == Node::mono1 ? Vec2{std::cos(t), -std::sin(t)} : Vec2{-std::cos(t), -std::sin(t)};
}

// Steering angle under which `node` at `node_pos` sees point `m`, degrees in (-180, 180].
inline double look_angle_deg(Node node, const Vec2 &node_pos, const Vec2 &m)
{
    const Vec2 v = m - node_pos;
    return node == Node::mono1 ? rad2deg(std::atan2(-v.y, v.x)) : rad2deg(std::atan2(-v.y, -v.x));
}

// ------------------------------------------------------------------------
// Sounder configuration

inline std::vector<double> default_angle_grid()
{
    std::vector<double> g;
    for (int a = -60; a <= 60; a += 5)
        g.push_back(static_cast<double>(a));
    return g;
}

struct SounderConfig
{
    double carrier_frequency_hz = 62.64e9;
    double bandwidth_hz = 1.76e9;
    std::size_t num_taps = 128;
    double d_los_m = 4.0;
    std::vector<double> angle_grid_deg = default_angle_grid();
    double hpbw_sensing_deg = 12.0;
    double hpbw_comm_tx_deg = 120.0;
    double hpbw_comm_rx_deg = 120.0;
    double tx_power_db = 60.0;         // lumped transmit power and array gain
    double noise_floor_db = kNegInf;   // per-tap noise power, -inf = noiseless

    double tap_spacing_s() const { return 1.0 / bandwidth_hz; }
    double frequency_resolution_hz() const { return bandwidth_hz / static_cast<double>(num_taps); }
    double unambiguous_span_s() const { return static_cast<double>(num_taps) / bandwidth_hz; }
    double wavelength_m() const { return kSpeedOfLight / carrier_frequency_hz; }

    void validate() const
    {
        if (!(carrier_frequency_hz > 0.0) || !(bandwidth_hz > 0.0))
            throw ConfigError("carrier frequency and bandwidth must be positive");
        if (num_taps == 0)
            throw ConfigError("num_taps must be positive");
        if (!(d_los_m > 0.0))
            throw ConfigError("d_los must be positive");
        if (angle_grid_deg.empty())
            throw ConfigError("angle grid is empty");
        for (std::size_t i = 0; i < angle_grid_deg.size(); ++i)
        {
            const double a = angle_grid_deg[i];
            if (!std::isfinite(a) || a < -90.0 || a > 90.0)
                throw ConfigError("angle grid values must lie in [-90, 90] degrees");
            if (i > 0 && !(a > angle_grid_deg[i - 1]))
                throw ConfigError("angle grid must be strictly increasing");
        }
        if (!(hpbw_sensing_deg > 0.0) || !(hpbw_comm_tx_deg > 0.0) || !(hpbw_comm_rx_deg > 0.0))
            throw ConfigError("beamwidths must be strictly positive");
        if (std::isnan(tx_power_db) || std::isnan(noise_floor_db))
            throw ConfigError("power levels must not be NaN");
    }

    bool operator==(const SounderConfig &) const = default;
};

// ------------------------------------------------------------------------
// Scene

struct PointScatterer
{
    Vec2 position;
    double rcs_dbsm = 0.0;
    std::string label;

    bool operator==(const PointScatterer &) const = default;
};

// An extended planar reflector. Its RCS is the value assigned to the
// per-link specular point.
struct WallSegment
{
    Vec2 endpoint_a;
    Vec2 endpoint_b;
    double rcs_dbsm = 0.0;
    std::string label = "wall";

    bool operator==(const WallSegment &) const = default;
};

struct Scene
{
    Vec2 mono1_pos{0.0, 0.0}; // also the bistatic Tx
    Vec2 mono2_pos{4.0, 0.0}; // also the bistatic Rx
    std::vector<PointScatterer> scatterers;
    std::vector<WallSegment> walls;
    double leakage_power_db = -25.0;

    Vec2 position(Node n) const { return n == Node::mono1 ? mono1_pos : mono2_pos; }
    double baseline_m() const { return distance(mono1_pos, mono2_pos); }

    void validate() const
    {
        if (mono1_pos == mono2_pos)
            throw ConfigError("mono1 and mono2 positions coincide");
        for (const auto &w : walls)
            if (w.endpoint_a == w.endpoint_b)
                throw ConfigError("wall '" + w.label + "' has coincident endpoints");
        if (std::isnan(leakage_power_db))
            throw ConfigError("leakage power must not be NaN");
    }

    // Bistatic runs require the node separation to match the configured LoS distance.
    void validate_bistatic(const SounderConfig &cfg, double tol_m = 1e-9) const
    {
        validate();
        if (std::abs(baseline_m() - cfg.d_los_m) > tol_m)
            throw ConfigError("node separation " + std::to_string(baseline_m()) + " m does not match d_los " +
                              std::to_string(cfg.d_los_m) + " m");
    }

    bool operator==(const Scene &) const = default;
};

// ------------------------------------------------------------------------
// Channel impulse response

enum class CirKind
{
    monostatic,
    bistatic
};

struct Cir
{
    std::vector<std::complex<double>> taps;
    double tap_spacing_s = 0.0;
    double delay_offset_s = 0.0; // absolute delay of tap 0
    CirKind kind = CirKind::bistatic;
    double steering_deg = 0.0; // meaningful for monostatic only

    std::size_t size() const { return taps.size(); }
    double delay_of(double tap) const { return delay_offset_s + tap * tap_spacing_s; }
    double power_db(std::size_t i) const { return pow2db(std::norm(taps[i])); }

    double energy() const
    {
        double e = 0.0;
        for (const auto &t : taps)
            e += std::norm(t);
        return e;
    }
};

// ------------------------------------------------------------------------
// Power-angle-delay profile

struct Padp
{
    std::vector<double> angles_deg;
    std::vector<double> delays_s;
    std::vector<double> power_db; // row-major [angle][delay]

    std::size_t rows() const { return angles_deg.size(); }
    std::size_t cols() const { return delays_s.size(); }
    double at(std::size_t a, std::size_t d) const { return power_db[a * cols() + d]; }
    double &at(std::size_t a, std::size_t d) { return power_db[a * cols() + d]; }

    void validate() const
    {
        if (power_db.size() != rows() * cols())
            throw LengthError("PADP matrix size does not match its axes");
    }
};

// ------------------------------------------------------------------------
// Operations

// One-way range of a monostatic echo.
inline double delay_to_range(double tau_s)
{
    if (!(tau_s >= 0.0))
        throw DomainError("delay_to_range: delay must be non-negative");
    return kSpeedOfLight * tau_s / 2.0;
}

inline double range_to_delay(double range_m)
{
    if (!(range_m >= 0.0))
        throw DomainError("range_to_delay: range must be non-negative");
    return 2.0 * range_m / kSpeedOfLight;
}

// Shift the delay axis so that the strongest entry sits at excess delay zero.
inline Padp normalize_padp(Padp raw)
{
    raw.validate();
    std::size_t best = raw.power_db.size();
    for (std::size_t i = 0; i < raw.power_db.size(); ++i)
    {
        const double p = raw.power_db[i];
        if (std::isnan(p) || p == kNegInf)
            continue;
        if (best == raw.power_db.size() || p > raw.power_db[best])
            best = i;
    }
    if (best == raw.power_db.size())
        throw EmptyInputError("normalize_padp: no finite power entry");
    const double ref = raw.delays_s[best % raw.cols()];
    for (auto &d : raw.delays_s)
        d -= ref;
    return raw;
}

} // namespace isacgeo
