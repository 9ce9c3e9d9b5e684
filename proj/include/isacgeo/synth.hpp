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

// Forward channel model: single-bounce paths from a Scene, rendered into
// band-limited CIRs. It is the ground truth the inverse pipeline is checked
// against.

#pragma once

#include "model.hpp"
#include "spectrum.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace isacgeo
{

enum class PathOrigin
{
    los,
    leakage,
    scatterer
};

struct PathComponent
{
    double delay_s = 0.0;
    double power_db = kNegInf;
    PathOrigin origin = PathOrigin::scatterer;
    std::string label;
    Vec2 reflection_point{}; // scatterer paths only
};

// ------------------------------------------------------------------------
// Deterministic randomness

namespace detail
{
inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : s)
    {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    return h;
}

// Uniform in [0, 1) from the top 53 bits; identical on every platform.
inline double unit_interval(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt)
{
    return splitmix64(seed ^ splitmix64(salt));
}
} // namespace detail

// ------------------------------------------------------------------------
// Antenna pattern

// Gaussian main lobe, power gain normalized to 1 at boresight: g(+-hpbw/2) = 0.5.
inline double beam_gain(double offset_deg, double hpbw_deg)
{
    if (!(hpbw_deg > 0.0))
        throw DomainError("beam_gain: hpbw must be positive");
    const double x = offset_deg / hpbw_deg;
    return std::exp(-4.0 * std::numbers::ln2 * x * x);
}

inline double beam_gain_db(double offset_deg, double hpbw_deg)
{
    if (!(hpbw_deg > 0.0))
        throw DomainError("beam_gain_db: hpbw must be positive");
    const double x = offset_deg / hpbw_deg;
    return -40.0 * std::numbers::ln2 / std::numbers::ln10 * x * x;
}

// ------------------------------------------------------------------------
// Specular geometry for walls

namespace geometry
{
// Foot of the perpendicular from p onto the line through the wall, with its
// segment parameter t (0 at endpoint_a, 1 at endpoint_b).
inline std::pair<Vec2, double> foot_point(const WallSegment &w, const Vec2 &p)
{
    const Vec2 d = w.endpoint_b - w.endpoint_a;
    const double t = (p - w.endpoint_a).dot(d) / d.dot(d);
    return {w.endpoint_a + d * t, t};
}

inline Vec2 wall_normal(const WallSegment &w)
{
    const Vec2 d = w.endpoint_b - w.endpoint_a;
    const Vec2 n{-d.y, d.x};
    return n / n.norm();
}

// Image-method specular point of the path tx -> wall -> rx. Empty if the nodes
// are on opposite sides or the specular point misses the segment.
inline std::optional<Vec2> specular_point(const WallSegment &w, const Vec2 &tx, const Vec2 &rx)
{
    const Vec2 n = wall_normal(w);
    const double st = (tx - w.endpoint_a).dot(n);
    const double sr = (rx - w.endpoint_a).dot(n);
    if (st == 0.0 || sr == 0.0 || (st > 0.0) != (sr > 0.0))
        return std::nullopt;
    const Vec2 image = tx - n * (2.0 * st);
    const Vec2 u = rx - image;
    const double s = (w.endpoint_a - image).dot(n) / u.dot(n);
    const Vec2 q = image + u * s;
    const Vec2 d = w.endpoint_b - w.endpoint_a;
    const double t = (q - w.endpoint_a).dot(d) / d.dot(d);
    if (t < 0.0 || t > 1.0)
        return std::nullopt;
    return q;
}

inline std::optional<Vec2> monostatic_specular_point(const WallSegment &w, const Vec2 &node)
{
    const auto [foot, t] = foot_point(w, node);
    if (t < 0.0 || t > 1.0)
        return std::nullopt;
    return foot;
}
} // namespace geometry

// ------------------------------------------------------------------------
// Path enumeration

namespace detail
{
inline double radar_power_db(const SounderConfig &cfg, double rcs_dbsm, double r_t, double r_r)
{
    const double lambda = cfg.wavelength_m();
    const double four_pi_cubed = std::pow(4.0 * kPi, 3);
    return cfg.tx_power_db + pow2db(lambda * lambda / (four_pi_cubed * r_t * r_t * r_r * r_r)) + rcs_dbsm;
}

struct Reflector
{
    Vec2 point;
    double rcs_dbsm;
    const std::string *label;
};
} // namespace detail

inline std::vector<PathComponent> enumerate_paths_mono(const Scene &scene, Node node, double steering_deg,
                                                       const SounderConfig &cfg)
{
    const Vec2 p = scene.position(node);
    std::vector<PathComponent> paths;
    paths.push_back({0.0, scene.leakage_power_db, PathOrigin::leakage, "leakage", p});

    std::vector<detail::Reflector> refl;
    for (const auto &s : scene.scatterers)
        refl.push_back({s.position, s.rcs_dbsm, &s.label});
    for (const auto &w : scene.walls)
        if (auto q = geometry::monostatic_specular_point(w, p))
            refl.push_back({*q, w.rcs_dbsm, &w.label});

    for (const auto &r : refl)
    {
        const double range = distance(r.point, p);
        if (!(range > 0.0))
            throw SingularRangeError("reflector '" + *r.label + "' coincides with " + std::string(to_string(node)));
        const double offset = look_angle_deg(node, p, r.point) - steering_deg;
        const double power = detail::radar_power_db(cfg, r.rcs_dbsm, range, range) +
                             2.0 * beam_gain_db(offset, cfg.hpbw_sensing_deg);
        paths.push_back({2.0 * range / kSpeedOfLight, power, PathOrigin::scatterer, *r.label, r.point});
    }
    return paths;
}

inline std::vector<PathComponent> enumerate_paths_bi(const Scene &scene, const SounderConfig &cfg)
{
    scene.validate_bistatic(cfg, 1e-6);
    const Vec2 pt = scene.mono1_pos;
    const Vec2 pr = scene.mono2_pos;
    const double d_los = distance(pt, pr);
    const double lambda = cfg.wavelength_m();

    std::vector<PathComponent> paths;
    paths.push_back(
        {d_los / kSpeedOfLight, cfg.tx_power_db + mag2db(lambda / (4.0 * kPi * d_los)), PathOrigin::los, "los", {}});

    std::vector<detail::Reflector> refl;
    for (const auto &s : scene.scatterers)
        refl.push_back({s.position, s.rcs_dbsm, &s.label});
    for (const auto &w : scene.walls)
        if (auto q = geometry::specular_point(w, pt, pr))
            refl.push_back({*q, w.rcs_dbsm, &w.label});

    for (const auto &r : refl)
    {
        const double rt = distance(r.point, pt);
        const double rr = distance(r.point, pr);
        if (!(rt > 0.0) || !(rr > 0.0))
            throw SingularRangeError("reflector '" + *r.label + "' coincides with a bistatic node");
        // Tx boresight points at Rx and vice versa.
        const double off_t = angle_between_deg(r.point - pt, pr - pt);
        const double off_r = angle_between_deg(r.point - pr, pt - pr);
        const double power = detail::radar_power_db(cfg, r.rcs_dbsm, rt, rr) +
                             beam_gain_db(off_t, cfg.hpbw_comm_tx_deg) + beam_gain_db(off_r, cfg.hpbw_comm_rx_deg);
        paths.push_back({(rt + rr) / kSpeedOfLight, power, PathOrigin::scatterer, *r.label, r.point});
    }
    return paths;
}

// ------------------------------------------------------------------------
// Rendering

struct RenderOptions
{
    CirKind kind = CirKind::bistatic;
    double steering_deg = 0.0;
    double delay_offset_s = 0.0;
};

inline double path_phase(std::uint64_t seed, std::string_view label)
{
    return 2.0 * kPi * detail::unit_interval(detail::derive_seed(seed, detail::fnv1a(label)));
}

// Band-limited CIR: H[k] = sum_p a_p exp(-j 2 pi f_k tau_p) over num_taps
// centered bins spaced bandwidth/num_taps, followed by an inverse DFT.
inline Cir render_cir(std::span<const PathComponent> paths, const SounderConfig &cfg, std::uint64_t phase_seed,
                      const RenderOptions &opt = {})
{
    const std::size_t n = cfg.num_taps;
    const double span = cfg.unambiguous_span_s();
    const double dt = cfg.tap_spacing_s();

    std::vector<spectrum::cd> big_h(n, {0.0, 0.0});
    for (const auto &p : paths)
    {
        const double rel = p.delay_s - opt.delay_offset_s;
        if (!(rel >= 0.0) || !(rel < span))
            throw AliasingError("path '" + p.label + "' at " + std::to_string(p.delay_s * 1e9) +
                                " ns lies outside the unambiguous span");
        if (p.power_db == kNegInf)
            continue;
        const std::complex<double> a = std::polar(db2mag(p.power_db), path_phase(phase_seed, p.label));
        const double t = rel / dt; // fractional tap position
        for (std::size_t i = 0; i < n; ++i)
        {
            const double k = static_cast<double>(spectrum::bin_index(i, n));
            big_h[i] += a * std::polar(1.0, -2.0 * kPi * k * t / static_cast<double>(n));
        }
    }

    Cir cir;
    cir.taps = spectrum::inverse(big_h);
    cir.tap_spacing_s = dt;
    cir.delay_offset_s = opt.delay_offset_s;
    cir.kind = opt.kind;
    cir.steering_deg = opt.steering_deg;
    return cir;
}

// Circularly-symmetric complex Gaussian noise with the given mean power per tap.
inline Cir add_noise(Cir cir, double noise_power_db, std::uint64_t seed)
{
    if (std::isnan(noise_power_db) || noise_power_db == std::numeric_limits<double>::infinity())
        throw DomainError("add_noise: noise power must be finite or -inf");
    if (noise_power_db == kNegInf)
        return cir;
    std::mt19937_64 rng(detail::splitmix64(seed));
    std::normal_distribution<double> gauss(0.0, std::sqrt(db2pow(noise_power_db) / 2.0));
    for (auto &t : cir.taps)
    {
        const double re = gauss(rng);
        const double im = gauss(rng);
        t += std::complex<double>(re, im);
    }
    return cir;
}

// ------------------------------------------------------------------------
// Scans

struct MonoScan
{
    Node node = Node::mono1;
    Padp padp;
    std::vector<Cir> cirs; // one per steering angle, in angle-grid order
};

inline Padp padp_from_cirs(std::span<const Cir> cirs)
{
    Padp raw;
    if (cirs.empty())
        throw EmptyInputError("padp_from_cirs: no CIRs");
    const std::size_t n = cirs.front().size();
    for (std::size_t j = 0; j < n; ++j)
        raw.delays_s.push_back(cirs.front().delay_of(static_cast<double>(j)));
    for (const auto &c : cirs)
    {
        if (c.size() != n)
            throw LengthError("padp_from_cirs: CIR lengths differ");
        raw.angles_deg.push_back(c.steering_deg);
        for (std::size_t j = 0; j < n; ++j)
            raw.power_db.push_back(c.power_db(j));
    }
    return normalize_padp(std::move(raw));
}

inline std::uint64_t noise_seed(std::uint64_t seed, Node node, std::size_t index)
{
    return detail::derive_seed(seed, (node == Node::mono1 ? 0x1000ull : 0x2000ull) + index);
}

inline MonoScan scan_monostatic(const Scene &scene, Node node, const SounderConfig &cfg, std::uint64_t seed)
{
    cfg.validate();
    scene.validate();
    MonoScan scan;
    scan.node = node;
    for (std::size_t i = 0; i < cfg.angle_grid_deg.size(); ++i)
    {
        const double theta = cfg.angle_grid_deg[i];
        const auto paths = enumerate_paths_mono(scene, node, theta, cfg);
        Cir cir = render_cir(paths, cfg, seed, {CirKind::monostatic, theta, 0.0});
        scan.cirs.push_back(add_noise(std::move(cir), cfg.noise_floor_db, noise_seed(seed, node, i)));
    }
    scan.padp = padp_from_cirs(scan.cirs);
    return scan;
}

inline Cir sound_bistatic(const Scene &scene, const SounderConfig &cfg, std::uint64_t seed)
{
    cfg.validate();
    const auto paths = enumerate_paths_bi(scene, cfg);
    Cir cir = render_cir(paths, cfg, seed, {CirKind::bistatic, 0.0, 0.0});
    return add_noise(std::move(cir), cfg.noise_floor_db, detail::derive_seed(seed, 0x3000ull));
}

} // namespace isacgeo
