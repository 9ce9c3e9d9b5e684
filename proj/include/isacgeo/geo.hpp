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

// Scatterer geometry: back-projection of monostatic MPCs, clustering into
// reflectors, association of bistatic echoes, and circle/ellipse checks.

#pragma once

#include "extract.hpp"
#include "model.hpp"
#include "synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

namespace isacgeo
{

struct ScattererPoint
{
    Vec2 position;
    Node source = Node::mono1;
    double steering_deg = 0.0;
    double range_m = 0.0;
    double power_db = kNegInf;

    bool operator==(const ScattererPoint &) const = default;
};

// Mono1 faces +x, Mono2 faces -x; both steer toward -y for positive angles.
inline Vec2 backproject(Node node, const Vec2 &node_pos, double theta_deg, double r)
{
    if (!(r >= 0.0))
        throw DomainError("backproject: range must be non-negative");
    const double t = deg2rad(theta_deg);
    if (node == Node::mono1)
        return {node_pos.x + r * std::cos(t), node_pos.y - r * std::sin(t)};
    return {node_pos.x - r * std::cos(t), node_pos.y - r * std::sin(t)};
}

inline std::vector<ScattererPoint> backproject_mpcs(Node node, const Vec2 &node_pos, std::span<const Mpc> mpcs)
{
    std::vector<ScattererPoint> out;
    out.reserve(mpcs.size());
    for (const auto &m : mpcs)
        out.push_back({backproject(node, node_pos, m.steering_deg, m.range_m), node, m.steering_deg, m.range_m,
                       m.power_db});
    return out;
}

// ------------------------------------------------------------------------
// Clustering

struct Cluster
{
    std::vector<ScattererPoint> members;
    Vec2 centroid;
    std::string label;

    double total_power() const
    {
        double p = 0.0;
        for (const auto &m : members)
            p += db2pow(m.power_db);
        return p;
    }

    // Member with the largest power (first in canonical order on ties).
    const ScattererPoint &strongest() const
    {
        return *std::max_element(members.begin(), members.end(),
                                 [](const ScattererPoint &a, const ScattererPoint &b) { return a.power_db < b.power_db; });
    }
};

namespace detail
{
inline bool canonical_less(const ScattererPoint &a, const ScattererPoint &b)
{
    return std::tuple(static_cast<int>(a.source), a.steering_deg, a.range_m, a.power_db, a.position.x, a.position.y) <
           std::tuple(static_cast<int>(b.source), b.steering_deg, b.range_m, b.power_db, b.position.x, b.position.y);
}
} // namespace detail

// Single-linkage grouping: points closer than eps are joined transitively.
// Groups under min_points are dropped. Output is sorted by descending total
// power and labeled C1, C2, ...
inline std::vector<Cluster> cluster_scatterers(std::vector<ScattererPoint> points, double eps, std::size_t min_points)
{
    if (!(eps > 0.0))
        throw DomainError("cluster_scatterers: eps must be positive");
    if (min_points < 1)
        throw DomainError("cluster_scatterers: min_points must be at least 1");
    std::sort(points.begin(), points.end(), detail::canonical_less);

    const std::size_t n = points.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t i) {
        while (parent[i] != i)
            i = parent[i] = parent[parent[i]];
        return i;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (distance(points[i].position, points[j].position) <= eps)
            {
                const std::size_t a = find(i), b = find(j);
                if (a != b)
                    parent[std::max(a, b)] = std::min(a, b);
            }

    std::vector<Cluster> out;
    std::vector<std::size_t> slot(n, n);
    for (std::size_t i = 0; i < n; ++i)
    {
        const std::size_t r = find(i);
        if (slot[r] == n)
        {
            slot[r] = out.size();
            out.emplace_back();
        }
        out[slot[r]].members.push_back(points[i]);
    }
    std::erase_if(out, [&](const Cluster &c) { return c.members.size() < min_points; });
    for (auto &c : out)
    {
        Vec2 s;
        for (const auto &m : c.members)
            s = s + m.position;
        c.centroid = s / static_cast<double>(c.members.size());
    }
    std::stable_sort(out.begin(), out.end(), [](const Cluster &a, const Cluster &b) {
        const double pa = a.total_power(), pb = b.total_power();
        if (pa != pb)
            return pa > pb;
        return std::tuple(a.centroid.x, a.centroid.y) < std::tuple(b.centroid.x, b.centroid.y);
    });
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i].label = "C" + std::to_string(i + 1);
    return out;
}

// ------------------------------------------------------------------------
// Bistatic association

inline double predict_bistatic_excess_delay(const Vec2 &m, const Vec2 &p_t, const Vec2 &p_r, double d_los)
{
    if (std::abs(distance(p_t, p_r) - d_los) > 1e-9)
        throw ConfigError("predict_bistatic_excess_delay: d_los does not match the node separation");
    return std::max(0.0, (distance(m, p_t) + distance(m, p_r) - d_los) / kSpeedOfLight);
}

enum class ReflectionModel
{
    point, // the member point itself reflects
    plane  // a plane through the member, facing the node that saw it
};

inline std::string_view to_string(ReflectionModel m) { return m == ReflectionModel::point ? "point" : "plane"; }

inline ReflectionModel reflection_model_from_string(std::string_view s)
{
    if (s == "point")
        return ReflectionModel::point;
    if (s == "plane")
        return ReflectionModel::plane;
    throw ParseError("unknown reflection model '" + std::string(s) + "'");
}

// Specular point on the plane through `m` whose normal points at the node
// that observed it. Empty when the bistatic nodes straddle the plane.
inline std::optional<Vec2> tangent_plane_specular(const ScattererPoint &m, const Vec2 &node_pos, const Vec2 &p_t,
                                                  const Vec2 &p_r)
{
    const Vec2 v = node_pos - m.position;
    const double len = v.norm();
    if (!(len > 0.0))
        return std::nullopt;
    const Vec2 n = v / len;
    const double st = (p_t - m.position).dot(n);
    const double sr = (p_r - m.position).dot(n);
    if (!(st > 0.0) || !(sr > 0.0))
        return std::nullopt;
    const Vec2 image = p_t - n * (2.0 * st);
    const Vec2 u = p_r - image;
    const double s = (m.position - image).dot(n) / u.dot(n);
    return image + u * s;
}

struct AssociationOptions
{
    double tol_s = 1.0e-9;
    bool plane_candidates = true;
};

struct Association
{
    Mpc comm_mpc;
    std::string cluster_label; // empty when unmatched
    double predicted_excess_delay_s = std::numeric_limits<double>::quiet_NaN();
    double measured_excess_delay_s = 0.0;
    double residual_s = std::numeric_limits<double>::quiet_NaN();
    ReflectionModel model = ReflectionModel::point;
    Vec2 reflection_point{std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};

    bool matched() const { return !cluster_label.empty(); }
};

// For every echo, evaluate the predicted excess delay at each member of each
// cluster and keep the smallest |residual|. Echoes whose best residual exceeds
// the tolerance stay unmatched. The LoS row (excess 0) is skipped.
inline std::vector<Association> associate_mpcs(std::span<const Mpc> comm_mpcs, std::span<const Cluster> clusters,
                                               const Vec2 &p_t, const Vec2 &p_r, double d_los,
                                               const AssociationOptions &opt = {})
{
    if (!(opt.tol_s > 0.0))
        throw DomainError("associate_mpcs: tolerance must be positive");
    if (std::abs(distance(p_t, p_r) - d_los) > 1e-9)
        throw ConfigError("associate_mpcs: d_los does not match the node separation");

    std::vector<Association> out;
    for (const auto &mpc : comm_mpcs)
    {
        if (!(mpc.excess_delay_s > 0.0))
            continue;
        Association best;
        best.comm_mpc = mpc;
        best.measured_excess_delay_s = mpc.excess_delay_s;
        double best_abs = std::numeric_limits<double>::infinity();
        std::string best_label;

        auto consider = [&](const Cluster &c, const Vec2 &q, ReflectionModel model) {
            const double pred = predict_bistatic_excess_delay(q, p_t, p_r, d_los);
            const double res = mpc.excess_delay_s - pred;
            if (std::abs(res) < best_abs)
            {
                best_abs = std::abs(res);
                best_label = c.label;
                best.predicted_excess_delay_s = pred;
                best.residual_s = res;
                best.model = model;
                best.reflection_point = q;
            }
        };

        for (const auto &c : clusters)
            for (const auto &m : c.members)
            {
                consider(c, m.position, ReflectionModel::point);
                if (opt.plane_candidates)
                {
                    const Vec2 node = m.source == Node::mono1 ? p_t : p_r;
                    if (auto s = tangent_plane_specular(m, node, p_t, p_r))
                        consider(c, *s, ReflectionModel::plane);
                }
            }
        if (best_abs <= opt.tol_s)
            best.cluster_label = best_label;
        out.push_back(best);
    }
    return out;
}

// ------------------------------------------------------------------------
// Circle / ellipse validation

struct Circle
{
    Vec2 center;
    double radius = 0.0;
};

struct Ellipse
{
    Vec2 focus_a;
    Vec2 focus_b;
    double path_sum = 0.0;
};

using Curve = std::variant<Circle, Ellipse>;
using Reference = std::variant<Vec2, WallSegment>;

namespace detail
{
struct CurveEval
{
    Vec2 center;
    double a, b; // semi-axes
    double c, s; // rotation
    double perimeter;

    Vec2 at(double u) const
    {
        const double x = a * std::cos(u), y = b * std::sin(u);
        return {center.x + c * x - s * y, center.y + s * x + c * y};
    }
    Vec2 d(double u) const
    {
        const double x = -a * std::sin(u), y = b * std::cos(u);
        return {c * x - s * y, s * x + c * y};
    }
};

inline CurveEval make_eval(const Curve &curve)
{
    if (const auto *ci = std::get_if<Circle>(&curve))
    {
        if (!(ci->radius > 0.0))
            throw DomainError("validate_geometry: circle radius must be positive");
        return {ci->center, ci->radius, ci->radius, 1.0, 0.0, 2.0 * kPi * ci->radius};
    }
    const auto &e = std::get<Ellipse>(curve);
    const double f = distance(e.focus_a, e.focus_b);
    if (!(e.path_sum > f))
        throw DomainError("validate_geometry: ellipse path sum must exceed the focal distance");
    const double a = e.path_sum / 2.0;
    const double b = std::sqrt(a * a - f * f / 4.0);
    const Vec2 axis = f > 0.0 ? (e.focus_b - e.focus_a) / f : Vec2{1.0, 0.0};
    // Ramanujan's approximation is ample for choosing a sampling step.
    const double h = (a - b) * (a - b) / ((a + b) * (a + b));
    const double per = kPi * (a + b) * (1.0 + 3.0 * h / (10.0 + std::sqrt(4.0 - 3.0 * h)));
    return {(e.focus_a + e.focus_b) / 2.0, a, b, axis.x, axis.y, per};
}

struct Approach
{
    Vec2 on_a, on_b;
    double gap;
    Vec2 mid() const { return (on_a + on_b) / 2.0; }
};

// Local nearest approaches between two closed curves, refined to the 0.5 mm
// sampling grid and then by Newton on A(u) = B(v) where the curves cross.
inline std::vector<Approach> approaches(const CurveEval &ca, const CurveEval &cb, double max_gap)
{
    const double coarse = 0.01;
    // Arc speed never exceeds the major semi-axis, which bounds the step.
    const std::size_t na = std::max<std::size_t>(64, static_cast<std::size_t>(std::ceil(2.0 * kPi * ca.a / coarse)));
    const std::size_t nb = std::max<std::size_t>(64, static_cast<std::size_t>(std::ceil(2.0 * kPi * cb.a / coarse)));
    const double du = 2.0 * kPi / static_cast<double>(na);
    const double dv = 2.0 * kPi / static_cast<double>(nb);

    std::vector<Vec2> pb(nb);
    for (std::size_t j = 0; j < nb; ++j)
        pb[j] = cb.at(static_cast<double>(j) * dv);
    std::vector<double> dist(na);
    std::vector<std::size_t> arg(na);
    for (std::size_t i = 0; i < na; ++i)
    {
        const Vec2 p = ca.at(static_cast<double>(i) * du);
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < nb; ++j)
        {
            const double dd = distance(p, pb[j]);
            if (dd < best)
            {
                best = dd;
                arg[i] = j;
            }
        }
        dist[i] = best;
    }

    std::vector<double> neg(na);
    for (std::size_t i = 0; i < na; ++i)
        neg[i] = -dist[i];
    std::vector<Approach> out;
    for (std::size_t i : local_maxima(neg))
    {
        if (dist[i] > max_gap + 4.0 * coarse)
            continue;
        // Fine pass: +-3 coarse steps on both curves at <= 0.5 mm.
        const double fine = 0.0005;
        const double u0 = static_cast<double>(i) * du, v0 = static_cast<double>(arg[i]) * dv;
        const double wu = 3.0 * du, wv = 3.0 * dv;
        const std::size_t ku = static_cast<std::size_t>(std::ceil(2.0 * wu * ca.a / fine)) + 1;
        const std::size_t kv = static_cast<std::size_t>(std::ceil(2.0 * wv * cb.a / fine)) + 1;
        double bu = u0, bv = v0, bd = std::numeric_limits<double>::infinity();
        std::vector<Vec2> fb(kv + 1);
        for (std::size_t q = 0; q <= kv; ++q)
            fb[q] = cb.at(v0 - wv + 2.0 * wv * static_cast<double>(q) / static_cast<double>(kv));
        for (std::size_t p = 0; p <= ku; ++p)
        {
            const double u = u0 - wu + 2.0 * wu * static_cast<double>(p) / static_cast<double>(ku);
            const Vec2 pa = ca.at(u);
            for (std::size_t q = 0; q <= kv; ++q)
            {
                const double dd = distance(pa, fb[q]);
                if (dd < bd)
                {
                    bd = dd;
                    bu = u;
                    bv = v0 - wv + 2.0 * wv * static_cast<double>(q) / static_cast<double>(kv);
                }
            }
        }
        // Newton polish for crossing curves.
        double nu = bu, nv = bv;
        for (int it = 0; it < 30; ++it)
        {
            const Vec2 f = ca.at(nu) - cb.at(nv);
            const Vec2 ja = ca.d(nu), jb = cb.d(nv);
            const double det = ja.x * (-jb.y) - (-jb.x) * ja.y;
            if (std::abs(det) < 1e-12)
                break;
            nu -= (f.x * (-jb.y) - (-jb.x) * f.y) / det;
            nv -= (ja.x * f.y - ja.y * f.x) / det;
        }
        const double nd = distance(ca.at(nu), cb.at(nv));
        if (std::isfinite(nd) && nd < bd && distance(ca.at(nu), ca.at(bu)) < 0.01)
        {
            bd = nd;
            bu = nu;
            bv = nv;
        }
        if (bd <= max_gap)
            out.push_back({ca.at(bu), cb.at(bv), bd});
    }
    return out;
}

inline double distance_to_reference(const Vec2 &p, const Reference &ref)
{
    if (const auto *pt = std::get_if<Vec2>(&ref))
        return distance(p, *pt);
    const auto &w = std::get<WallSegment>(ref);
    const Vec2 d = w.endpoint_b - w.endpoint_a;
    const double t = std::clamp((p - w.endpoint_a).dot(d) / d.dot(d), 0.0, 1.0);
    return distance(p, w.endpoint_a + d * t);
}
} // namespace detail

struct PairApproach
{
    std::size_t curve_a = 0;
    std::size_t curve_b = 0;
    Vec2 point;         // midpoint of the nearest-approach pair
    double gap_m = 0.0; // curve-to-curve distance there
};

struct LocalizationReport
{
    bool intersects = false; // false if some pair never comes within 0.5 m
    std::vector<PairApproach> pairs;
    Vec2 mean_point{std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
    double max_curve_gap_m = std::numeric_limits<double>::quiet_NaN();    // largest pairwise approach distance
    double intersection_spread_m = std::numeric_limits<double>::quiet_NaN(); // largest distance between pair points
    double max_gap_m = std::numeric_limits<double>::quiet_NaN();          // max of the two above
    double reference_error_m = std::numeric_limits<double>::quiet_NaN();  // mean point to reference
};

// Pairwise nearest approaches among all curves. Where a pair meets more than
// once, the combination with the tightest spread is taken as the common region.
inline LocalizationReport validate_geometry(std::span<const Curve> curves, const Reference &reference)
{
    constexpr double kNoIntersection = 0.5;
    if (curves.size() < 2)
        throw DomainError("validate_geometry: need at least two curves");
    std::vector<detail::CurveEval> ev;
    for (const auto &c : curves)
        ev.push_back(detail::make_eval(c));

    std::vector<std::pair<std::size_t, std::size_t>> idx;
    std::vector<std::vector<detail::Approach>> cand;
    LocalizationReport rep;
    for (std::size_t i = 0; i < ev.size(); ++i)
        for (std::size_t j = i + 1; j < ev.size(); ++j)
        {
            idx.emplace_back(i, j);
            cand.push_back(detail::approaches(ev[i], ev[j], kNoIntersection));
            if (cand.back().empty())
                return rep;
        }

    // Exhaustive choice over candidate combinations (at most a few per pair).
    std::vector<std::size_t> pick(cand.size(), 0), best_pick;
    double best_score = std::numeric_limits<double>::infinity();
    while (true)
    {
        double score = 0.0;
        for (std::size_t a = 0; a < pick.size(); ++a)
            for (std::size_t b = a + 1; b < pick.size(); ++b)
                score = std::max(score, distance(cand[a][pick[a]].mid(), cand[b][pick[b]].mid()));
        double gaps = 0.0;
        for (std::size_t a = 0; a < pick.size(); ++a)
            gaps = std::max(gaps, cand[a][pick[a]].gap);
        score = std::max(score, gaps);
        if (score < best_score)
        {
            best_score = score;
            best_pick = pick;
        }
        std::size_t k = 0;
        while (k < pick.size() && ++pick[k] == cand[k].size())
            pick[k++] = 0;
        if (k == pick.size())
            break;
    }

    rep.intersects = true;
    Vec2 sum;
    rep.max_curve_gap_m = 0.0;
    rep.intersection_spread_m = 0.0;
    for (std::size_t a = 0; a < cand.size(); ++a)
    {
        const auto &ap = cand[a][best_pick[a]];
        rep.pairs.push_back({idx[a].first, idx[a].second, ap.mid(), ap.gap});
        rep.max_curve_gap_m = std::max(rep.max_curve_gap_m, ap.gap);
        sum = sum + ap.mid();
    }
    for (std::size_t a = 0; a < rep.pairs.size(); ++a)
        for (std::size_t b = a + 1; b < rep.pairs.size(); ++b)
            rep.intersection_spread_m =
                std::max(rep.intersection_spread_m, distance(rep.pairs[a].point, rep.pairs[b].point));
    rep.max_gap_m = std::max(rep.max_curve_gap_m, rep.intersection_spread_m);
    rep.mean_point = sum / static_cast<double>(rep.pairs.size());
    rep.reference_error_m = detail::distance_to_reference(rep.mean_point, reference);
    return rep;
}

// Samples of a curve for plotting, spaced at most `step` meters apart.
inline std::vector<Vec2> sample_curve(const Curve &curve, double step = 0.005)
{
    if (!(step > 0.0))
        throw DomainError("sample_curve: step must be positive");
    const auto ev = detail::make_eval(curve);
    const std::size_t n = static_cast<std::size_t>(std::ceil(2.0 * kPi * ev.a / step));
    std::vector<Vec2> out;
    out.reserve(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
        out.push_back(ev.at(2.0 * kPi * static_cast<double>(i) / static_cast<double>(n)));
    return out;
}

} // namespace isacgeo
