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

// LoS-referenced bistatic RCS. The bistatic link supplies the power ratio
// between an echo and the direct path; the monostatic scans supply the range
// split of the bistatic path. Unknown transmit power and array gains cancel
// in the ratio.

#pragma once

#include "extract.hpp"
#include "geo.hpp"
#include "model.hpp"
#include "synth.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace isacgeo
{

struct RcsEstimate
{
    std::string label; // cluster label
    double d_bi_m = 0.0;
    double r_t_m = 0.0;
    double r_r_m = 0.0;
    double delta_p_db = 0.0;
    double sigma_dbsm = 0.0;
    double beam_comp_db = 0.0; // gain correction already folded into sigma_dbsm
    double excess_delay_s = 0.0;
    ReflectionModel model = ReflectionModel::point;
    Vec2 reflection_point;
};

// D_bi = d_LoS + c (tau_ref - tau_LoS).
inline double reconstruct_bistatic_path(double tau_ref_s, double tau_los_s, double d_los_m)
{
    if (tau_ref_s < tau_los_s)
        throw CausalityError("echo arrives before the LoS path");
    return d_los_m + kSpeedOfLight * (tau_ref_s - tau_los_s);
}

struct RangeSplit
{
    double r_t_m = 0.0;
    double r_r_m = 0.0;
};

// R_t = c tau_mono / 2, R_r = D_bi - R_t.
inline RangeSplit split_ranges(double d_bi_m, double tau_mono_s)
{
    const double r_t = kSpeedOfLight * tau_mono_s / 2.0;
    if (!(r_t > 0.0) || !(r_t < d_bi_m))
        throw GeometryError("monostatic range " + std::to_string(r_t) + " m is not inside the bistatic path " +
                            std::to_string(d_bi_m) + " m");
    return {r_t, d_bi_m - r_t};
}

inline double estimate_rcs(double delta_p_db, double r_t_m, double r_r_m, double d_los_m)
{
    if (!(r_t_m > 0.0) || !(r_r_m > 0.0) || !(d_los_m > 0.0))
        throw DomainError("estimate_rcs: ranges must be positive");
    return delta_p_db + mag2db(r_t_m) + mag2db(r_r_m) - mag2db(d_los_m) + pow2db(4.0 * kPi);
}

// Power ratio that estimate_rcs maps back to sigma_dbsm.
inline double invert_for_delta_p(double sigma_dbsm, double r_t_m, double r_r_m, double d_los_m)
{
    if (!(r_t_m > 0.0) || !(r_r_m > 0.0) || !(d_los_m > 0.0))
        throw DomainError("invert_for_delta_p: ranges must be positive");
    return sigma_dbsm - mag2db(r_t_m) - mag2db(r_r_m) + mag2db(d_los_m) - pow2db(4.0 * kPi);
}

// ------------------------------------------------------------------------
// Pipeline

struct RcsOptions
{
    bool beam_compensation = true;
    double hpbw_comm_tx_deg = 120.0;
    double hpbw_comm_rx_deg = 120.0;
};

struct RcsResult
{
    std::vector<RcsEstimate> estimates;
    std::vector<std::string> warnings;
};

namespace detail
{
// Intersection of circles (p_t, r_t) and (p_r, r_r) on the side of `hint`.
inline std::optional<Vec2> bistatic_point(const Vec2 &p_t, const Vec2 &p_r, double r_t, double r_r, const Vec2 &hint)
{
    const double d = distance(p_t, p_r);
    const double a = (r_t * r_t - r_r * r_r + d * d) / (2.0 * d);
    const double h2 = r_t * r_t - a * a;
    if (h2 < 0.0)
        return std::nullopt;
    const Vec2 e = (p_r - p_t) / d;
    const Vec2 nrm{-e.y, e.x};
    const Vec2 base = p_t + e * a;
    const double h = std::sqrt(h2);
    const Vec2 c1 = base + nrm * h, c2 = base - nrm * h;
    return distance(c1, hint) <= distance(c2, hint) ? c1 : c2;
}

inline std::size_t label_rank(const std::string &label)
{
    if (label.size() > 1 && label[0] == 'C')
        return static_cast<std::size_t>(std::stoul(label.substr(1)));
    return static_cast<std::size_t>(-1);
}
} // namespace detail

// Chains path reconstruction, range split and the RCS relation for every
// matched association. The monostatic range comes from the cluster's
// strongest member; for a plane-model match the reconstructed specular point
// fixes R_t instead.
inline RcsResult rcs_from_associations(const BistaticMpcs &bi, std::span<const Association> assoc,
                                       std::span<const Cluster> clusters, const Vec2 &p_t, const Vec2 &p_r,
                                       double d_los, const RcsOptions &opt = {})
{
    RcsResult res;
    for (const auto &a : assoc)
    {
        if (!a.matched())
            continue;
        const auto it = std::find_if(clusters.begin(), clusters.end(),
                                     [&](const Cluster &c) { return c.label == a.cluster_label; });
        if (it == clusters.end() || it->members.empty())
        {
            res.warnings.push_back("cluster " + a.cluster_label + " has no monostatic MPC; skipped");
            continue;
        }
        const ScattererPoint &m = it->strongest();
        RcsEstimate e;
        e.label = a.cluster_label;
        e.model = a.model;
        e.excess_delay_s = a.measured_excess_delay_s;
        try
        {
            e.d_bi_m = reconstruct_bistatic_path(bi.los_delay_s + a.measured_excess_delay_s, bi.los_delay_s, d_los);
            double r_t = 0.0;
            if (a.model == ReflectionModel::plane)
                r_t = distance(a.reflection_point, p_t);
            else if (m.source == Node::mono1)
                r_t = m.range_m;
            else
                r_t = e.d_bi_m - m.range_m;
            const RangeSplit s = split_ranges(e.d_bi_m, 2.0 * r_t / kSpeedOfLight);
            e.r_t_m = s.r_t_m;
            e.r_r_m = s.r_r_m;
        }
        catch (const Error &err)
        {
            res.warnings.push_back("cluster " + a.cluster_label + ": " + err.what() + "; skipped");
            continue;
        }

        e.delta_p_db = a.comm_mpc.power_db - bi.los.power_db;
        e.reflection_point = a.model == ReflectionModel::plane
                                 ? a.reflection_point
                                 : detail::bistatic_point(p_t, p_r, e.r_t_m, e.r_r_m, m.position).value_or(m.position);
        if (opt.beam_compensation)
        {
            const double off_t = angle_between_deg(e.reflection_point - p_t, p_r - p_t);
            const double off_r = angle_between_deg(e.reflection_point - p_r, p_t - p_r);
            e.beam_comp_db = beam_gain_db(off_t, opt.hpbw_comm_tx_deg) + beam_gain_db(off_r, opt.hpbw_comm_rx_deg);
        }
        e.sigma_dbsm = estimate_rcs(e.delta_p_db, e.r_t_m, e.r_r_m, d_los) - e.beam_comp_db;
        res.estimates.push_back(e);
    }
    std::stable_sort(res.estimates.begin(), res.estimates.end(), [](const RcsEstimate &x, const RcsEstimate &y) {
        return detail::label_rank(x.label) < detail::label_rank(y.label);
    });
    return res;
}

// Full chain from the bistatic CIR: LoS calibration, echo extraction and
// association, then per-cluster RCS.
inline RcsResult rcs_pipeline(const Cir &bi_cir, const PeakGateParams &comm_gates, std::span<const Cluster> clusters,
                              const Scene &scene, double d_los, const AssociationOptions &aopt = {},
                              const RcsOptions &ropt = {})
{
    const BistaticMpcs bi = extract_bistatic(bi_cir, comm_gates);
    const auto assoc = associate_mpcs(bi.echoes, clusters, scene.mono1_pos, scene.mono2_pos, d_los, aopt);
    return rcs_from_associations(bi, assoc, clusters, scene.mono1_pos, scene.mono2_pos, d_los, ropt);
}

} // namespace isacgeo
