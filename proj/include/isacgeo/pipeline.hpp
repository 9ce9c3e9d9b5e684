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

// End-to-end chain on a synthetic scene: scan both monostatic nodes, sound
// the bistatic link, extract, map, associate, estimate RCS and spreads.
// Ground-truth helpers let callers score the result against the scene.

#pragma once

#include "extract.hpp"
#include "geo.hpp"
#include "model.hpp"
#include "rcs.hpp"
#include "synth.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace isacgeo
{

struct PipelineParams
{
    PeakGateParams sensing_gates{};
    PeakGateParams comm_gates = default_comm_gates();
    double cluster_eps_m = 0.40;
    std::size_t cluster_min_points = 2;
    AssociationOptions association{};
    bool beam_compensation = true;
    double spread_floor_db = 30.0;
};

struct PipelineResult
{
    MonoScan scan1;
    MonoScan scan2;
    Cir bistatic;
    std::vector<Mpc> mpcs1;
    std::vector<Mpc> mpcs2;
    std::vector<ScattererPoint> points;
    std::vector<Cluster> clusters;
    BistaticMpcs comm;
    std::vector<Association> associations;
    RcsResult rcs;
    SpreadStats spreads1;
    SpreadStats spreads2;
    double bistatic_delay_spread_s = 0.0;
};

// RMS delay spread of a single CIR, taps more than floor_db below its peak excluded.
inline double cir_delay_spread(const Cir &cir, double floor_db)
{
    double peak = 0.0;
    for (const auto &t : cir.taps)
        peak = std::max(peak, std::norm(t));
    if (!(peak > 0.0))
        throw DomainError("cir_delay_spread: all-zero CIR");
    const double cut = peak * db2pow(-floor_db);
    std::vector<WeightedSample> prof;
    for (std::size_t i = 0; i < cir.size(); ++i)
        if (std::norm(cir.taps[i]) >= cut)
            prof.push_back({cir.delay_of(static_cast<double>(i)), std::norm(cir.taps[i])});
    return rms_delay_spread(prof);
}

inline PipelineResult run_pipeline(const Scene &scene, const SounderConfig &cfg, const PipelineParams &prm,
                                   std::uint64_t seed)
{
    scene.validate_bistatic(cfg, 1e-6);
    PipelineResult r;
    r.scan1 = scan_monostatic(scene, Node::mono1, cfg, seed);
    r.scan2 = scan_monostatic(scene, Node::mono2, cfg, seed);
    r.bistatic = sound_bistatic(scene, cfg, seed);

    r.mpcs1 = extract_mpcs(r.scan1.cirs, prm.sensing_gates);
    r.mpcs2 = extract_mpcs(r.scan2.cirs, prm.sensing_gates);
    r.points = backproject_mpcs(Node::mono1, scene.mono1_pos, r.mpcs1);
    const auto p2 = backproject_mpcs(Node::mono2, scene.mono2_pos, r.mpcs2);
    r.points.insert(r.points.end(), p2.begin(), p2.end());
    r.clusters = cluster_scatterers(r.points, prm.cluster_eps_m, prm.cluster_min_points);

    r.comm = extract_bistatic(r.bistatic, prm.comm_gates);
    const double d_los = scene.baseline_m();
    r.associations =
        associate_mpcs(r.comm.echoes, r.clusters, scene.mono1_pos, scene.mono2_pos, d_los, prm.association);
    RcsOptions ro;
    ro.beam_compensation = prm.beam_compensation;
    ro.hpbw_comm_tx_deg = cfg.hpbw_comm_tx_deg;
    ro.hpbw_comm_rx_deg = cfg.hpbw_comm_rx_deg;
    r.rcs = rcs_from_associations(r.comm, r.associations, r.clusters, scene.mono1_pos, scene.mono2_pos, d_los, ro);

    r.spreads1 = spread_statistics(r.scan1.padp, prm.spread_floor_db);
    r.spreads2 = spread_statistics(r.scan2.padp, prm.spread_floor_db);
    r.bistatic_delay_spread_s = cir_delay_spread(r.bistatic, prm.spread_floor_db);
    return r;
}

// ------------------------------------------------------------------------
// Ground truth

struct TruthPoint
{
    std::string label;
    Vec2 position;
    double rcs_dbsm = 0.0;
};

// Every point the forward model reflects from: scatterer positions plus the
// monostatic and bistatic specular points of each wall.
inline std::vector<TruthPoint> truth_points(const Scene &scene)
{
    std::vector<TruthPoint> out;
    for (const auto &s : scene.scatterers)
        out.push_back({s.label, s.position, s.rcs_dbsm});
    for (const auto &w : scene.walls)
    {
        for (Node n : {Node::mono1, Node::mono2})
            if (auto q = geometry::monostatic_specular_point(w, scene.position(n)))
                out.push_back({w.label, *q, w.rcs_dbsm});
        if (auto q = geometry::specular_point(w, scene.mono1_pos, scene.mono2_pos))
            out.push_back({w.label, *q, w.rcs_dbsm});
    }
    return out;
}

struct TruthMatch
{
    std::string label;
    double distance_m = std::numeric_limits<double>::infinity();
    double rcs_dbsm = 0.0;
};

inline TruthMatch nearest_truth(const Scene &scene, const Vec2 &p)
{
    TruthMatch best;
    for (const auto &t : truth_points(scene))
        if (const double d = distance(t.position, p); d < best.distance_m)
            best = {t.label, d, t.rcs_dbsm};
    return best;
}

// Label of the forward-model bistatic path closest in excess delay.
inline TruthMatch nearest_bistatic_path(const Scene &scene, const SounderConfig &cfg, double excess_delay_s)
{
    TruthMatch best;
    const double los = scene.baseline_m() / kSpeedOfLight;
    SounderConfig c = cfg;
    c.d_los_m = scene.baseline_m();
    for (const auto &p : enumerate_paths_bi(scene, c))
    {
        if (p.origin != PathOrigin::scatterer)
            continue;
        const double d = std::abs(p.delay_s - los - excess_delay_s);
        if (d < best.distance_m)
        {
            best.label = p.label;
            best.distance_m = d;
            for (const auto &t : truth_points(scene))
                if (t.label == p.label)
                    best.rcs_dbsm = t.rcs_dbsm;
        }
    }
    return best;
}

} // namespace isacgeo
