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

#include "catch.hpp"

#include <isacgeo/io.hpp>
#include <isacgeo/pipeline.hpp>

#include <set>

using namespace isacgeo;

namespace
{
io::RunDocument shipped() { return io::read_document(std::string(ISACGEO_SCENE_DIR) + "/scene.json"); }
} // namespace

TEST_CASE("shipped scene: noiseless end to end")
{
    const auto doc = shipped();
    const auto r = run_pipeline(doc.scene, doc.sounder, PipelineParams{}, 7);

    // One cluster per reflector, each near a distinct ground-truth point.
    REQUIRE(r.clusters.size() == 5);
    std::set<std::string> seen;
    for (const auto &c : r.clusters)
    {
        const auto t = nearest_truth(doc.scene, c.centroid);
        CHECK(t.distance_m < 0.15);
        seen.insert(t.label);
    }
    CHECK(seen.size() == 5);

    // Plate, wall and cylinder echoes reach the bistatic receiver and are all associated.
    REQUIRE(r.comm.echoes.size() == 3);
    REQUIRE(r.associations.size() == 3);
    for (const auto &a : r.associations)
    {
        REQUIRE(a.matched());
        CHECK(std::abs(a.residual_s) < PipelineParams{}.association.tol_s);
        const auto path = nearest_bistatic_path(doc.scene, doc.sounder, a.measured_excess_delay_s);
        const auto it = std::find_if(r.clusters.begin(), r.clusters.end(),
                                     [&](const Cluster &c) { return c.label == a.cluster_label; });
        REQUIRE(it != r.clusters.end());
        CHECK(nearest_truth(doc.scene, it->centroid).label == path.label);
    }

    REQUIRE(r.rcs.estimates.size() == 3);
    CHECK(r.rcs.warnings.empty());
    for (const auto &e : r.rcs.estimates)
    {
        const auto t = nearest_bistatic_path(doc.scene, doc.sounder, e.excess_delay_s);
        CHECK_THAT(e.sigma_dbsm, WithinAbs(t.rcs_dbsm, 0.5));
        CHECK(e.r_t_m + e.r_r_m == Approx(e.d_bi_m).epsilon(1e-12));
    }

    // Spreads are well formed.
    for (const auto *st : {&r.spreads1, &r.spreads2})
    {
        CHECK(st->per_angle_delay_spread.size() == 25);
        for (const auto &[a, s] : st->per_angle_delay_spread)
            CHECK(s >= 0.0);
        for (std::size_t i = 1; i < st->delay_cdf.size(); ++i)
            CHECK(st->delay_cdf[i].probability >= st->delay_cdf[i - 1].probability);
        CHECK(st->delay_cdf.back().probability == 1.0);
    }
    CHECK(r.bistatic_delay_spread_s > 0.0);
}

TEST_CASE("shipped scene: deterministic for a fixed seed")
{
    auto doc = shipped();
    doc.sounder.noise_floor_db = -66.0;
    const auto a = run_pipeline(doc.scene, doc.sounder, PipelineParams{}, 11);
    const auto b = run_pipeline(doc.scene, doc.sounder, PipelineParams{}, 11);
    CHECK(a.scan1.padp.power_db == b.scan1.padp.power_db);
    CHECK(a.bistatic.taps == b.bistatic.taps);
    REQUIRE(a.rcs.estimates.size() == b.rcs.estimates.size());
    for (std::size_t i = 0; i < a.rcs.estimates.size(); ++i)
        CHECK(a.rcs.estimates[i].sigma_dbsm == b.rcs.estimates[i].sigma_dbsm);
    const auto c = run_pipeline(doc.scene, doc.sounder, PipelineParams{}, 12);
    CHECK(a.bistatic.taps != c.bistatic.taps);
}

TEST_CASE("ground-truth helpers")
{
    const auto doc = shipped();
    const auto pts = truth_points(doc.scene);
    // Four scatterers, the wall foot seen from mono1 (mono2's falls past the
    // segment end) and the bistatic specular point.
    CHECK(pts.size() == 6);
    const auto t = nearest_truth(doc.scene, {2.0, -1.2});
    CHECK(t.label == "plate");
    CHECK(t.rcs_dbsm == 8.73);
    const double plate_excess = (2.0 * std::hypot(2.0, 1.216) - 4.0) / kSpeedOfLight;
    const auto p = nearest_bistatic_path(doc.scene, doc.sounder, plate_excess);
    CHECK(p.label == "plate");
    CHECK(p.distance_m < 1e-15);
}
