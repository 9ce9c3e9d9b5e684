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

#include <sstream>

using namespace isacgeo;

namespace
{
io::CsvTable table(const std::string &text)
{
    std::istringstream in(text);
    return io::parse_csv(in);
}

io::RunDocument sample_document()
{
    io::RunDocument d;
    d.sounder.noise_floor_db = -70.0;
    d.sounder.hpbw_sensing_deg = 14.0;
    d.scene.mono2_pos = {4.0, 0.0};
    d.scene.scatterers.push_back({{2.0, -1.216}, 8.73, "plate"});
    d.scene.walls.push_back({{0.5, -4.1}, {4.5, -1.3}, 0.76, "wall"});
    return d;
}
} // namespace

TEST_CASE("number formatting")
{
    CHECK(io::fmt(1.5) == "1.5");
    CHECK(io::fmt(kNegInf) == "-inf");
    CHECK(io::fmt(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(io::fmt(std::nan("")) == "nan");
    CHECK(io::parse_double("-inf", "x") == kNegInf);
    CHECK(std::isnan(io::parse_double("nan", "x")));
    CHECK_THROWS_AS(io::parse_double("", "x"), ParseError);
    CHECK_THROWS_AS(io::parse_double("1.2abc", "x"), ParseError);
}

TEST_CASE("run document round trip")
{
    const auto d = sample_document();
    const auto j = io::to_json(d);
    CHECK(j["schema_version"] == 1);
    CHECK(io::document_from_json(j) == d);
    // Through text.
    CHECK(io::document_from_json(io::json::parse(j.dump())) == d);

    io::RunDocument quiet;
    const auto jq = io::to_json(quiet);
    CHECK(jq["sounder"]["noise_floor_db"].is_null());
    CHECK(io::document_from_json(jq).sounder.noise_floor_db == kNegInf);
}

TEST_CASE("run document rejects malformed input")
{
    auto j = io::to_json(sample_document());
    SECTION("schema version")
    {
        j["schema_version"] = 2;
        CHECK_THROWS_AS(io::document_from_json(j), ParseError);
        j.erase("schema_version");
        CHECK_THROWS_AS(io::document_from_json(j), ParseError);
    }
    SECTION("unknown keys")
    {
        j["sounder"]["bogus"] = 1;
        CHECK_THROWS_AS(io::document_from_json(j), ParseError);
    }
    SECTION("wrong types")
    {
        j["scene"]["scatterers"][0]["position"] = "here";
        CHECK_THROWS_AS(io::document_from_json(j), ParseError);
    }
    SECTION("missing file")
    {
        CHECK_THROWS_AS(io::read_document("/nonexistent/scene.json"), ParseError);
    }
}

TEST_CASE("shipped scene parses and validates")
{
    const auto d = io::read_document(std::string(ISACGEO_SCENE_DIR) + "/scene.json");
    CHECK_NOTHROW(d.sounder.validate());
    CHECK_NOTHROW(d.scene.validate_bistatic(d.sounder, 1e-6));
    CHECK(d.scene.scatterers.size() == 4);
    CHECK(d.scene.walls.size() == 1);
    CHECK(d.sounder.num_taps == 128);
}

TEST_CASE("CSV parsing")
{
    const auto t = table("# a comment\n# another\nx, y\n1, 2\n\n3,4\n");
    CHECK(t.comments.size() == 2);
    CHECK(t.header == std::vector<std::string>{"x", "y"});
    REQUIRE(t.rows.size() == 2);
    CHECK(t.number(1, t.column("y")) == 4.0);
    CHECK_THROWS_AS(t.column("z"), ParseError);
    CHECK_THROWS_AS(table("x,y\n1\n"), ParseError);
    CHECK_THROWS_AS(table("x\nabc\n").number(0, 0), ParseError);
}

TEST_CASE("CIR CSV round trip")
{
    const SounderConfig cfg;
    Scene s;
    s.scatterers.push_back({{2.0, -1.0}, 0.0, "a"});
    const auto scan = scan_monostatic(s, Node::mono2, cfg, 4);
    for (const Cir &c : {scan.cirs[3], sound_bistatic(s, cfg, 4)})
    {
        const Cir back = io::cir_from_csv(table(io::cir_to_csv(c)));
        CHECK(back.kind == c.kind);
        CHECK(back.steering_deg == c.steering_deg);
        CHECK(back.tap_spacing_s == Approx(c.tap_spacing_s).epsilon(1e-9));
        REQUIRE(back.size() == c.size());
        for (std::size_t i = 0; i < c.size(); ++i)
            CHECK(std::abs(back.taps[i] - c.taps[i]) <= 1e-8 * std::abs(c.taps[i]) + 1e-300);
    }
    CHECK_THROWS_AS(io::cir_from_csv(table("tap_index,real,imag\n0,1,0\n")), ParseError);
    CHECK_THROWS_AS(
        io::cir_from_csv(table("# tap_spacing_s=1e-9 delay_offset_s=0 kind=bistatic\ntap_index,real,imag\n0,1,0\n0,2,0\n")),
        ParseError);
}

TEST_CASE("PADP CSV")
{
    const SounderConfig cfg;
    Scene s;
    s.scatterers.push_back({{2.0, -1.0}, 0.0, "a"});
    const auto p = scan_monostatic(s, Node::mono1, cfg, 4).padp;
    const std::string text = io::padp_to_csv(p);
    const auto t = table(text);
    CHECK(t.header.size() == 129);
    CHECK(t.rows.size() == 25);
    CHECK(t.header[0] == "angle_deg/delay_ns");
    const Padp back = io::padp_from_csv(t);
    CHECK(back.angles_deg == p.angles_deg);
    REQUIRE(back.power_db.size() == p.power_db.size());
    for (std::size_t i = 0; i < p.power_db.size(); ++i)
        CHECK(back.power_db[i] == Approx(p.power_db[i]).epsilon(1e-8));
    CHECK_THROWS_AS(io::padp_from_csv(table("angle,1\n0,0\n")), ParseError);
}

TEST_CASE("MPC, point, cluster and association tables")
{
    Scene s;
    s.scatterers.push_back({{2.0, -1.216}, 8.73, "plate"});
    s.walls.push_back({{0.5027, -4.1185}, {4.5001, -1.3194}, 0.76, "wall"});
    const auto r = run_pipeline(s, SounderConfig{}, PipelineParams{}, 2);

    const auto mp = io::mpcs_from_csv(table(io::mpcs_to_csv(r.mpcs1)));
    REQUIRE(mp.size() == r.mpcs1.size());
    for (std::size_t i = 0; i < mp.size(); ++i)
    {
        CHECK(mp[i].steering_deg == r.mpcs1[i].steering_deg);
        CHECK(mp[i].excess_delay_s == Approx(r.mpcs1[i].excess_delay_s).epsilon(1e-8));
    }

    const auto pts = io::points_from_csv(table(io::points_to_csv(r.points, r.clusters)));
    REQUIRE(pts.points.size() == r.points.size());
    const auto cl = io::clusters_from_points(pts);
    REQUIRE(cl.size() == r.clusters.size());
    for (std::size_t i = 0; i < cl.size(); ++i)
    {
        CHECK(cl[i].label == r.clusters[i].label);
        CHECK(cl[i].members.size() == r.clusters[i].members.size());
        CHECK(distance(cl[i].centroid, r.clusters[i].centroid) < 1e-7);
    }

    const auto ct = table(io::clusters_to_csv(r.clusters));
    CHECK(ct.header == std::vector<std::string>{"label", "x_m", "y_m", "members", "total_power_db"});
    CHECK(ct.rows.size() == r.clusters.size());

    const auto as = io::associations_from_csv(table(io::associations_to_csv(r.associations)));
    REQUIRE(as.size() == r.associations.size());
    for (std::size_t i = 0; i < as.size(); ++i)
    {
        CHECK(as[i].cluster_label == r.associations[i].cluster_label);
        CHECK(as[i].model == r.associations[i].model);
    }

    const auto rt = table(io::rcs_to_csv(r.rcs.estimates));
    CHECK(rt.header == std::vector<std::string>{"label", "d_bi_m", "r_t_m", "r_r_m", "delta_p_db", "sigma_dbsm",
                                                "beam_comp_db"});
    CHECK(rt.rows.size() == r.rcs.estimates.size());
}

TEST_CASE("empty scatter map is header only")
{
    CHECK(io::points_to_csv({}, {}) == "source,angle_deg,range_m,power_db,x_m,y_m,cluster\n");
    CHECK(io::clusters_to_csv({}) == "label,x_m,y_m,members,total_power_db\n");
    CHECK(io::clusters_from_points(io::points_from_csv(table(io::points_to_csv({}, {})))).empty());
}

TEST_CASE("CDF export")
{
    const auto c = empirical_cdf({2.0, 1.0, 3.0});
    const auto t = table(io::cdf_to_csv(c));
    CHECK(t.header == std::vector<std::string>{"value", "probability"});
    REQUIRE(t.rows.size() == 3);
    CHECK(t.number(0, 1) == Approx(1.0 / 3.0));
    CHECK(t.number(2, 1) == 1.0);
}

TEST_CASE("manifest round trip")
{
    io::RunManifest m;
    m.subcommand = "report";
    m.inputs = {{"scene", "scenes/room/scene.json"}};
    m.parameters = {{"eps_m", 0.4}, {"kmax", 4}};
    m.seed = 7;
    m.output_dir = "out";
    m.outputs = {"a.csv", "b.csv"};
    const auto back = io::manifest_from_json(io::json::parse(io::manifest_text(m)));
    CHECK(back == m);
    auto j = io::to_json(m);
    j["schema_version"] = 9;
    CHECK_THROWS_AS(io::manifest_from_json(j), ParseError);
    j.erase("schema_version");
    CHECK_THROWS_AS(io::manifest_from_json(j), ParseError);
}
