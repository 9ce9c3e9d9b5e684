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

#include <isacgeo/geo.hpp>

#include <algorithm>
#include <random>

using namespace isacgeo;

namespace
{
const Vec2 kTx{0.0, 0.0}, kRx{4.0, 0.0};

ScattererPoint pt(double x, double y, double power = -30.0, Node src = Node::mono1)
{
    ScattererPoint p;
    p.position = {x, y};
    p.source = src;
    p.power_db = power;
    p.range_m = distance(p.position, src == Node::mono1 ? kTx : kRx);
    return p;
}

Mpc echo(double excess_s, double power = -40.0)
{
    Mpc m;
    m.excess_delay_s = excess_s;
    m.power_db = power;
    m.range_m = kSpeedOfLight * excess_s;
    return m;
}

// Plate at path sum 4.681 m and the back-projected wall point, as in the room layout.
std::vector<Cluster> plate_and_wall()
{
    Cluster plate, wall;
    plate.label = "C1";
    plate.members = {pt(2.0, -1.2158, -25.0)};
    plate.centroid = plate.members[0].position;
    wall.label = "C2";
    wall.members = {pt(2.1, -3.0, -32.0)};
    wall.centroid = wall.members[0].position;
    return {plate, wall};
}

WallSegment room_wall() { return {{0.5027, -4.1185}, {4.5001, -1.3194}, 0.76, "wall"}; }
} // namespace

TEST_CASE("back-projection examples")
{
    const Vec2 a = backproject(Node::mono1, {0, 0}, 0.0, 3.0);
    CHECK_THAT(a.x, WithinAbs(3.0, 1e-15));
    CHECK_THAT(a.y, WithinAbs(0.0, 1e-15));
    const Vec2 b = backproject(Node::mono2, {4, 0}, 0.0, 1.0);
    CHECK_THAT(b.x, WithinAbs(3.0, 1e-15));
    CHECK_THAT(b.y, WithinAbs(0.0, 1e-15));
    const Vec2 c = backproject(Node::mono1, {0, 0}, 55.0, 3.662);
    CHECK_THAT(c.x, WithinAbs(2.100, 0.001));
    CHECK_THAT(c.y, WithinAbs(-3.000, 0.001));
    CHECK_THROWS_AS(backproject(Node::mono1, {0, 0}, 0.0, -1.0), DomainError);
}

TEST_CASE("back-projection is an isometry in range and inverts the look angle")
{
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> ua(-60.0, 60.0), ur(0.0, 8.0), up(-5.0, 5.0);
    for (int i = 0; i < 1000; ++i)
    {
        const Node n = i % 2 ? Node::mono1 : Node::mono2;
        const Vec2 pos{up(rng), up(rng)};
        const double th = ua(rng), r = ur(rng);
        const Vec2 m = backproject(n, pos, th, r);
        CHECK_THAT(distance(m, pos), WithinAbs(r, 1e-12));
        if (r > 1e-3)
            CHECK_THAT(look_angle_deg(n, pos, m), WithinAbs(th, 1e-9));
    }
}

TEST_CASE("backproject_mpcs keeps the MPC attributes")
{
    Mpc m;
    m.steering_deg = 10.0;
    m.range_m = 2.0;
    m.power_db = -33.0;
    const auto p = backproject_mpcs(Node::mono2, kRx, std::vector<Mpc>{m});
    REQUIRE(p.size() == 1);
    CHECK(p[0].source == Node::mono2);
    CHECK(p[0].steering_deg == 10.0);
    CHECK(p[0].range_m == 2.0);
    CHECK(p[0].power_db == -33.0);
    CHECK(p[0].position == backproject(Node::mono2, kRx, 10.0, 2.0));
}

TEST_CASE("clustering examples")
{
    const auto one = cluster_scatterers({pt(1.0, 1.0), pt(1.1, 1.0)}, 0.3, 2);
    REQUIRE(one.size() == 1);
    CHECK_THAT(one[0].centroid.x, WithinAbs(1.05, 1e-15));
    CHECK(one[0].label == "C1");
    CHECK(cluster_scatterers({pt(1.0, 1.0), pt(2.0, 1.0)}, 0.3, 2).empty());
    CHECK(cluster_scatterers({pt(1.0, 1.0), pt(2.0, 1.0)}, 0.3, 1).size() == 2);
    // Chains join transitively.
    CHECK(cluster_scatterers({pt(0, 0), pt(0.25, 0), pt(0.5, 0), pt(0.75, 0)}, 0.3, 2).size() == 1);
    CHECK(cluster_scatterers({}, 0.3, 2).empty());
    CHECK_THROWS_AS(cluster_scatterers({}, 0.0, 2), DomainError);
    CHECK_THROWS_AS(cluster_scatterers({}, 0.3, 0), DomainError);
}

TEST_CASE("five blobs give five clusters")
{
    std::mt19937_64 rng(77);
    std::normal_distribution<double> jitter(0.0, 0.05);
    std::uniform_real_distribution<double> up(-40.0, -20.0);
    const std::vector<Vec2> centers{{0, 0}, {1.5, 0}, {3, 0}, {0, 1.5}, {1.5, 1.5}};
    for (int trial = 0; trial < 20; ++trial)
    {
        std::vector<ScattererPoint> pts;
        for (const auto &c : centers)
            for (int k = 0; k < 4; ++k)
                pts.push_back(pt(c.x + jitter(rng), c.y + jitter(rng), up(rng)));
        const auto cl = cluster_scatterers(pts, 0.4, 2);
        REQUIRE(cl.size() == 5);
        for (std::size_t i = 0; i < cl.size(); ++i)
        {
            double best = 1e9;
            for (const auto &c : centers)
                best = std::min(best, distance(c, cl[i].centroid));
            CHECK(best < 0.05 * 2);
            CHECK(cl[i].members.size() == 4);
            if (i > 0)
                CHECK(cl[i].total_power() <= cl[i - 1].total_power());
        }
    }
}

TEST_CASE("clustering is permutation invariant")
{
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> ux(0.0, 4.0), up(-50.0, -20.0);
    for (int trial = 0; trial < 20; ++trial)
    {
        std::vector<ScattererPoint> pts;
        for (int k = 0; k < 40; ++k)
            pts.push_back(pt(ux(rng), ux(rng), up(rng), k % 2 ? Node::mono1 : Node::mono2));
        const auto ref = cluster_scatterers(pts, 0.35, 2);
        std::shuffle(pts.begin(), pts.end(), rng);
        const auto again = cluster_scatterers(pts, 0.35, 2);
        REQUIRE(ref.size() == again.size());
        for (std::size_t i = 0; i < ref.size(); ++i)
        {
            CHECK(ref[i].label == again[i].label);
            CHECK(ref[i].members == again[i].members);
            CHECK(ref[i].centroid == again[i].centroid);
        }
    }
}

TEST_CASE("predicted bistatic excess delay")
{
    CHECK(predict_bistatic_excess_delay({1.3, 0.0}, kTx, kRx, 4.0) == 0.0);
    CHECK_THAT(predict_bistatic_excess_delay({2.1, -3.0}, kTx, kRx, 4.0) * 1e9, WithinAbs(10.71, 0.01));
    const double a = 7.066 / 2.0, b = std::sqrt(a * a - 4.0);
    CHECK_THAT(predict_bistatic_excess_delay({2.0, -b}, kTx, kRx, 4.0) * 1e9, WithinAbs(10.23, 0.005));
    CHECK_THROWS_AS(predict_bistatic_excess_delay({2.0, -1.0}, kTx, kRx, 4.1), ConfigError);

    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-6.0, 6.0);
    for (int i = 0; i < 200; ++i)
    {
        const Vec2 m{u(rng), u(rng)};
        CHECK(predict_bistatic_excess_delay(m, kTx, kRx, 4.0) >= 0.0);
    }
}

TEST_CASE("association of the two bistatic echoes")
{
    const auto cl = plate_and_wall();
    const std::vector<Mpc> comm{echo(2.27e-9), echo(10.22e-9)};
    const auto a = associate_mpcs(comm, cl, kTx, kRx, 4.0);
    REQUIRE(a.size() == 2);
    CHECK(a[0].cluster_label == "C1");
    CHECK(a[1].cluster_label == "C2");
    for (const auto &x : a)
        CHECK_THAT(x.residual_s, WithinAbs(x.measured_excess_delay_s - x.predicted_excess_delay_s, 1e-24));
    CHECK(std::abs(a[0].residual_s) < 0.01e-9);

    // Point-only association still picks the wall for S2 within the 1 ns tolerance.
    AssociationOptions po;
    po.plane_candidates = false;
    const auto b = associate_mpcs(comm, cl, kTx, kRx, 4.0, po);
    CHECK(b[1].cluster_label == "C2");
    CHECK(b[1].model == ReflectionModel::point);
    CHECK_THAT(b[1].predicted_excess_delay_s * 1e9, WithinAbs(10.71, 0.01));

    // A plane candidate never does worse than the point alone.
    CHECK(std::abs(a[1].residual_s) <= std::abs(b[1].residual_s));

    const auto none = associate_mpcs(comm, std::vector<Cluster>{}, kTx, kRx, 4.0);
    REQUIRE(none.size() == 2);
    CHECK_FALSE(none[0].matched());
    CHECK_FALSE(none[1].matched());

    // Far beyond any cluster: unmatched.
    CHECK_FALSE(associate_mpcs(std::vector<Mpc>{echo(40e-9)}, cl, kTx, kRx, 4.0)[0].matched());
    // LoS row is skipped.
    CHECK(associate_mpcs(std::vector<Mpc>{echo(0.0)}, cl, kTx, kRx, 4.0).empty());

    CHECK_THROWS_AS(associate_mpcs(comm, cl, kTx, kRx, 4.2), ConfigError);
    AssociationOptions bad;
    bad.tol_s = 0.0;
    CHECK_THROWS_AS(associate_mpcs(comm, cl, kTx, kRx, 4.0, bad), DomainError);
}

TEST_CASE("association ignores echo power")
{
    const auto cl = plate_and_wall();
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> ud(0.5e-9, 15e-9), ug(-40.0, 40.0);
    for (int trial = 0; trial < 50; ++trial)
    {
        std::vector<Mpc> comm{echo(ud(rng)), echo(ud(rng)), echo(ud(rng))};
        const auto a = associate_mpcs(comm, cl, kTx, kRx, 4.0);
        const double g = ug(rng);
        for (auto &m : comm)
            m.power_db += g;
        const auto b = associate_mpcs(comm, cl, kTx, kRx, 4.0);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i)
        {
            CHECK(a[i].cluster_label == b[i].cluster_label);
            CHECK(a[i].model == b[i].model);
        }
    }
}

TEST_CASE("tangent-plane specular point")
{
    // A wall member seen by mono1 at its perpendicular foot: the tangent plane is the wall.
    const WallSegment w{{-1.0, -3.0}, {5.0, -3.0}, 0.0, "wall"};
    ScattererPoint m = pt(0.0, -3.0, -30.0, Node::mono1);
    const auto s = tangent_plane_specular(m, kTx, kTx, kRx);
    REQUIRE(s);
    CHECK_THAT(s->x, WithinAbs(2.0, 1e-12));
    CHECK_THAT(s->y, WithinAbs(-3.0, 1e-12));
    CHECK_THAT(predict_bistatic_excess_delay(*s, kTx, kRx, 4.0),
               WithinAbs((2.0 * std::sqrt(4.0 + 9.0) - 4.0) / kSpeedOfLight, 1e-20));

    // Slanted wall: the candidate from mono1's foot point matches the wall's specular point.
    const auto rw = room_wall();
    const Vec2 d = (rw.endpoint_b - rw.endpoint_a) / distance(rw.endpoint_a, rw.endpoint_b);
    const Vec2 foot = rw.endpoint_a + d * (kTx - rw.endpoint_a).dot(d);
    const auto s2 = tangent_plane_specular(pt(foot.x, foot.y), kTx, kTx, kRx);
    REQUIRE(s2);
    CHECK(distance(*s2, rw.endpoint_a) + distance(*s2, rw.endpoint_b) -
              distance(rw.endpoint_a, rw.endpoint_b) <
          1e-9);
    // Mirror law: equal angles to the wall direction.
    CHECK_THAT(std::abs((kTx - *s2).dot(d)) / distance(kTx, *s2),
               WithinAbs(std::abs((kRx - *s2).dot(d)) / distance(kRx, *s2), 1e-9));

    // Nodes straddling the plane: no candidate.
    CHECK_FALSE(tangent_plane_specular(pt(2.0, 0.5), {2.0, 2.0}, kTx, {4.0, 3.0}).has_value());
}

TEST_CASE("geometry validation")
{
    SECTION("consistent construction")
    {
        const auto w = room_wall();
        const Vec2 q = w.endpoint_a + (w.endpoint_b - w.endpoint_a) * 0.43;
        const std::vector<Curve> curves{Circle{kTx, distance(q, kTx)}, Circle{kRx, distance(q, kRx)},
                                        Ellipse{kTx, kRx, distance(q, kTx) + distance(q, kRx)}};
        const auto r = validate_geometry(curves, w);
        REQUIRE(r.intersects);
        CHECK(r.max_gap_m < 1e-6);
        CHECK(r.reference_error_m < 1e-6);
        CHECK(distance(r.mean_point, q) < 1e-6);
        CHECK(r.pairs.size() == 3);
    }
    SECTION("published radii against the room wall")
    {
        const std::vector<Curve> curves{Circle{kTx, 3.662}, Circle{kRx, 3.407}, Ellipse{kTx, kRx, 7.066}};
        const auto r = validate_geometry(curves, room_wall());
        REQUIRE(r.intersects);
        CHECK(r.reference_error_m < 0.05);
        CHECK(r.max_gap_m < 0.01);
        CHECK(r.mean_point.y < 0.0);

        const std::vector<Curve> bumped{Circle{kTx, 3.762}, Circle{kRx, 3.407}, Ellipse{kTx, kRx, 7.066}};
        const auto rb = validate_geometry(bumped, room_wall());
        REQUIRE(rb.intersects);
        CHECK(rb.max_gap_m - r.max_gap_m >= 0.05);
    }
    SECTION("curves that never meet")
    {
        const std::vector<Curve> curves{Circle{{0, 0}, 1.0}, Circle{{10, 0}, 1.0}};
        const auto r = validate_geometry(curves, Vec2{0, 0});
        CHECK_FALSE(r.intersects);
        CHECK(std::isnan(r.reference_error_m));
    }
    SECTION("point reference and errors")
    {
        const std::vector<Curve> curves{Circle{{0, 0}, 2.0}, Circle{{2, 0}, 2.0}};
        const auto r = validate_geometry(curves, Vec2{1.0, std::sqrt(3.0)});
        REQUIRE(r.intersects);
        CHECK(r.reference_error_m < 1e-6);
        const std::vector<Curve> single{Circle{{0, 0}, 2.0}};
        CHECK_THROWS_AS(validate_geometry(single, Vec2{}), DomainError);
    }
}

TEST_CASE("curve sampling")
{
    const auto c = sample_curve(Circle{{1, 2}, 3.0}, 0.0005);
    for (std::size_t i = 1; i < c.size(); ++i)
        CHECK(distance(c[i], c[i - 1]) <= 0.0005 + 1e-12);
    for (const auto &p : c)
        CHECK_THAT(distance(p, {1, 2}), WithinAbs(3.0, 1e-12));
    const auto e = sample_curve(Ellipse{kTx, kRx, 7.066}, 0.0005);
    for (std::size_t i = 1; i < e.size(); ++i)
        CHECK(distance(e[i], e[i - 1]) <= 0.0005 + 1e-12);
    for (const auto &p : e)
        CHECK_THAT(distance(p, kTx) + distance(p, kRx), WithinAbs(7.066, 1e-12));
}
