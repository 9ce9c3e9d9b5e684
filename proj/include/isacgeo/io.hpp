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

// Serialization: the JSON run document (sounder + scene), CSV tables for
// every pipeline artifact, and the per-directory run manifest.
//
// CSV numbers are printed with 9 significant digits so reruns are
// byte-identical; -inf and nan are spelled that way.

#pragma once

#include "extract.hpp"
#include "geo.hpp"
#include "model.hpp"
#include "rcs.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace isacgeo::io
{

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// ------------------------------------------------------------------------
// Numbers

inline std::string fmt(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

inline double parse_double(const std::string &s, const std::string &where)
{
    const char *b = s.c_str();
    char *e = nullptr;
    const double v = std::strtod(b, &e);
    if (s.empty() || e == b || *e != '\0')
        throw ParseError(where + ": '" + s + "' is not a number");
    return v;
}

// ------------------------------------------------------------------------
// JSON run document

namespace detail
{
inline json vec_to_json(const Vec2 &v) { return json::array({v.x, v.y}); }

inline Vec2 vec_from_json(const json &j, const std::string &what)
{
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ParseError(what + ": expected [x, y]");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline void check_keys(const json &j, std::initializer_list<const char *> allowed, const std::string &what)
{
    if (!j.is_object())
        throw ParseError(what + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it)
    {
        bool ok = false;
        for (const char *k : allowed)
            ok = ok || it.key() == k;
        if (!ok)
            throw ParseError(what + ": unknown key '" + it.key() + "'");
    }
}

inline double num(const json &j, const char *key, double fallback, const std::string &what)
{
    if (!j.contains(key))
        return fallback;
    const auto &v = j.at(key);
    if (!v.is_number())
        throw ParseError(what + "." + key + ": expected a number");
    return v.get<double>();
}
} // namespace detail

inline json to_json(const SounderConfig &c)
{
    json j;
    j["carrier_frequency_hz"] = c.carrier_frequency_hz;
    j["bandwidth_hz"] = c.bandwidth_hz;
    j["num_taps"] = c.num_taps;
    j["d_los_m"] = c.d_los_m;
    j["angle_grid_deg"] = c.angle_grid_deg;
    j["hpbw_sensing_deg"] = c.hpbw_sensing_deg;
    j["hpbw_comm_tx_deg"] = c.hpbw_comm_tx_deg;
    j["hpbw_comm_rx_deg"] = c.hpbw_comm_rx_deg;
    j["tx_power_db"] = c.tx_power_db;
    j["noise_floor_db"] = c.noise_floor_db == kNegInf ? json(nullptr) : json(c.noise_floor_db);
    return j;
}

inline SounderConfig sounder_from_json(const json &j)
{
    const std::string w = "sounder";
    detail::check_keys(j,
                       {"carrier_frequency_hz", "bandwidth_hz", "num_taps", "d_los_m", "angle_grid_deg",
                        "hpbw_sensing_deg", "hpbw_comm_tx_deg", "hpbw_comm_rx_deg", "tx_power_db", "noise_floor_db"},
                       w);
    SounderConfig c;
    c.carrier_frequency_hz = detail::num(j, "carrier_frequency_hz", c.carrier_frequency_hz, w);
    c.bandwidth_hz = detail::num(j, "bandwidth_hz", c.bandwidth_hz, w);
    if (j.contains("num_taps"))
    {
        if (!j["num_taps"].is_number_unsigned())
            throw ParseError("sounder.num_taps: expected a positive integer");
        c.num_taps = j["num_taps"].get<std::size_t>();
    }
    c.d_los_m = detail::num(j, "d_los_m", c.d_los_m, w);
    if (j.contains("angle_grid_deg"))
    {
        const auto &g = j["angle_grid_deg"];
        if (!g.is_array())
            throw ParseError("sounder.angle_grid_deg: expected a list");
        c.angle_grid_deg.clear();
        for (const auto &v : g)
        {
            if (!v.is_number())
                throw ParseError("sounder.angle_grid_deg: expected numbers");
            c.angle_grid_deg.push_back(v.get<double>());
        }
    }
    c.hpbw_sensing_deg = detail::num(j, "hpbw_sensing_deg", c.hpbw_sensing_deg, w);
    c.hpbw_comm_tx_deg = detail::num(j, "hpbw_comm_tx_deg", c.hpbw_comm_tx_deg, w);
    c.hpbw_comm_rx_deg = detail::num(j, "hpbw_comm_rx_deg", c.hpbw_comm_rx_deg, w);
    c.tx_power_db = detail::num(j, "tx_power_db", c.tx_power_db, w);
    if (j.contains("noise_floor_db") && !j["noise_floor_db"].is_null())
        c.noise_floor_db = detail::num(j, "noise_floor_db", 0.0, w);
    c.validate();
    return c;
}

inline json to_json(const Scene &s)
{
    json j;
    j["mono1_pos"] = detail::vec_to_json(s.mono1_pos);
    j["mono2_pos"] = detail::vec_to_json(s.mono2_pos);
    j["leakage_power_db"] = s.leakage_power_db;
    j["scatterers"] = json::array();
    for (const auto &p : s.scatterers)
        j["scatterers"].push_back(
            {{"label", p.label}, {"position", detail::vec_to_json(p.position)}, {"rcs_dbsm", p.rcs_dbsm}});
    j["walls"] = json::array();
    for (const auto &w : s.walls)
        j["walls"].push_back({{"label", w.label},
                              {"a", detail::vec_to_json(w.endpoint_a)},
                              {"b", detail::vec_to_json(w.endpoint_b)},
                              {"rcs_dbsm", w.rcs_dbsm}});
    return j;
}

inline Scene scene_from_json(const json &j)
{
    detail::check_keys(j, {"mono1_pos", "mono2_pos", "leakage_power_db", "scatterers", "walls"}, "scene");
    Scene s;
    if (j.contains("mono1_pos"))
        s.mono1_pos = detail::vec_from_json(j["mono1_pos"], "scene.mono1_pos");
    if (j.contains("mono2_pos"))
        s.mono2_pos = detail::vec_from_json(j["mono2_pos"], "scene.mono2_pos");
    s.leakage_power_db = detail::num(j, "leakage_power_db", s.leakage_power_db, "scene");
    if (j.contains("scatterers"))
        for (const auto &p : j["scatterers"])
        {
            detail::check_keys(p, {"label", "position", "rcs_dbsm"}, "scene.scatterers[]");
            PointScatterer ps;
            ps.label = p.value("label", std::string{});
            ps.position = detail::vec_from_json(p.at("position"), "scatterer position");
            ps.rcs_dbsm = detail::num(p, "rcs_dbsm", 0.0, "scatterer");
            s.scatterers.push_back(ps);
        }
    if (j.contains("walls"))
        for (const auto &w : j["walls"])
        {
            detail::check_keys(w, {"label", "a", "b", "rcs_dbsm"}, "scene.walls[]");
            WallSegment ws;
            ws.label = w.value("label", std::string{"wall"});
            ws.endpoint_a = detail::vec_from_json(w.at("a"), "wall endpoint a");
            ws.endpoint_b = detail::vec_from_json(w.at("b"), "wall endpoint b");
            ws.rcs_dbsm = detail::num(w, "rcs_dbsm", 0.0, "wall");
            s.walls.push_back(ws);
        }
    s.validate();
    return s;
}

struct RunDocument
{
    SounderConfig sounder;
    Scene scene;

    bool operator==(const RunDocument &) const = default;
};

inline json to_json(const RunDocument &d)
{
    return {{"schema_version", kSchemaVersion}, {"sounder", to_json(d.sounder)}, {"scene", to_json(d.scene)}};
}

inline RunDocument document_from_json(const json &j)
{
    detail::check_keys(j, {"schema_version", "sounder", "scene"}, "document");
    if (!j.contains("schema_version") || j["schema_version"] != kSchemaVersion)
        throw ParseError("document: schema_version must be " + std::to_string(kSchemaVersion));
    RunDocument d;
    if (j.contains("sounder"))
        d.sounder = sounder_from_json(j["sounder"]);
    if (j.contains("scene"))
        d.scene = scene_from_json(j["scene"]);
    return d;
}

inline json read_json_file(const std::filesystem::path &p)
{
    std::ifstream in(p);
    if (!in)
        throw ParseError("cannot open " + p.string());
    try
    {
        return json::parse(in);
    }
    catch (const json::exception &e)
    {
        throw ParseError(p.string() + ": " + e.what());
    }
}

inline RunDocument read_document(const std::filesystem::path &p)
{
    try
    {
        return document_from_json(read_json_file(p));
    }
    catch (const json::exception &e)
    {
        throw ParseError(p.string() + ": " + e.what());
    }
}

inline void write_text(const std::filesystem::path &p, const std::string &text)
{
    std::ofstream out(p, std::ios::binary);
    if (!out)
        throw ParseError("cannot write " + p.string());
    out << text;
}

// ------------------------------------------------------------------------
// CSV tables

struct CsvTable
{
    std::vector<std::string> comments; // without the leading '#'
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::string source = "csv";

    std::size_t column(const std::string &name) const
    {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name)
                return i;
        throw ParseError(source + ": missing column '" + name + "'");
    }

    double number(std::size_t row, std::size_t col) const
    {
        return parse_double(rows[row][col], source + " row " + std::to_string(row + 1));
    }
};

namespace detail
{
inline std::string trim(const std::string &s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string &line)
{
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ','))
        out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',')
        out.emplace_back();
    return out;
}

inline std::string join(const std::vector<std::string> &v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? "," : "") + v[i];
    return s;
}
} // namespace detail

inline CsvTable parse_csv(std::istream &in, const std::string &source = "csv")
{
    CsvTable t;
    t.source = source;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line))
    {
        const std::string s = detail::trim(line);
        if (s.empty())
            continue;
        if (s[0] == '#')
        {
            if (!have_header)
                t.comments.push_back(detail::trim(s.substr(1)));
            continue;
        }
        auto cells = detail::split(s);
        if (!have_header)
        {
            t.header = std::move(cells);
            have_header = true;
            continue;
        }
        if (cells.size() != t.header.size())
            throw ParseError(source + ": row " + std::to_string(t.rows.size() + 1) + " has " +
                             std::to_string(cells.size()) + " cells, header has " + std::to_string(t.header.size()));
        t.rows.push_back(std::move(cells));
    }
    if (!have_header)
        throw ParseError(source + ": missing header row");
    return t;
}

inline CsvTable read_csv(const std::filesystem::path &p)
{
    std::ifstream in(p);
    if (!in)
        throw ParseError("cannot open " + p.string());
    return parse_csv(in, p.string());
}

// CIR ----------------------------------------------------------------------

inline std::string cir_kind_string(const Cir &c)
{
    return c.kind == CirKind::bistatic ? "bistatic" : "monostatic:" + fmt(c.steering_deg);
}

inline std::string cir_to_csv(const Cir &c)
{
    std::string s = "# tap_spacing_s=" + fmt(c.tap_spacing_s) + " delay_offset_s=" + fmt(c.delay_offset_s) +
                    " kind=" + cir_kind_string(c) + "\n";
    s += "tap_index,real,imag\n";
    for (std::size_t i = 0; i < c.taps.size(); ++i)
        s += std::to_string(i) + "," + fmt(c.taps[i].real()) + "," + fmt(c.taps[i].imag()) + "\n";
    return s;
}

inline Cir cir_from_csv(const CsvTable &t)
{
    Cir c;
    std::map<std::string, std::string> meta;
    for (const auto &line : t.comments)
    {
        std::istringstream ss(line);
        std::string tok;
        while (ss >> tok)
            if (const auto eq = tok.find('='); eq != std::string::npos)
                meta[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    if (!meta.count("tap_spacing_s") || !meta.count("delay_offset_s") || !meta.count("kind"))
        throw ParseError(t.source + ": missing '# tap_spacing_s=.. delay_offset_s=.. kind=..' line");
    c.tap_spacing_s = parse_double(meta["tap_spacing_s"], t.source + " tap_spacing_s");
    c.delay_offset_s = parse_double(meta["delay_offset_s"], t.source + " delay_offset_s");
    const std::string kind = meta["kind"];
    if (kind == "bistatic")
        c.kind = CirKind::bistatic;
    else if (kind.rfind("monostatic:", 0) == 0)
    {
        c.kind = CirKind::monostatic;
        c.steering_deg = parse_double(kind.substr(11), t.source + " steering angle");
    }
    else
        throw ParseError(t.source + ": unknown CIR kind '" + kind + "'");
    if (!(c.tap_spacing_s > 0.0))
        throw ParseError(t.source + ": tap spacing must be positive");

    const std::size_t ci = t.column("tap_index"), cr = t.column("real"), cim = t.column("imag");
    c.taps.assign(t.rows.size(), {0.0, 0.0});
    std::vector<bool> seen(t.rows.size(), false);
    for (std::size_t r = 0; r < t.rows.size(); ++r)
    {
        const double idx = t.number(r, ci);
        if (idx < 0 || idx != std::floor(idx) || idx >= static_cast<double>(t.rows.size()) ||
            seen[static_cast<std::size_t>(idx)])
            throw ParseError(t.source + ": tap indices must be a permutation of 0..N-1");
        seen[static_cast<std::size_t>(idx)] = true;
        c.taps[static_cast<std::size_t>(idx)] = {t.number(r, cr), t.number(r, cim)};
    }
    return c;
}

// PADP ---------------------------------------------------------------------

inline std::string padp_to_csv(const Padp &p)
{
    p.validate();
    std::string s = "angle_deg/delay_ns";
    for (double d : p.delays_s)
        s += "," + fmt(d * 1e9);
    s += "\n";
    for (std::size_t a = 0; a < p.rows(); ++a)
    {
        s += fmt(p.angles_deg[a]);
        for (std::size_t d = 0; d < p.cols(); ++d)
            s += "," + fmt(p.at(a, d));
        s += "\n";
    }
    return s;
}

inline Padp padp_from_csv(const CsvTable &t)
{
    Padp p;
    if (t.header.empty() || t.header[0] != "angle_deg/delay_ns")
        throw ParseError(t.source + ": PADP header must start with 'angle_deg/delay_ns'");
    for (std::size_t i = 1; i < t.header.size(); ++i)
        p.delays_s.push_back(parse_double(t.header[i], t.source + " header") * 1e-9);
    for (std::size_t r = 0; r < t.rows.size(); ++r)
    {
        p.angles_deg.push_back(t.number(r, 0));
        for (std::size_t i = 1; i < t.header.size(); ++i)
            p.power_db.push_back(t.number(r, i));
    }
    return p;
}

// MPCs ---------------------------------------------------------------------

inline std::string mpcs_to_csv(std::span<const Mpc> mpcs)
{
    std::string s = "angle_deg,excess_delay_ns,power_db,range_m\n";
    for (const auto &m : mpcs)
        s += fmt(m.steering_deg) + "," + fmt(m.excess_delay_s * 1e9) + "," + fmt(m.power_db) + "," + fmt(m.range_m) +
             "\n";
    return s;
}

inline std::vector<Mpc> mpcs_from_csv(const CsvTable &t)
{
    const std::size_t ca = t.column("angle_deg"), cd = t.column("excess_delay_ns"), cp = t.column("power_db"),
                      cr = t.column("range_m");
    std::vector<Mpc> out;
    for (std::size_t r = 0; r < t.rows.size(); ++r)
        out.push_back({t.number(r, ca), t.number(r, cd) * 1e-9, t.number(r, cp), t.number(r, cr)});
    return out;
}

// Scatterer points with their cluster label (empty for outliers) ------------

inline std::string points_to_csv(std::span<const ScattererPoint> pts, std::span<const Cluster> clusters)
{
    std::string s = "source,angle_deg,range_m,power_db,x_m,y_m,cluster\n";
    for (const auto &p : pts)
    {
        std::string label;
        for (const auto &c : clusters)
            for (const auto &m : c.members)
                if (m == p)
                    label = c.label;
        s += std::string(to_string(p.source)) + "," + fmt(p.steering_deg) + "," + fmt(p.range_m) + "," +
             fmt(p.power_db) + "," + fmt(p.position.x) + "," + fmt(p.position.y) + "," + label + "\n";
    }
    return s;
}

struct PointTable
{
    std::vector<ScattererPoint> points;
    std::vector<std::string> cluster; // parallel to points
};

inline PointTable points_from_csv(const CsvTable &t)
{
    const std::size_t cs = t.column("source"), ca = t.column("angle_deg"), cr = t.column("range_m"),
                      cp = t.column("power_db"), cx = t.column("x_m"), cy = t.column("y_m"),
                      cc = t.column("cluster");
    PointTable out;
    for (std::size_t r = 0; r < t.rows.size(); ++r)
    {
        out.points.push_back({{t.number(r, cx), t.number(r, cy)},
                              node_from_string(t.rows[r][cs]),
                              t.number(r, ca),
                              t.number(r, cr),
                              t.number(r, cp)});
        out.cluster.push_back(t.rows[r][cc]);
    }
    return out;
}

// Rebuild clusters from a labeled point table, keeping label order C1, C2, ...
inline std::vector<Cluster> clusters_from_points(const PointTable &pt)
{
    std::vector<Cluster> out;
    for (std::size_t i = 0; i < pt.points.size(); ++i)
    {
        if (pt.cluster[i].empty())
            continue;
        auto it = std::find_if(out.begin(), out.end(), [&](const Cluster &c) { return c.label == pt.cluster[i]; });
        if (it == out.end())
        {
            out.push_back({{}, {}, pt.cluster[i]});
            it = out.end() - 1;
        }
        it->members.push_back(pt.points[i]);
    }
    for (auto &c : out)
    {
        std::sort(c.members.begin(), c.members.end(), isacgeo::detail::canonical_less);
        Vec2 s;
        for (const auto &m : c.members)
            s = s + m.position;
        c.centroid = s / static_cast<double>(c.members.size());
    }
    std::stable_sort(out.begin(), out.end(), [](const Cluster &a, const Cluster &b) {
        return isacgeo::detail::label_rank(a.label) < isacgeo::detail::label_rank(b.label);
    });
    return out;
}

inline std::string clusters_to_csv(std::span<const Cluster> clusters)
{
    std::string s = "label,x_m,y_m,members,total_power_db\n";
    for (const auto &c : clusters)
        s += c.label + "," + fmt(c.centroid.x) + "," + fmt(c.centroid.y) + "," + std::to_string(c.members.size()) +
             "," + fmt(pow2db(c.total_power())) + "\n";
    return s;
}

// Associations -------------------------------------------------------------

inline std::string associations_to_csv(std::span<const Association> as)
{
    std::string s = "excess_delay_ns,power_db,cluster,predicted_ns,residual_ns,model,x_m,y_m\n";
    for (const auto &a : as)
        s += fmt(a.measured_excess_delay_s * 1e9) + "," + fmt(a.comm_mpc.power_db) + "," +
             (a.matched() ? a.cluster_label : std::string("unmatched")) + "," +
             fmt(a.predicted_excess_delay_s * 1e9) + "," + fmt(a.residual_s * 1e9) + "," +
             std::string(to_string(a.model)) + "," + fmt(a.reflection_point.x) + "," + fmt(a.reflection_point.y) +
             "\n";
    return s;
}

inline std::vector<Association> associations_from_csv(const CsvTable &t)
{
    const std::size_t cd = t.column("excess_delay_ns"), cp = t.column("power_db"), cc = t.column("cluster"),
                      cpr = t.column("predicted_ns"), cre = t.column("residual_ns"), cm = t.column("model"),
                      cx = t.column("x_m"), cy = t.column("y_m");
    std::vector<Association> out;
    for (std::size_t r = 0; r < t.rows.size(); ++r)
    {
        Association a;
        a.measured_excess_delay_s = t.number(r, cd) * 1e-9;
        a.comm_mpc.excess_delay_s = a.measured_excess_delay_s;
        a.comm_mpc.power_db = t.number(r, cp);
        a.cluster_label = t.rows[r][cc] == "unmatched" ? std::string{} : t.rows[r][cc];
        a.predicted_excess_delay_s = t.number(r, cpr) * 1e-9;
        a.residual_s = t.number(r, cre) * 1e-9;
        a.model = reflection_model_from_string(t.rows[r][cm]);
        a.reflection_point = {t.number(r, cx), t.number(r, cy)};
        out.push_back(a);
    }
    return out;
}

// RCS ----------------------------------------------------------------------

inline std::string rcs_to_csv(std::span<const RcsEstimate> est)
{
    std::string s = "label,d_bi_m,r_t_m,r_r_m,delta_p_db,sigma_dbsm,beam_comp_db\n";
    for (const auto &e : est)
        s += e.label + "," + fmt(e.d_bi_m) + "," + fmt(e.r_t_m) + "," + fmt(e.r_r_m) + "," + fmt(e.delta_p_db) + "," +
             fmt(e.sigma_dbsm) + "," + fmt(e.beam_comp_db) + "\n";
    return s;
}

// Spreads ------------------------------------------------------------------

inline std::string delay_spreads_to_csv(const SpreadStats &s)
{
    std::string out = "angle_deg,delay_spread_ns\n";
    for (const auto &[a, v] : s.per_angle_delay_spread)
        out += fmt(a) + "," + fmt(v * 1e9) + "\n";
    return out;
}

inline std::string angle_spreads_to_csv(const SpreadStats &s)
{
    std::string out = "delay_ns,angle_spread_deg\n";
    for (const auto &[d, v] : s.per_bin_angle_spread)
        out += fmt(d * 1e9) + "," + fmt(v) + "\n";
    return out;
}

inline std::string cdf_to_csv(std::span<const CdfPoint> cdf, double scale = 1.0)
{
    std::string out = "value,probability\n";
    for (const auto &p : cdf)
        out += fmt(p.value * scale) + "," + fmt(p.probability) + "\n";
    return out;
}

inline std::string spread_fits_to_csv(const SpreadStats &s)
{
    std::string out = "quantity,mean,std,samples\n";
    out += "delay_spread_ns," + fmt(s.delay_fit.mean * 1e9) + "," + fmt(s.delay_fit.std * 1e9) + "," +
           std::to_string(s.delay_cdf.size()) + "\n";
    out += "angle_spread_deg," + fmt(s.angle_fit.mean) + "," + fmt(s.angle_fit.std) + "," +
           std::to_string(s.angle_cdf.size()) + "\n";
    return out;
}

// Curves -------------------------------------------------------------------

inline std::string curves_to_csv(const std::vector<std::pair<std::string, std::vector<Vec2>>> &curves)
{
    std::string out = "curve,x_m,y_m\n";
    for (const auto &[name, pts] : curves)
        for (const auto &p : pts)
            out += name + "," + fmt(p.x) + "," + fmt(p.y) + "\n";
    return out;
}

// ------------------------------------------------------------------------
// Run manifest

struct RunManifest
{
    int schema_version = kSchemaVersion;
    std::string subcommand;
    std::map<std::string, std::string> inputs;
    json parameters = json::object();
    std::uint64_t seed = 0;
    std::string output_dir;
    std::vector<std::string> outputs;

    bool operator==(const RunManifest &) const = default;
};

inline json to_json(const RunManifest &m)
{
    return {{"schema_version", m.schema_version}, {"tool", "isacgeo"},       {"subcommand", m.subcommand},
            {"inputs", m.inputs},                 {"parameters", m.parameters}, {"seed", m.seed},
            {"output_dir", m.output_dir},         {"outputs", m.outputs}};
}

inline RunManifest manifest_from_json(const json &j)
{
    try
    {
        RunManifest m;
        m.schema_version = j.at("schema_version").get<int>();
        if (m.schema_version != kSchemaVersion)
            throw ParseError("manifest: unsupported schema_version");
        m.subcommand = j.at("subcommand").get<std::string>();
        m.inputs = j.at("inputs").get<std::map<std::string, std::string>>();
        m.parameters = j.at("parameters");
        m.seed = j.at("seed").get<std::uint64_t>();
        m.output_dir = j.at("output_dir").get<std::string>();
        m.outputs = j.at("outputs").get<std::vector<std::string>>();
        return m;
    }
    catch (const json::exception &e)
    {
        throw ParseError(std::string("manifest: ") + e.what());
    }
}

inline std::string manifest_text(const RunManifest &m) { return to_json(m).dump(2) + "\n"; }

} // namespace isacgeo::io
