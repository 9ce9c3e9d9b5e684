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

// isacgeo command-line front end.
//
// Exit codes: 0 success, 2 usage error, 3 data error. Failures print one
// line on stderr: `isacgeo: error kind=<kind> message="<text>"`.

#include <isacgeo/isacgeo.hpp>

#include <CLI11/CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace isacgeo;
using io::json;

namespace
{

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;

std::string one_line(std::string s)
{
    for (auto &c : s)
        if (c == '\n' || c == '\r')
            c = ' ';
    std::string out;
    for (char c : s)
    {
        if (c == '"' || c == '\\')
            out += '\\';
        out += c;
    }
    return out;
}

void report_error(const char *kind, const std::string &msg)
{
    std::cerr << "isacgeo: error kind=" << kind << " message=\"" << one_line(msg) << "\"\n";
}

void warn(const std::string &msg) { std::cerr << "isacgeo: warning message=\"" << one_line(msg) << "\"\n"; }

// ------------------------------------------------------------------------
// Output directory and manifest

struct Output
{
    fs::path dir;
    io::RunManifest manifest;

    void write(const std::string &rel, const std::string &text)
    {
        const fs::path p = dir / rel;
        fs::create_directories(p.parent_path());
        io::write_text(p, text);
        manifest.outputs.push_back(fs::path(rel).generic_string());
    }

    void finish()
    {
        std::sort(manifest.outputs.begin(), manifest.outputs.end());
        io::write_text(dir / "manifest.json", io::manifest_text(manifest));
    }
};

Output open_output(const std::string &flag, const std::string &subcommand)
{
    std::string dir = flag;
    if (dir.empty())
        if (const char *env = std::getenv("ISACGEO_OUT"); env && *env)
            dir = env;
    if (dir.empty())
        dir = "isacgeo_out/" + subcommand;
    Output o;
    o.dir = dir;
    fs::create_directories(o.dir);
    o.manifest.subcommand = subcommand;
    o.manifest.output_dir = dir;
    return o;
}

// ------------------------------------------------------------------------
// Argument helpers

std::vector<double> parse_list(const std::string &s, std::size_t n, const std::string &what)
{
    std::vector<double> v;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ','))
        v.push_back(io::parse_double(io::detail::trim(tok), what));
    if (v.size() != n)
        throw ParseError(what + ": expected " + std::to_string(n) + " comma-separated numbers");
    return v;
}

std::vector<fs::path> expand_inputs(const std::vector<std::string> &args)
{
    std::vector<fs::path> out;
    for (const auto &a : args)
    {
        if (fs::is_directory(a))
        {
            std::vector<fs::path> files;
            for (const auto &e : fs::directory_iterator(a))
                if (e.is_regular_file() && e.path().extension() == ".csv")
                    files.push_back(e.path());
            std::sort(files.begin(), files.end());
            out.insert(out.end(), files.begin(), files.end());
        }
        else
            out.emplace_back(a);
    }
    return out;
}

fs::path resolve_scene(const std::string &p)
{
    fs::path path(p);
    if (fs::is_directory(path))
        path /= "scene.json";
    if (!fs::exists(path))
        throw ParseError("scene document not found: " + path.string());
    return path;
}

struct GateFlags
{
    double p_min_db = -55.0;
    double dtau_min_ns = 2.2;
    double r_min_m = 0.5;
    std::size_t k_max = 4;
    CLI::Option *kmax_opt = nullptr;

    void add(CLI::App *app)
    {
        app->add_option("--pmin", p_min_db, "Minimum peak power [dB]")->capture_default_str();
        app->add_option("--dtau-min", dtau_min_ns, "Minimum peak separation [ns]")->capture_default_str();
        app->add_option("--rmin", r_min_m, "Monostatic range gate [m]")->capture_default_str();
        kmax_opt = app->add_option("--kmax", k_max, "Maximum peaks per CIR")->capture_default_str();
    }

    PeakGateParams gates() const { return {p_min_db, dtau_min_ns * 1e-9, r_min_m, k_max}; }
};

json gates_json(const PeakGateParams &g)
{
    return {{"p_min_db", g.p_min_db}, {"dtau_min_ns", g.dtau_min_s * 1e9}, {"r_min_m", g.r_min_m}, {"k_max", g.k_max}};
}

std::string angle_tag(std::size_t i) { return (i < 10 ? "0" : "") + std::to_string(i); }

void write_scan(Output &out, const MonoScan &scan)
{
    const std::string node(to_string(scan.node));
    for (std::size_t i = 0; i < scan.cirs.size(); ++i)
        out.write("cir/" + node + "/" + node + "_" + angle_tag(i) + ".csv", io::cir_to_csv(scan.cirs[i]));
    out.write("padp_" + node + ".csv", io::padp_to_csv(scan.padp));
}

void write_spreads(Output &out, const std::string &prefix, const SpreadStats &s)
{
    out.write(prefix + "delay_spread.csv", io::delay_spreads_to_csv(s));
    out.write(prefix + "angle_spread.csv", io::angle_spreads_to_csv(s));
    out.write(prefix + "delay_spread_cdf.csv", io::cdf_to_csv(s.delay_cdf, 1e9));
    out.write(prefix + "angle_spread_cdf.csv", io::cdf_to_csv(s.angle_cdf));
    out.write(prefix + "spread_fit.csv", io::spread_fits_to_csv(s));
}

std::vector<Mpc> bistatic_rows(const BistaticMpcs &bi)
{
    std::vector<Mpc> rows{bi.los};
    rows.insert(rows.end(), bi.echoes.begin(), bi.echoes.end());
    return rows;
}

// ------------------------------------------------------------------------
// Subcommands

struct Common
{
    std::string out;
};

int cmd_golay(std::size_t n)
{
    const auto chk = check_complementarity(generate_golay_pair(n));
    std::cout << "peak=" << chk.peak << " max_sidelobe=" << chk.max_sidelobe << "\n";
    return chk.max_sidelobe == 0 && chk.peak == static_cast<std::int64_t>(2 * n) ? 0 : kExitData;
}

int cmd_simulate(const std::string &config, std::uint64_t seed, const Common &c)
{
    const auto doc = io::read_document(config);
    Output out = open_output(c.out, "simulate");
    out.manifest.inputs["config"] = config;
    out.manifest.seed = seed;
    out.manifest.parameters = {{"sounder", io::to_json(doc.sounder)}};
    doc.scene.validate_bistatic(doc.sounder, 1e-6);
    write_scan(out, scan_monostatic(doc.scene, Node::mono1, doc.sounder, seed));
    write_scan(out, scan_monostatic(doc.scene, Node::mono2, doc.sounder, seed));
    out.write("cir/bistatic.csv", io::cir_to_csv(sound_bistatic(doc.scene, doc.sounder, seed)));
    out.finish();
    return 0;
}

int cmd_extract(const std::vector<std::string> &cir_args, const std::string &padp, const GateFlags &gf,
                double floor_db, const Common &c)
{
    const auto files = expand_inputs(cir_args);
    if (files.empty() && padp.empty())
        throw ParseError("extract: no CIR or PADP input given");
    std::vector<Cir> cirs;
    for (const auto &f : files)
        cirs.push_back(io::cir_from_csv(io::read_csv(f)));
    const bool bistatic = !cirs.empty() && cirs.front().kind == CirKind::bistatic;
    for (const auto &cir : cirs)
        if ((cir.kind == CirKind::bistatic) != bistatic)
            throw ParseError("extract: monostatic and bistatic CIRs cannot be mixed");

    PeakGateParams gates = gf.gates();
    if (bistatic && gf.kmax_opt->count() == 0)
        gates.k_max = default_comm_gates().k_max;
    gates.validate();

    Output out = open_output(c.out, "extract");
    for (std::size_t i = 0; i < files.size(); ++i)
        out.manifest.inputs["cir_" + angle_tag(i)] = files[i].generic_string();
    if (!padp.empty())
        out.manifest.inputs["padp"] = padp;
    out.manifest.parameters = gates_json(gates);
    out.manifest.parameters["floor_db"] = floor_db;
    out.manifest.parameters["mode"] = bistatic ? "bistatic" : "monostatic";

    if (!cirs.empty())
    {
        if (bistatic)
        {
            if (cirs.size() != 1)
                throw ParseError("extract: expected exactly one bistatic CIR");
            const auto bi = extract_bistatic(cirs.front(), gates);
            out.write("mpcs.csv", io::mpcs_to_csv(bistatic_rows(bi)));
        }
        else
            out.write("mpcs.csv", io::mpcs_to_csv(extract_mpcs(cirs, gates)));
    }
    if (!padp.empty())
        write_spreads(out, "", spread_statistics(io::padp_from_csv(io::read_csv(padp)), floor_db));
    out.finish();
    return 0;
}

struct Positions
{
    Vec2 mono1{0.0, 0.0};
    Vec2 mono2{4.0, 0.0};
};

Positions positions_from(const std::string &config)
{
    Positions p;
    if (!config.empty())
    {
        const auto doc = io::read_document(config);
        p.mono1 = doc.scene.mono1_pos;
        p.mono2 = doc.scene.mono2_pos;
    }
    return p;
}

int cmd_map(const std::string &m1, const std::string &m2, const std::string &config, double eps,
            std::size_t min_points, const Common &c)
{
    if (m1.empty() && m2.empty())
        throw ParseError("map: give --mono1 and/or --mono2 MPC tables");
    const Positions pos = positions_from(config);
    std::vector<ScattererPoint> pts;
    Output out = open_output(c.out, "map");
    if (!m1.empty())
    {
        const auto mp = io::mpcs_from_csv(io::read_csv(m1));
        const auto p = backproject_mpcs(Node::mono1, pos.mono1, mp);
        pts.insert(pts.end(), p.begin(), p.end());
        out.manifest.inputs["mono1_mpcs"] = m1;
    }
    if (!m2.empty())
    {
        const auto mp = io::mpcs_from_csv(io::read_csv(m2));
        const auto p = backproject_mpcs(Node::mono2, pos.mono2, mp);
        pts.insert(pts.end(), p.begin(), p.end());
        out.manifest.inputs["mono2_mpcs"] = m2;
    }
    if (!config.empty())
        out.manifest.inputs["config"] = config;
    out.manifest.parameters = {{"eps_m", eps},
                               {"min_points", min_points},
                               {"mono1_pos", {pos.mono1.x, pos.mono1.y}},
                               {"mono2_pos", {pos.mono2.x, pos.mono2.y}}};
    const auto clusters = cluster_scatterers(pts, eps, min_points);
    out.write("points.csv", io::points_to_csv(pts, clusters));
    out.write("clusters.csv", io::clusters_to_csv(clusters));
    out.finish();
    return 0;
}

int cmd_associate(const std::string &comm, const std::string &points, const std::string &config, double tol_ns,
                  bool no_plane, const Common &c)
{
    const Positions pos = positions_from(config);
    const auto mpcs = io::mpcs_from_csv(io::read_csv(comm));
    const auto clusters = io::clusters_from_points(io::points_from_csv(io::read_csv(points)));
    const AssociationOptions opt{tol_ns * 1e-9, !no_plane};
    const auto assoc = associate_mpcs(mpcs, clusters, pos.mono1, pos.mono2, distance(pos.mono1, pos.mono2), opt);

    Output out = open_output(c.out, "associate");
    out.manifest.inputs = {{"comm_mpcs", comm}, {"points", points}};
    if (!config.empty())
        out.manifest.inputs["config"] = config;
    out.manifest.parameters = {{"tol_ns", tol_ns}, {"plane_candidates", !no_plane}};
    out.write("associations.csv", io::associations_to_csv(assoc));
    out.finish();
    return 0;
}

int cmd_rcs(const std::string &assoc_path, const std::string &points, const std::string &cir_path,
            const std::string &config, const GateFlags &gf, bool no_beam, const Common &c)
{
    SounderConfig cfg;
    Positions pos;
    if (!config.empty())
    {
        const auto doc = io::read_document(config);
        cfg = doc.sounder;
        pos = {doc.scene.mono1_pos, doc.scene.mono2_pos};
    }
    PeakGateParams gates = gf.gates();
    if (gf.kmax_opt->count() == 0)
        gates.k_max = default_comm_gates().k_max;
    const Cir cir = io::cir_from_csv(io::read_csv(cir_path));
    const auto bi = extract_bistatic(cir, gates);
    const auto assoc = io::associations_from_csv(io::read_csv(assoc_path));
    const auto clusters = io::clusters_from_points(io::points_from_csv(io::read_csv(points)));
    RcsOptions ro{!no_beam, cfg.hpbw_comm_tx_deg, cfg.hpbw_comm_rx_deg};
    const auto res = rcs_from_associations(bi, assoc, clusters, pos.mono1, pos.mono2, distance(pos.mono1, pos.mono2), ro);
    for (const auto &w : res.warnings)
        warn(w);

    Output out = open_output(c.out, "rcs");
    out.manifest.inputs = {{"associations", assoc_path}, {"points", points}, {"bistatic_cir", cir_path}};
    if (!config.empty())
        out.manifest.inputs["config"] = config;
    out.manifest.parameters = gates_json(gates);
    out.manifest.parameters["beam_compensation"] = !no_beam;
    out.manifest.parameters["hpbw_comm_tx_deg"] = ro.hpbw_comm_tx_deg;
    out.manifest.parameters["hpbw_comm_rx_deg"] = ro.hpbw_comm_rx_deg;
    out.write("rcs.csv", io::rcs_to_csv(res.estimates));
    out.finish();
    return 0;
}

int cmd_spreads(const std::string &padp, double floor_db, const Common &c)
{
    const auto stats = spread_statistics(io::padp_from_csv(io::read_csv(padp)), floor_db);
    Output out = open_output(c.out, "spreads");
    out.manifest.inputs["padp"] = padp;
    out.manifest.parameters = {{"floor_db", floor_db}};
    write_spreads(out, "", stats);
    out.finish();
    return 0;
}

int cmd_validate(const std::vector<std::string> &circles, const std::string &ellipse, const std::string &wall,
                 const std::string &point, double step_mm, const Common &c)
{
    std::vector<Curve> curves;
    std::vector<std::pair<std::string, std::vector<Vec2>>> samples;
    for (std::size_t i = 0; i < circles.size(); ++i)
    {
        const auto v = parse_list(circles[i], 3, "--circle");
        curves.emplace_back(Circle{{v[0], v[1]}, v[2]});
        samples.emplace_back("circle" + std::to_string(i + 1), sample_curve(curves.back(), step_mm * 1e-3));
    }
    if (!ellipse.empty())
    {
        const auto v = parse_list(ellipse, 5, "--ellipse");
        curves.emplace_back(Ellipse{{v[0], v[1]}, {v[2], v[3]}, v[4]});
        samples.emplace_back("ellipse", sample_curve(curves.back(), step_mm * 1e-3));
    }
    if (wall.empty() == point.empty())
        throw ParseError("validate: give exactly one of --wall or --point as the reference");
    Reference ref;
    json ref_json;
    if (!wall.empty())
    {
        const auto v = parse_list(wall, 4, "--wall");
        ref = WallSegment{{v[0], v[1]}, {v[2], v[3]}, 0.0, "wall"};
        ref_json = {{"wall", v}};
    }
    else
    {
        const auto v = parse_list(point, 2, "--point");
        ref = Vec2{v[0], v[1]};
        ref_json = {{"point", v}};
    }
    const auto rep = validate_geometry(curves, ref);

    Output out = open_output(c.out, "validate");
    out.manifest.parameters = {{"circles", circles}, {"ellipse", ellipse}, {"reference", ref_json},
                               {"sample_step_mm", step_mm}};
    out.write("curves.csv", io::curves_to_csv(samples));
    std::string s = "metric,value\n";
    s += std::string("intersects,") + (rep.intersects ? "1" : "0") + "\n";
    s += "max_curve_gap_m," + io::fmt(rep.max_curve_gap_m) + "\n";
    s += "intersection_spread_m," + io::fmt(rep.intersection_spread_m) + "\n";
    s += "max_gap_m," + io::fmt(rep.max_gap_m) + "\n";
    s += "mean_x_m," + io::fmt(rep.mean_point.x) + "\n";
    s += "mean_y_m," + io::fmt(rep.mean_point.y) + "\n";
    s += "reference_error_m," + io::fmt(rep.reference_error_m) + "\n";
    out.write("validation.csv", s);
    out.finish();
    std::cout << s;
    return 0;
}

// report ---------------------------------------------------------------------

int cmd_report(const std::string &scene_arg, std::uint64_t seed, const PipelineParams &prm,
               const std::optional<double> &noise_db, const Common &c)
{
    const fs::path scene_path = resolve_scene(scene_arg);
    auto doc = io::read_document(scene_path);
    if (noise_db)
        doc.sounder.noise_floor_db = *noise_db;
    const auto r = run_pipeline(doc.scene, doc.sounder, prm, seed);

    Output out = open_output(c.out, "report");
    out.manifest.inputs["scene"] = scene_path.generic_string();
    out.manifest.seed = seed;
    out.manifest.parameters = {{"sounder", io::to_json(doc.sounder)},
                               {"sensing_gates", gates_json(prm.sensing_gates)},
                               {"comm_gates", gates_json(prm.comm_gates)},
                               {"cluster_eps_m", prm.cluster_eps_m},
                               {"cluster_min_points", prm.cluster_min_points},
                               {"association_tol_ns", prm.association.tol_s * 1e9},
                               {"plane_candidates", prm.association.plane_candidates},
                               {"beam_compensation", prm.beam_compensation},
                               {"spread_floor_db", prm.spread_floor_db}};

    write_scan(out, r.scan1);
    write_scan(out, r.scan2);
    out.write("cir/bistatic.csv", io::cir_to_csv(r.bistatic));
    out.write("mpcs_mono1.csv", io::mpcs_to_csv(r.mpcs1));
    out.write("mpcs_mono2.csv", io::mpcs_to_csv(r.mpcs2));
    out.write("mpcs_bistatic.csv", io::mpcs_to_csv(bistatic_rows(r.comm)));
    out.write("points.csv", io::points_to_csv(r.points, r.clusters));
    out.write("clusters.csv", io::clusters_to_csv(r.clusters));
    out.write("associations.csv", io::associations_to_csv(r.associations));
    out.write("rcs.csv", io::rcs_to_csv(r.rcs.estimates));
    write_spreads(out, "mono1_", r.spreads1);
    write_spreads(out, "mono2_", r.spreads2);

    // Circle/ellipse check per estimate against its nearest true reflector.
    std::vector<std::pair<std::string, std::vector<Vec2>>> curve_samples;
    std::string val = "label,truth,max_gap_m,reference_error_m\n";
    for (const auto &e : r.rcs.estimates)
    {
        const std::vector<Curve> curves{Circle{doc.scene.mono1_pos, e.r_t_m}, Circle{doc.scene.mono2_pos, e.r_r_m},
                                        Ellipse{doc.scene.mono1_pos, doc.scene.mono2_pos, e.d_bi_m}};
        const auto truth = nearest_truth(doc.scene, e.reflection_point);
        Reference ref = e.reflection_point;
        for (const auto &w : doc.scene.walls)
            if (w.label == truth.label)
                ref = w;
        for (const auto &s : doc.scene.scatterers)
            if (s.label == truth.label)
                ref = s.position;
        const auto rep = validate_geometry(curves, ref);
        val += e.label + "," + truth.label + "," + io::fmt(rep.max_gap_m) + "," + io::fmt(rep.reference_error_m) + "\n";
        curve_samples.emplace_back(e.label + "_circle_mono1", sample_curve(curves[0], 0.01));
        curve_samples.emplace_back(e.label + "_circle_mono2", sample_curve(curves[1], 0.01));
        curve_samples.emplace_back(e.label + "_ellipse", sample_curve(curves[2], 0.01));
    }
    out.write("validation.csv", val);
    out.write("curves.csv", io::curves_to_csv(curve_samples));

    // Summary: stdout table and a long-form CSV with the same content.
    std::ostringstream txt;
    std::string csv = "section,label,field,value\n";
    auto row = [&](const std::string &sec, const std::string &label, const std::string &field, const std::string &v) {
        csv += sec + "," + label + "," + field + "," + v + "\n";
    };
    char line[256];
    txt << "isacgeo report  scene=" << scene_path.generic_string() << "  seed=" << seed << "\n\n";
    txt << "clusters: " << r.clusters.size() << "\n";
    std::snprintf(line, sizeof line, "  %-5s %9s %9s %8s  %-10s %9s\n", "label", "x_m", "y_m", "members", "truth",
                  "error_m");
    txt << line;
    row("clusters", "", "count", std::to_string(r.clusters.size()));
    for (const auto &cl : r.clusters)
    {
        const auto t = nearest_truth(doc.scene, cl.centroid);
        std::snprintf(line, sizeof line, "  %-5s %9.3f %9.3f %8zu  %-10s %9.3f\n", cl.label.c_str(), cl.centroid.x,
                      cl.centroid.y, cl.members.size(), t.label.c_str(), t.distance_m);
        txt << line;
        row("clusters", cl.label, "x_m", io::fmt(cl.centroid.x));
        row("clusters", cl.label, "y_m", io::fmt(cl.centroid.y));
        row("clusters", cl.label, "truth", t.label);
        row("clusters", cl.label, "error_m", io::fmt(t.distance_m));
    }
    std::snprintf(line, sizeof line, "\nbistatic LoS: %.3f ns, %.2f dB\n", r.comm.los_delay_s * 1e9,
                  r.comm.los.power_db);
    txt << line;
    row("bistatic", "los", "delay_ns", io::fmt(r.comm.los_delay_s * 1e9));
    row("bistatic", "los", "power_db", io::fmt(r.comm.los.power_db));
    std::snprintf(line, sizeof line, "  %11s %9s %-9s %-6s %11s  %-10s\n", "excess_ns", "power_db", "cluster", "model",
                  "residual_ns", "truth");
    txt << line;
    for (const auto &a : r.associations)
    {
        const auto t = nearest_bistatic_path(doc.scene, doc.sounder, a.measured_excess_delay_s);
        const std::string cl = a.matched() ? a.cluster_label : "unmatched";
        std::snprintf(line, sizeof line, "  %11.3f %9.2f %-9s %-6s %11.3f  %-10s\n", a.measured_excess_delay_s * 1e9,
                      a.comm_mpc.power_db, cl.c_str(), std::string(to_string(a.model)).c_str(), a.residual_s * 1e9,
                      t.label.c_str());
        txt << line;
        const std::string key = io::fmt(a.measured_excess_delay_s * 1e9);
        row("association", key, "cluster", cl);
        row("association", key, "model", std::string(to_string(a.model)));
        row("association", key, "residual_ns", io::fmt(a.residual_s * 1e9));
        row("association", key, "truth", t.label);
    }
    txt << "\nbistatic RCS:\n";
    std::snprintf(line, sizeof line, "  %-5s %-10s %8s %8s %8s %10s %10s %10s\n", "label", "truth", "d_bi_m", "r_t_m",
                  "r_r_m", "delta_p_db", "sigma_dbsm", "truth_dbsm");
    txt << line;
    for (const auto &e : r.rcs.estimates)
    {
        const auto t = nearest_truth(doc.scene, e.reflection_point);
        std::snprintf(line, sizeof line, "  %-5s %-10s %8.3f %8.3f %8.3f %10.2f %10.2f %10.2f\n", e.label.c_str(),
                      t.label.c_str(), e.d_bi_m, e.r_t_m, e.r_r_m, e.delta_p_db, e.sigma_dbsm, t.rcs_dbsm);
        txt << line;
        row("rcs", e.label, "truth", t.label);
        row("rcs", e.label, "sigma_dbsm", io::fmt(e.sigma_dbsm));
        row("rcs", e.label, "truth_dbsm", io::fmt(t.rcs_dbsm));
    }
    for (const auto &w : r.rcs.warnings)
        txt << "  warning: " << w << "\n";
    txt << "\nspreads (floor " << io::fmt(prm.spread_floor_db) << " dB):\n";
    for (const auto &[name, s] : {std::pair{"mono1", &r.spreads1}, std::pair{"mono2", &r.spreads2}})
    {
        std::snprintf(line, sizeof line, "  %s  delay %.2f +- %.2f ns   angle %.2f +- %.2f deg\n", name,
                      s->delay_fit.mean * 1e9, s->delay_fit.std * 1e9, s->angle_fit.mean, s->angle_fit.std);
        txt << line;
        row("spreads", name, "delay_mean_ns", io::fmt(s->delay_fit.mean * 1e9));
        row("spreads", name, "delay_std_ns", io::fmt(s->delay_fit.std * 1e9));
        row("spreads", name, "angle_mean_deg", io::fmt(s->angle_fit.mean));
        row("spreads", name, "angle_std_deg", io::fmt(s->angle_fit.std));
    }
    std::snprintf(line, sizeof line, "  bistatic  delay %.2f ns\n", r.bistatic_delay_spread_s * 1e9);
    txt << line;
    row("spreads", "bistatic", "delay_ns", io::fmt(r.bistatic_delay_spread_s * 1e9));

    out.write("summary.csv", csv);
    out.write("summary.txt", txt.str());
    out.finish();
    std::cout << txt.str();
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"isacgeo: scatterer maps, bistatic association and RCS from mmWave CIRs"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "isacgeo 0.1.0");
    Common common;
    auto add_out = [&](CLI::App *s) {
        s->add_option("--out", common.out, "Output directory (default $ISACGEO_OUT or isacgeo_out/<cmd>)");
    };

    std::uint64_t seed = 7;
    std::string config, padp, scene, points, comm, assoc, cir, mono1, mono2, ellipse, wall, point;
    std::vector<std::string> cir_inputs, circles;
    double floor_db = 30.0, eps = 0.40, tol_ns = 1.0, step_mm = 1.0;
    std::size_t min_points = 2, golay_n = 128;
    bool no_plane = false, no_beam = false;
    std::optional<double> noise_db;
    GateFlags gates;

    auto *golay = app.add_subcommand("golay", "Check Golay complementarity");
    golay->add_option("--check", golay_n, "Sequence length (power of two)")->required();

    auto *sim = app.add_subcommand("simulate", "Render monostatic scans and the bistatic CIR");
    sim->add_option("--config", config, "Run document (JSON)")->required()->check(CLI::ExistingFile);
    sim->add_option("--seed", seed, "Random seed")->capture_default_str();
    add_out(sim);

    auto *ext = app.add_subcommand("extract", "Detect MPCs in CIRs; spreads from a PADP");
    ext->add_option("--cir", cir_inputs, "CIR CSV files or directories");
    ext->add_option("--padp", padp, "PADP CSV for spread statistics")->check(CLI::ExistingFile);
    gates.add(ext);
    ext->add_option("--floor-db", floor_db, "Spread floor below the PADP maximum [dB]")->capture_default_str();
    add_out(ext);

    auto *map = app.add_subcommand("map", "Back-project MPCs and cluster scatterers");
    map->add_option("--mono1", mono1, "Mono1 MPC CSV")->check(CLI::ExistingFile);
    map->add_option("--mono2", mono2, "Mono2 MPC CSV")->check(CLI::ExistingFile);
    map->add_option("--config", config, "Run document for node positions")->check(CLI::ExistingFile);
    map->add_option("--eps", eps, "Clustering distance [m]")->capture_default_str();
    map->add_option("--min-points", min_points, "Minimum cluster size")->capture_default_str();
    add_out(map);

    auto *asc = app.add_subcommand("associate", "Associate bistatic MPCs with clusters");
    asc->add_option("--comm", comm, "Bistatic MPC CSV")->required()->check(CLI::ExistingFile);
    asc->add_option("--points", points, "Clustered point CSV from 'map'")->required()->check(CLI::ExistingFile);
    asc->add_option("--config", config, "Run document for node positions")->check(CLI::ExistingFile);
    asc->add_option("--tol-ns", tol_ns, "Association tolerance [ns]")->capture_default_str();
    asc->add_flag("--no-plane", no_plane, "Only evaluate member points, no tangent-plane candidates");
    add_out(asc);

    auto *val = app.add_subcommand("validate", "Circle/ellipse localization check");
    val->add_option("--circle", circles, "cx,cy,r (repeatable)");
    val->add_option("--ellipse", ellipse, "ax,ay,bx,by,path_sum");
    val->add_option("--wall", wall, "Reference wall ax,ay,bx,by");
    val->add_option("--point", point, "Reference point x,y");
    val->add_option("--step-mm", step_mm, "Sampling step of the exported curves [mm]")->capture_default_str();
    add_out(val);

    auto *rcs = app.add_subcommand("rcs", "Bistatic RCS from associations and the bistatic CIR");
    rcs->add_option("--associations", assoc, "Association CSV")->required()->check(CLI::ExistingFile);
    rcs->add_option("--points", points, "Clustered point CSV from 'map'")->required()->check(CLI::ExistingFile);
    rcs->add_option("--bistatic-cir", cir, "Bistatic CIR CSV")->required()->check(CLI::ExistingFile);
    rcs->add_option("--config", config, "Run document for positions and beamwidths")->check(CLI::ExistingFile);
    GateFlags comm_gates;
    comm_gates.add(rcs);
    rcs->add_flag("--no-beam-comp", no_beam, "Skip the communication beam-gain correction");
    add_out(rcs);

    auto *spr = app.add_subcommand("spreads", "RMS delay/angular spreads of a PADP");
    spr->add_option("--padp", padp, "PADP CSV")->required()->check(CLI::ExistingFile);
    spr->add_option("--floor-db", floor_db, "Floor below the PADP maximum [dB]")->capture_default_str();
    add_out(spr);

    PipelineParams prm;
    double sens_dtau_ns = 2.2, assoc_tol_ns = 1.0;
    auto *rep = app.add_subcommand("report", "Full pipeline on a scene with a summary table");
    rep->add_option("--scene", scene, "Scene document or directory containing scene.json")->required();
    rep->add_option("--seed", seed, "Random seed")->capture_default_str();
    rep->add_option("--noise-db", noise_db, "Override the per-tap noise floor [dB]");
    rep->add_option("--pmin", prm.sensing_gates.p_min_db, "Minimum peak power [dB]")->capture_default_str();
    rep->add_option("--dtau-min", sens_dtau_ns, "Minimum peak separation [ns]")->capture_default_str();
    rep->add_option("--rmin", prm.sensing_gates.r_min_m, "Monostatic range gate [m]")->capture_default_str();
    rep->add_option("--kmax", prm.sensing_gates.k_max, "Maximum peaks per steering angle")->capture_default_str();
    rep->add_option("--eps", prm.cluster_eps_m, "Clustering distance [m]")->capture_default_str();
    rep->add_option("--min-points", prm.cluster_min_points, "Minimum cluster size")->capture_default_str();
    rep->add_option("--tol-ns", assoc_tol_ns, "Association tolerance [ns]")->capture_default_str();
    rep->add_option("--floor-db", prm.spread_floor_db, "Spread floor [dB]")->capture_default_str();
    add_out(rep);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForAllHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForVersion &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        report_error("usage", e.what());
        return kExitUsage;
    }

    try
    {
        if (*golay)
            return cmd_golay(golay_n);
        if (*sim)
            return cmd_simulate(config, seed, common);
        if (*ext)
            return cmd_extract(cir_inputs, padp, gates, floor_db, common);
        if (*map)
            return cmd_map(mono1, mono2, config, eps, min_points, common);
        if (*asc)
            return cmd_associate(comm, points, config, tol_ns, no_plane, common);
        if (*val)
            return cmd_validate(circles, ellipse, wall, point, step_mm, common);
        if (*rcs)
            return cmd_rcs(assoc, points, cir, config, comm_gates, no_beam, common);
        if (*spr)
            return cmd_spreads(padp, floor_db, common);
        if (*rep)
        {
            prm.sensing_gates.dtau_min_s = sens_dtau_ns * 1e-9;
            prm.association.tol_s = assoc_tol_ns * 1e-9;
            prm.sensing_gates.validate();
            return cmd_report(scene, seed, prm, noise_db, common);
        }
    }
    catch (const Error &e)
    {
        report_error(e.kind(), e.what());
        return kExitData;
    }
    catch (const std::exception &e)
    {
        report_error("io", e.what());
        return kExitData;
    }
    return kExitUsage;
}
