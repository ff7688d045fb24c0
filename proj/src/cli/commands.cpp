#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <optional>

#include "ptlab/cli/cli.hpp"
#include "ptlab/core/error.hpp"
#include "ptlab/core/pt.hpp"
#include "ptlab/io/csv.hpp"
#include "ptlab/io/hash.hpp"
#include "ptlab/io/spectrum_io.hpp"
#include "ptlab/scan/scan_io.hpp"

namespace ptlab::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

Error usage(const std::string& msg) { return Error(Errc::invalid_argument, msg); }

synth::SyntheticFamily load_family(const std::string& spec) {
    for (const auto& name : synth::builtin_preset_names())
        if (spec == name) return synth::SyntheticFamily(synth::builtin_preset(name));
    if (!fs::is_regular_file(spec)) throw usage("unknown family '" + spec + "' (built-in: b38, b0, or a preset file)");
    return synth::SyntheticFamily(io::read_json(spec).get<synth::FamilyPreset>());
}

json family_identity(const synth::SyntheticFamily& fam) {
    json j = fam.preset();
    return j;
}

fs::path resolve_dir(const std::string& out) {
    const fs::path dir = out.empty() ? output_root() : fs::path(out);
    if (!fs::is_directory(dir)) throw usage("output directory " + dir.string() + " does not exist");
    return dir;
}

fs::path resolve_file(const std::string& out, const char* default_name) {
    const fs::path file = out.empty() ? output_root() / default_name : fs::path(out);
    const fs::path parent = file.has_parent_path() ? file.parent_path() : fs::path(".");
    if (!fs::is_directory(parent)) throw usage("output directory " + parent.string() + " does not exist");
    return file;
}

std::pair<double, double> parse_pair(const std::string& text, const char* what) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw usage(std::string(what) + " must read s,delta");
    try {
        return {io::parse_double(text.substr(0, comma)), io::parse_double(text.substr(comma + 1))};
    } catch (const Error&) {
        throw usage(std::string(what) + " must read s,delta");
    }
}

scan::ParamGrid family_grid(const synth::SyntheticFamily& fam, const std::string& grid) {
    if (!grid.empty()) return scan::ParamGrid::parse(grid);
    const auto& p = fam.preset();
    scan::ParamGrid g;
    g.s_min = p.s_min;
    g.s_max = p.s_max;
    g.delta_min = p.delta_min;
    g.delta_max = p.delta_max;
    g.validate();
    return g;
}

void require_inside(const synth::SyntheticFamily& fam, const scan::ParamGrid& g) {
    const double s1 = g.s_at(g.ns() - 1), d1 = g.delta_at(g.nd() - 1);
    if (!fam.contains(g.s_min, g.delta_min) || !fam.contains(s1, d1))
        throw Error(Errc::out_of_bounds, "grid " + g.str() + " leaves the bounds of family '" + fam.preset().name + "'");
}

fit::FitConfig to_fit_config(const FitArgs& a) {
    fit::FitConfig c;
    c.max_iterations = a.max_iterations;
    c.gradient_tolerance = a.gradient_tolerance;
    c.step_tolerance = a.step_tolerance;
    c.n_starts = a.n_starts;
    c.damping_init = a.damping_init;
    c.seed = a.seed;
    c.mask = fit::ChannelMask::parse(a.mask);
    if (a.jacobian == "analytic")
        c.jacobian = fit::JacobianMode::analytic;
    else if (a.jacobian == "fd")
        c.jacobian = fit::JacobianMode::forward_difference;
    else
        throw usage("--jacobian must be analytic or fd");
    c.early_stop = !a.no_early_stop;
    c.validate();
    if (!(a.max_failure_rate >= 0.0 && a.max_failure_rate <= 1.0))
        throw usage("--max-failure-rate must lie in [0, 1]");
    return c;
}

json fit_config_json(const fit::FitConfig& c) {
    return {{"max_iterations", c.max_iterations},
            {"gradient_tolerance", c.gradient_tolerance},
            {"step_tolerance", c.step_tolerance},
            {"n_starts", c.n_starts},
            {"damping_init", c.damping_init},
            {"seed", c.seed},
            {"mask", c.mask.str()},
            {"jacobian", c.jacobian == fit::JacobianMode::analytic ? "analytic" : "fd"},
            {"early_stop", c.early_stop}};
}

void check_jobs(int jobs) {
    if (jobs < 0) throw usage("--jobs must be >= 0");
}

struct ManifestEntry {
    fs::path csv;
    double s = 0.0, delta = 0.0;
    std::size_t i = 0, j = 0;
};

struct Manifest {
    scan::ParamGrid grid;
    std::vector<ManifestEntry> files;
};

Manifest read_manifest(const std::string& path) {
    const json j = io::read_json(path);
    const fs::path base = fs::path(path).parent_path();
    Manifest m;
    try {
        m.grid = scan::ParamGrid::parse(j.at("grid").get<std::string>());
        for (const auto& f : j.at("files")) {
            ManifestEntry e;
            e.csv = base / f.at("csv").get<std::string>();
            e.s = f.at("s_mm").get<double>();
            e.delta = f.at("delta_mm").get<double>();
            e.i = f.at("i").get<std::size_t>();
            e.j = f.at("j").get<std::size_t>();
            m.files.push_back(e);
        }
    } catch (const json::exception& e) {
        throw Error(Errc::parse_error, path + ": " + e.what());
    }
    return m;
}

// Scan from a table, or a family-direct scan on the given grid.
scan::ScanResult load_scan(const std::string& in, const std::string& family, const std::string& grid) {
    if (in.empty() == family.empty()) throw usage("give exactly one of --in and --family");
    if (!in.empty()) return scan::read_scan_csv(in);
    const synth::SyntheticFamily fam = load_family(family);
    const scan::ParamGrid g = family_grid(fam, grid);
    require_inside(fam, g);
    return scan::scan(g, scan::ScanSource::from_family(fam));
}

scan::HamiltonianField load_field(const std::string& in, const std::string& family) {
    if (in.empty() == family.empty()) throw usage("give exactly one of --in and --family");
    if (!in.empty()) return scan::interpolated_field(scan::read_scan_csv(in));
    return scan::family_field(load_family(family));
}

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

}  // namespace

fs::path output_root() {
    const char* env = std::getenv("PTLAB_OUTPUT_ROOT");
    return env && *env ? fs::path(env) : fs::current_path();
}

int cmd_synth(const SynthArgs& a, Streams io) {
    if (a.family.empty()) throw usage("synth needs --family");
    if (a.grid.empty() == a.point.empty()) throw usage("synth needs exactly one of --grid and --point");
    if (!(a.sigma >= 0.0)) throw usage("--sigma must be >= 0");
    if (!(a.span > 0.0) || !(a.step > 0.0) || a.span / a.step > 1e7)
        throw usage("need span > 0, step > 0 and span/step <= 1e7");
    check_jobs(a.jobs);
    const synth::SyntheticFamily fam = load_family(a.family);
    scan::ParamGrid grid;
    if (!a.point.empty()) {
        const auto [s, d] = parse_pair(a.point, "--point");
        grid = scan::ParamGrid::point(s, d);
    } else {
        grid = scan::ParamGrid::parse(a.grid);
    }
    require_inside(fam, grid);
    const fs::path dir = resolve_dir(a.out);

    const json cfg = {{"command", "synth"}, {"family", family_identity(fam)}, {"grid", grid.str()},
                      {"sigma", a.sigma},   {"seed", a.seed},                  {"span", a.span},
                      {"step", a.step}};
    const std::string hash = io::config_hash(cfg);

    const std::size_t n = grid.size(), nd = grid.nd();
    auto name = [](std::size_t k) {
        char buf[48];
        std::snprintf(buf, sizeof buf, "spectrum_%06zu.csv", k);
        return std::string(buf);
    };
    try {
        scan::parallel_for(n, a.jobs, [&](std::size_t k) {
            const double s = grid.s_at(k / nd), d = grid.delta_at(k % nd);
            synth::Spectrum sp =
                fam.spectrum_at(s, d, {a.sigma, synth::split_seed(a.seed, k)}, a.span, a.step);
            sp.meta.seed = synth::split_seed(a.seed, k);
            io::write_spectrum(dir / name(k), sp, hash);
        });
    } catch (...) {
        std::error_code ec;
        for (std::size_t k = 0; k < n; ++k) {
            fs::remove(dir / name(k), ec);
            fs::remove(io::sidecar_path(dir / name(k)), ec);
        }
        throw;
    }

    json files = json::array();
    for (std::size_t k = 0; k < n; ++k) {
        const fs::path csv = name(k);
        files.push_back({{"csv", csv.string()},
                         {"sidecar", io::sidecar_path(csv).string()},
                         {"s_mm", grid.s_at(k / nd)},
                         {"delta_mm", grid.delta_at(k % nd)},
                         {"i", k / nd},
                         {"j", k % nd},
                         {"seed", synth::split_seed(a.seed, k)}});
    }
    const json manifest = {{"schema_version", io::kSchemaVersion},
                           {"config_hash", hash},
                           {"command", "synth"},
                           {"family", fam.preset().name},
                           {"B_mT", fam.preset().B_mT},
                           {"grid", grid.str()},
                           {"sigma", a.sigma},
                           {"seed", a.seed},
                           {"span_MHz", a.span},
                           {"step_MHz", a.step},
                           {"files", files}};
    io::write_text(dir / "manifest.json", io::json_text(manifest));
    io.out << "wrote " << n << " spectra and manifest.json to " << dir.string() << "\n";
    return kOk;
}

int cmd_fit(const FitArgs& a, Streams io) {
    std::vector<fs::path> inputs;
    if (!a.manifest.empty())
        for (const auto& e : read_manifest(a.manifest).files) inputs.push_back(e.csv);
    for (const auto& f : a.inputs) inputs.emplace_back(f);
    if (inputs.empty()) throw usage("fit needs input spectra (--manifest or --in)");
    check_jobs(a.jobs);
    const fit::FitConfig cfg = to_fit_config(a);
    const fs::path dir = resolve_dir(a.out);

    json in_list = json::array();
    for (const auto& p : inputs) in_list.push_back(p.string());
    const std::string hash = io::config_hash({{"command", "fit"}, {"inputs", in_list}, {"fit", fit_config_json(cfg)}});

    struct Outcome {
        std::optional<scan::ScanPoint> point;
        std::string error;
    };
    std::vector<Outcome> results(inputs.size());
    scan::parallel_for(inputs.size(), a.jobs, [&](std::size_t k) {
        Outcome& o = results[k];
        std::optional<synth::Spectrum> sp;
        try {
            sp = io::read_spectrum(inputs[k]);
            const fit::FitResult r = fit::fit_spectrum(*sp, cfg);
            scan::ScanPoint pt = scan::evaluate_point(sp->meta.s_mm, sp->meta.delta_mm, r.H);
            pt.tau = r.tau;
            pt.residual_rms = r.residual_rms;
            json j = io::fit_result_to_json(r);
            j["schema_version"] = io::kSchemaVersion;
            j["config_hash"] = hash;
            j["source"] = inputs[k].filename().string();
            j["s_mm"] = sp->meta.s_mm;
            j["delta_mm"] = sp->meta.delta_mm;
            fs::path out = dir / inputs[k].filename();
            out.replace_extension(".fit.json");
            io::write_text(out, io::json_text(j));
            o.point = pt;
        } catch (const Error& e) {
            o.error = e.what();
            if (sp) {
                scan::ScanPoint pt;
                pt.s = sp->meta.s_mm;
                pt.delta = sp->meta.delta_mm;
                pt.ok = false;
                pt.status = std::string(errc_name(e.code()));
                o.point = pt;
            }
        }
    });

    std::vector<scan::ScanPoint> pts;
    std::size_t failed = 0;
    for (std::size_t k = 0; k < inputs.size(); ++k) {
        if (!results[k].error.empty()) {
            ++failed;
            io.err << "fit: " << inputs[k].string() << ": " << results[k].error << "\n";
        }
        if (results[k].point) pts.push_back(*results[k].point);
    }
    io::write_text(dir / "summary.csv", scan::points_csv(pts, hash, scan::Provenance::fitted));
    const double rate = static_cast<double>(failed) / static_cast<double>(inputs.size());
    io.out << "fitted " << inputs.size() - failed << " of " << inputs.size() << " spectra; summary.csv in "
           << dir.string() << "\n";
    if (rate > a.max_failure_rate) {
        io.err << "fit: failure rate " << rate << " exceeds " << a.max_failure_rate << "\n";
        return kNumerical;
    }
    return kOk;
}

int cmd_analyze_scan(const ScanArgs& a, Streams io) {
    if (a.family.empty() == a.manifest.empty()) throw usage("give exactly one of --family and --manifest");
    check_jobs(a.jobs);
    scan::ScanOptions opts;
    opts.jobs = a.jobs;
    opts.max_failure_rate = a.fit.max_failure_rate;
    json cfg = {{"command", "analyze scan"}};
    scan::ScanResult sr;
    if (!a.family.empty()) {
        const synth::SyntheticFamily fam = load_family(a.family);
        const scan::ParamGrid g = family_grid(fam, a.grid);
        require_inside(fam, g);
        const fs::path out = resolve_file(a.out, "scan.csv");
        cfg["family"] = family_identity(fam);
        cfg["grid"] = g.str();
        sr = scan::scan(g, scan::ScanSource::from_family(fam), opts);
        io::write_text(out, scan::scan_csv(sr, io::config_hash(cfg)));
        io.out << "scanned " << sr.points.size() << " points -> " << out.string() << "\n";
        return kOk;
    }
    const Manifest m = read_manifest(a.manifest);
    opts.fit = to_fit_config(a.fit);
    const fs::path out = resolve_file(a.out, "scan.csv");
    std::map<std::pair<std::size_t, std::size_t>, fs::path> index;
    for (const auto& e : m.files) index[{e.i, e.j}] = e.csv;
    const scan::ParamGrid g = m.grid;
    auto loader = [&index, g](double s, double d) {
        const auto i = static_cast<std::size_t>(std::llround((s - g.s_min) / g.s_step));
        const auto j = static_cast<std::size_t>(std::llround((d - g.delta_min) / g.delta_step));
        const auto it = index.find({i, j});
        if (it == index.end()) throw Error(Errc::io_error, "no spectrum listed for grid point " + std::to_string(i) + "," + std::to_string(j));
        return io::read_spectrum(it->second);
    };
    cfg["manifest"] = a.manifest;
    cfg["fit"] = fit_config_json(opts.fit);
    sr = scan::scan(g, scan::ScanSource::from_spectra(loader), opts);
    io::write_text(out, scan::scan_csv(sr, io::config_hash(cfg)));
    io.out << "scanned " << sr.points.size() << " points (" << sr.failures() << " failed) -> " << out.string() << "\n";
    return kOk;
}

int cmd_analyze_ep(const EpArgs& a, Streams io) {
    const fs::path out = resolve_file(a.out, "ep.json");
    const scan::ScanResult sr = load_scan(a.in, a.family, a.grid);
    const scan::EpLocation loc = scan::locate_ep(sr);
    json j = scan::to_json(loc);
    j["config_hash"] = io::config_hash({{"command", "analyze ep"}, {"in", a.in}, {"family", a.family}, {"grid", sr.grid.str()}});
    io::write_text(out, io::json_text(j));
    io.out << "EP at (s, delta) = (" << fmt("%.4f", loc.s) << " +- " << fmt("%.2g", loc.s_uncertainty) << ", "
           << fmt("%.4f", loc.delta) << " +- " << fmt("%.2g", loc.delta_uncertainty) << ") mm\n";
    return kOk;
}

int cmd_analyze_curve(const CurveArgs& a, Streams io) {
    const fs::path out = resolve_file(a.out, "trace.json");
    if (a.direction != 1 && a.direction != -1) throw usage("--direction must be 1 or -1");
    if (!(a.step > 0.0) || a.eps_curve < 0.0) throw usage("--step must be > 0 and --eps-curve >= 0");
    const scan::ScanResult sr = load_scan(a.in, a.family, a.grid);
    const scan::HamiltonianField field = load_field(a.in, a.family);
    std::pair<double, double> start;
    if (!a.start.empty()) {
        start = parse_pair(a.start, "--start");
    } else {
        const scan::EpLocation loc = scan::locate_ep(sr);
        start = {loc.s, loc.delta};
    }
    scan::CurveOptions opts = sr.provenance == scan::Provenance::fitted ? scan::fitted_curve_options() : scan::CurveOptions{};
    opts.step = a.step;
    if (a.eps_curve > 0.0) opts.eps_curve = a.eps_curve;
    opts.direction = a.direction;
    const scan::CurveTrace tr = scan::trace_pt_curve(field, start, opts);
    json j = scan::to_json(tr);
    j["provenance"] = scan::provenance_name(sr.provenance);
    j["config_hash"] = io::config_hash({{"command", "analyze curve"},
                                        {"in", a.in},
                                        {"family", a.family},
                                        {"start", {start.first, start.second}},
                                        {"step", opts.step},
                                        {"eps_curve", opts.eps_curve},
                                        {"direction", opts.direction}});
    io::write_text(out, io::json_text(j));
    io.out << "traced " << tr.points.size() << " points";
    if (tr.ep_index >= 0) {
        const auto& p = tr.points[static_cast<std::size_t>(tr.ep_index)];
        io.out << "; EP index " << tr.ep_index << " at (" << fmt("%.4f", p.s) << ", " << fmt("%.4f", p.delta) << ") mm";
    }
    io.out << " -> " << out.string() << "\n";
    if (tr.truncated) {
        io.err << "curve: trace truncated: " << tr.truncation_reason << "\n";
        return kNumerical;
    }
    return kOk;
}

int cmd_analyze_pt(const PtArgs& a, Streams io) {
    if (a.curve.empty()) throw usage("pt needs --curve");
    if (a.offset_mode != "local" && a.offset_mode != "global") throw usage("--offset-mode must be local or global");
    const fs::path out = resolve_file(a.out, "pt.csv");
    const scan::CurveTrace tr = scan::curve_from_json(io::read_json(a.curve));
    if (tr.points.empty()) throw Error(Errc::parse_error, a.curve + ": trace has no points");

    PtAnalysisOptions opts;
    opts.tol.eps_cross = a.eps_cross;
    opts.tol.eps_pt = a.eps_pt;
    opts.phase_tol = a.phase_tol;
    if (a.offset_mode == "global") {
        const std::size_t ref = tr.ep_index >= 0 ? static_cast<std::size_t>(tr.ep_index) : 0;
        opts.global_offset = mean_half_width(tr.points[ref].H);
    }
    const std::string hash = io::config_hash({{"command", "analyze pt"},
                                              {"curve", a.curve},
                                              {"offset_mode", a.offset_mode},
                                              {"eps_cross", a.eps_cross},
                                              {"eps_pt", a.eps_pt},
                                              {"phase_tol", a.phase_tol}});

    std::string csv = io::provenance_line(hash) + "\n" +
                      "index,s_mm,delta_mm,offset,tau,phi0,phi,A,B,C,D,residual,phase,commutator_norm,"
                      "antilinear_residual,pt_overlap1,pt_overlap2,status\n";
    double max_res = 0.0, max_comm = 0.0;
    std::size_t failed = 0;
    int flips = 0;
    long flip_index = -1, last_index = -1, first_exceptional = -1;
    std::optional<PtPhase> last;
    for (std::size_t k = 0; k < tr.points.size(); ++k) {
        const auto& p = tr.points[k];
        using io::format_double;
        csv += std::to_string(k) + "," + format_double(p.s) + "," + format_double(p.delta) + ",";
        try {
            const PTReport r = pt_analysis(p.H, opts);
            for (double v : {r.offset, r.tau, r.phi0, r.phi, r.form.A, r.form.B, r.form.C, r.form.Dpt, r.form.residual})
                csv += format_double(v) + ",";
            csv += std::string(pt_phase_name(r.phase)) + "," + format_double(r.commutator_norm) + "," +
                   format_double(r.antilinear_residual) + "," + format_double(r.eigvec_pt_overlap[0]) + "," +
                   format_double(r.eigvec_pt_overlap[1]) + ",ok\n";
            max_res = std::max(max_res, r.form.residual);
            max_comm = std::max(max_comm, r.commutator_norm);
            const long kk = static_cast<long>(k);
            if (r.phase == PtPhase::exceptional) {
                if (first_exceptional < 0 || first_exceptional < last_index) first_exceptional = kk;
                continue;
            }
            if (last && *last != r.phase) {
                ++flips;
                flip_index = first_exceptional > last_index ? first_exceptional : kk;
            }
            last = r.phase;
            last_index = kk;
        } catch (const Error& e) {
            ++failed;
            for (int c = 0; c < 14; ++c) csv += "nan,";
            csv += std::string(errc_name(e.code())) + "\n";
            io.err << "pt: point " << k << " (" << p.s << ", " << p.delta << "): " << e.what() << "\n";
        }
    }
    io::write_text(out, csv);
    const json summary = {{"points", tr.points.size()}, {"failed", failed},          {"max_residual", max_res},
                          {"max_commutator_norm", max_comm}, {"phase_flips", flips}, {"flip_index", flip_index},
                          {"ep_index", tr.ep_index},      {"output", out.string()}};
    io.out << summary.dump() << "\n";
    return failed ? kNumerical : kOk;
}

int cmd_analyze_braid(const BraidArgs& a, Streams io) {
    if (a.shape != "circle" && a.shape != "square") throw usage("--shape must be circle or square");
    if (!(a.radius > 0.0) || a.points < 4 || a.turns < 1) throw usage("need --radius > 0, --points >= 4, --turns >= 1");
    const fs::path out = resolve_file(a.out, "braid.json");
    const scan::HamiltonianField field = load_field(a.in, a.family);
    std::pair<double, double> center;
    if (a.center == "ep") {
        const scan::EpLocation loc = scan::locate_ep(load_scan(a.in, a.family, a.grid));
        center = {loc.s, loc.delta};
    } else {
        center = parse_pair(a.center, "--center");
    }
    const scan::Loop loop = a.shape == "circle" ? scan::circle_loop(center, a.radius, a.points, a.turns)
                                                : scan::square_loop(center, a.radius, a.points, a.turns);
    scan::BraidOptions opts;
    opts.min_points = a.points * a.turns;
    const scan::BraidTrace bt = scan::braid(loop, field, opts);
    json j = scan::to_json(bt);
    j["center"] = {center.first, center.second};
    j["config_hash"] = io::config_hash({{"command", "analyze braid"},
                                        {"in", a.in},
                                        {"family", a.family},
                                        {"center", {center.first, center.second}},
                                        {"radius", a.radius},
                                        {"shape", a.shape},
                                        {"points", a.points},
                                        {"turns", a.turns}});
    io::write_text(out, io::json_text(j));
    io.out << "permutation=" << scan::permutation_name(bt.permutation) << " -> " << out.string() << "\n";
    return kOk;
}

int cmd_family(const FamilyArgs& a, Streams io) {
    if (a.list) {
        for (const auto& n : synth::builtin_preset_names()) io.out << n << "\n";
        return kOk;
    }
    if (a.name.empty()) throw usage("family needs --name or --list");
    json j = synth::builtin_preset(a.name);
    j["config_hash"] = io::config_hash({{"command", "family"}, {"name", a.name}});
    if (a.out.empty()) {
        io.out << io::json_text(j);
        return kOk;
    }
    io::write_text(resolve_file(a.out, ""), io::json_text(j));
    return kOk;
}

}  // namespace ptlab::cli
