#include <exception>
#include <fstream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "commands.hpp"
#include "ptlab/cli/cli.hpp"
#include "ptlab/core/error.hpp"

namespace ptlab::cli {

namespace {

void add_fit_options(CLI::App* c, FitArgs& f) {
    c->add_option("--mask", f.mask, "S entries to fit, e.g. S11 or S11,S22")->capture_default_str();
    c->add_option("--n-starts", f.n_starts, "multi-start count")->capture_default_str();
    c->add_option("--max-iterations", f.max_iterations)->capture_default_str();
    c->add_option("--gradient-tolerance", f.gradient_tolerance)->capture_default_str();
    c->add_option("--step-tolerance", f.step_tolerance)->capture_default_str();
    c->add_option("--damping-init", f.damping_init)->capture_default_str();
    c->add_option("--seed", f.seed, "seed of the multi-start perturbations")->capture_default_str();
    c->add_option("--jacobian", f.jacobian, "analytic or fd")->capture_default_str();
    c->add_flag("--no-early-stop", f.no_early_stop, "always run all starts");
    c->add_option("--max-failure-rate", f.max_failure_rate)->capture_default_str();
}

struct Parsed {
    SynthArgs synth;
    FitArgs fit;
    ScanArgs scan;
    EpArgs ep;
    CurveArgs curve;
    PtArgs pt;
    BraidArgs braid;
    FamilyArgs family;
    std::string config;
};

struct Commands {
    CLI::App app{"ptlab - two-mode effective Hamiltonian lab: PT symmetry and exceptional points", "ptlab"};
    CLI::App* synth = nullptr;
    CLI::App* fit = nullptr;
    CLI::App* analyze = nullptr;
    CLI::App* scan = nullptr;
    CLI::App* ep = nullptr;
    CLI::App* curve = nullptr;
    CLI::App* pt = nullptr;
    CLI::App* braid = nullptr;
    CLI::App* family = nullptr;

    explicit Commands(Parsed& p) {
        app.require_subcommand(1);
        auto config = [&p](CLI::App* c) {
            c->add_option("--config", p.config, "JSON file with option values; flags win");
        };

        synth = app.add_subcommand("synth", "generate spectra of a synthetic family");
        synth->add_option("--family", p.synth.family, "preset name (b38, b0) or preset JSON file");
        synth->add_option("--grid", p.synth.grid, "smin:smax:sstep x dmin:dmax:dstep [mm]");
        synth->add_option("--point", p.synth.point, "single point s,delta [mm]");
        synth->add_option("--sigma", p.synth.sigma, "noise per real component")->capture_default_str();
        synth->add_option("--seed", p.synth.seed)->capture_default_str();
        synth->add_option("--span", p.synth.span, "frequency window [MHz]")->capture_default_str();
        synth->add_option("--step", p.synth.step, "frequency step [MHz]")->capture_default_str();
        synth->add_option("--out", p.synth.out, "existing output directory");
        synth->add_option("--jobs", p.synth.jobs, "worker threads (0: all processors)");
        config(synth);

        fit = app.add_subcommand("fit", "fit spectra to the two-mode S-matrix model");
        fit->add_option("--manifest", p.fit.manifest, "manifest.json written by synth");
        fit->add_option("--in", p.fit.inputs, "spectrum CSV files");
        fit->add_option("--out", p.fit.out, "existing output directory");
        fit->add_option("--jobs", p.fit.jobs);
        add_fit_options(fit, p.fit);
        config(fit);

        analyze = app.add_subcommand("analyze", "parameter-plane analysis");
        analyze->require_subcommand(1);

        scan = analyze->add_subcommand("scan", "eigenvalue-difference map over a grid");
        scan->add_option("--family", p.scan.family);
        scan->add_option("--manifest", p.scan.manifest, "fit every spectrum of a synth manifest");
        scan->add_option("--grid", p.scan.grid, "default: family bounds at 0.01 mm");
        scan->add_option("--out", p.scan.out, "CSV file (default scan.csv)");
        scan->add_option("--jobs", p.scan.jobs);
        add_fit_options(scan, p.scan.fit);
        config(scan);

        ep = analyze->add_subcommand("ep", "locate the exceptional point");
        ep->add_option("--in", p.ep.in, "scan or fit summary CSV");
        ep->add_option("--family", p.ep.family);
        ep->add_option("--grid", p.ep.grid);
        ep->add_option("--out", p.ep.out, "JSON file (default ep.json)");
        config(ep);

        curve = analyze->add_subcommand("curve", "trace the Re h . Im h = 0 curve");
        curve->add_option("--in", p.curve.in, "scan or fit summary CSV");
        curve->add_option("--family", p.curve.family);
        curve->add_option("--grid", p.curve.grid, "grid used to locate the start point");
        curve->add_option("--start", p.curve.start, "s,delta [mm]; default: the located EP");
        curve->add_option("--step", p.curve.step, "arc length per step [mm]")->capture_default_str();
        curve->add_option("--eps-curve", p.curve.eps_curve, "relative |cross| tolerance");
        curve->add_option("--direction", p.curve.direction, "+1 or -1")->capture_default_str();
        curve->add_option("--out", p.curve.out, "JSON file (default trace.json)");
        config(curve);

        pt = analyze->add_subcommand("pt", "PT normal form along a traced curve");
        pt->add_option("--curve", p.pt.curve, "trace JSON from analyze curve");
        pt->add_option("--offset-mode", p.pt.offset_mode, "local or global (EP point offset)")->capture_default_str();
        pt->add_option("--eps-cross", p.pt.eps_cross)->capture_default_str();
        pt->add_option("--eps-pt", p.pt.eps_pt)->capture_default_str();
        pt->add_option("--phase-tol", p.pt.phase_tol)->capture_default_str();
        pt->add_option("--out", p.pt.out, "CSV file (default pt.csv)");
        config(pt);

        braid = analyze->add_subcommand("braid", "track eigenvalues around a closed loop");
        braid->add_option("--in", p.braid.in, "scan or fit summary CSV");
        braid->add_option("--family", p.braid.family);
        braid->add_option("--grid", p.braid.grid, "grid used to locate the EP for --center ep");
        braid->add_option("--center", p.braid.center, "ep or s,delta [mm]")->capture_default_str();
        braid->add_option("--radius", p.braid.radius, "radius or half width [mm]")->capture_default_str();
        braid->add_option("--shape", p.braid.shape, "circle or square")->capture_default_str();
        braid->add_option("--points", p.braid.points)->capture_default_str();
        braid->add_option("--turns", p.braid.turns)->capture_default_str();
        braid->add_option("--out", p.braid.out, "JSON file (default braid.json)");
        config(braid);

        family = app.add_subcommand("family", "export a built-in family preset as JSON");
        family->add_option("--name", p.family.name);
        family->add_option("--out", p.family.out, "JSON file (default: stdout)");
        family->add_flag("--list", p.family.list, "list built-in presets");
        config(family);
    }

    CLI::App* deepest() {
        CLI::App* cur = &app;
        while (true) {
            const auto subs = cur->get_subcommands();
            if (subs.empty()) return cur;
            cur = subs.front();
        }
    }
};

int parse_with(Commands& c, const std::vector<std::string>& args, std::ostream& out, std::ostream& err, bool& done) {
    std::vector<std::string> argv_store{"ptlab"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& s : argv_store) argv.push_back(s.c_str());
    done = false;
    try {
        c.app.clear();
        c.app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        done = true;
        const int code = c.app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }
    return kOk;
}

// Appends config-file values for options the user did not give.
std::vector<std::string> config_args(CLI::App* target, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::invalid_argument, "cannot read config file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::invalid_argument, "config file " + path + ": " + e.what());
    }
    if (!j.is_object()) throw Error(Errc::invalid_argument, "config file must hold a JSON object");
    std::vector<std::string> extra;
    for (const auto& [key, value] : j.items()) {
        CLI::Option* opt = target->get_option_no_throw("--" + key);
        if (!opt || key == "config") throw Error(Errc::invalid_argument, "unknown config key '" + key + "'");
        if (opt->count() > 0) continue;
        auto scalar = [&](const nlohmann::json& v) -> std::string {
            if (v.is_string()) return v.get<std::string>();
            if (v.is_number() || v.is_boolean()) return v.dump();
            throw Error(Errc::invalid_argument, "config key '" + key + "' must be a scalar or a list of scalars");
        };
        if (opt->get_type_size() == 0) {
            if (!value.is_boolean()) throw Error(Errc::invalid_argument, "config key '" + key + "' must be a boolean");
            if (value.get<bool>()) extra.push_back("--" + key);
            continue;
        }
        if (value.is_array()) {
            for (const auto& v : value) {
                extra.push_back("--" + key);
                extra.push_back(scalar(v));
            }
        } else {
            extra.push_back("--" + key);
            extra.push_back(scalar(value));
        }
    }
    return extra;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        Parsed p;
        auto c = std::make_unique<Commands>(p);
        bool done = false;
        int code = parse_with(*c, args, out, err, done);
        if (done) return code;

        if (!p.config.empty()) {
            std::vector<std::string> merged = args;
            const auto extra = config_args(c->deepest(), p.config);
            merged.insert(merged.end(), extra.begin(), extra.end());
            p = Parsed{};
            c = std::make_unique<Commands>(p);
            code = parse_with(*c, merged, out, err, done);
            if (done) return code;
        }

        const Streams io{out, err};
        CLI::App* cmd = c->deepest();
        if (cmd == c->synth) return cmd_synth(p.synth, io);
        if (cmd == c->fit) return cmd_fit(p.fit, io);
        if (cmd == c->scan) return cmd_analyze_scan(p.scan, io);
        if (cmd == c->ep) return cmd_analyze_ep(p.ep, io);
        if (cmd == c->curve) return cmd_analyze_curve(p.curve, io);
        if (cmd == c->pt) return cmd_analyze_pt(p.pt, io);
        if (cmd == c->braid) return cmd_analyze_braid(p.braid, io);
        if (cmd == c->family) return cmd_family(p.family, io);
        err << c->app.help();
        return kUsage;
    } catch (const Error& e) {
        err << "ptlab: " << e.what() << "\n";
        return errc_exit_class(e.code());
    } catch (const std::exception& e) {
        err << "ptlab: " << e.what() << "\n";
        return kNumerical;
    }
}

}  // namespace ptlab::cli
