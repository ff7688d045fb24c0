#include "ptlab/scan/scan_io.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "ptlab/core/error.hpp"
#include "ptlab/core/serialize.hpp"
#include "ptlab/io/csv.hpp"

namespace ptlab::scan {

using io::format_double;

namespace {

constexpr const char* kScanHeader =
    "s_mm,delta_mm,f1,g1,f2,g2,reh2,imh2,cross,tau,status,re_e1,im_e1,re_e2,im_e2,re_h1,im_h1,re_h2,im_h2,"
    "residual_rms";

std::vector<double> distinct(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::vector<double> out;
    for (double x : v)
        if (out.empty() || std::abs(x - out.back()) > 1e-9 * (1.0 + std::abs(x))) out.push_back(x);
    return out;
}

std::size_t nearest(const std::vector<double>& axis, double x) {
    const auto it = std::lower_bound(axis.begin(), axis.end(), x - 1e-9 * (1.0 + std::abs(x)));
    return static_cast<std::size_t>(it - axis.begin());
}

double uniform_step(const std::vector<double>& axis, std::string_view origin, const char* name) {
    if (axis.size() < 2) return kDefaultGridStep;
    const double step = (axis.back() - axis.front()) / static_cast<double>(axis.size() - 1);
    for (std::size_t k = 1; k < axis.size(); ++k)
        if (std::abs(axis[k] - axis[k - 1] - step) > 1e-6 * step)
            throw Error(Errc::parse_error, std::string(origin) + ": " + name + " values do not form a uniform grid");
    return step;
}

nlohmann::json curve_point_json(const CurvePoint& p, double h1_ep2) {
    const double h1_2 = std::norm(p.H.h1());
    return {{"s_mm", p.s},
            {"delta_mm", p.delta},
            {"H", p.H},
            {"reh2", p.D.reh2},
            {"imh2", p.D.imh2},
            {"cross", p.D.cross},
            {"rel_cross", p.rel_cross},
            {"tau", p.tau},
            {"reh2_norm", p.D.reh2 / h1_2},
            {"imh2_norm", p.D.imh2 / h1_2},
            {"cross_norm", p.D.cross / h1_2},
            {"reh2_norm_ep", p.D.reh2 / h1_ep2},
            {"imh2_norm_ep", p.D.imh2 / h1_ep2},
            {"cross_norm_ep", p.D.cross / h1_ep2}};
}

}  // namespace

std::string scan_csv(const ScanResult& sr, std::string_view config_hash) {
    return points_csv(sr.points, config_hash, sr.provenance, sr.grid.str());
}

std::string points_csv(const std::vector<ScanPoint>& points, std::string_view config_hash, Provenance provenance,
                       std::string_view grid) {
    std::string out = io::provenance_line(config_hash) + " provenance=" + provenance_name(provenance);
    if (!grid.empty()) out += " grid=" + std::string(grid);
    out += "\n";
    out += kScanHeader;
    out += "\n";
    for (const ScanPoint& p : points) {
        std::vector<std::string> f{format_double(p.s), format_double(p.delta)};
        if (p.ok) {
            for (double v : {p.E.position(1), p.E.width(1), p.E.position(2), p.E.width(2), p.D.reh2, p.D.imh2,
                             p.D.cross, p.tau})
                f.push_back(format_double(v));
            f.push_back("ok");
            for (cplx z : {p.H.e1(), p.H.e2(), p.H.h1(), p.H.h2()}) {
                f.push_back(format_double(z.real()));
                f.push_back(format_double(z.imag()));
            }
            f.push_back(format_double(p.residual_rms));
        } else {
            for (int k = 0; k < 8; ++k) f.push_back("nan");
            f.push_back(p.status);
            for (int k = 0; k < 9; ++k) f.push_back("nan");
        }
        for (std::size_t k = 0; k < f.size(); ++k) {
            if (k) out += ',';
            out += f[k];
        }
        out += '\n';
    }
    return out;
}

ScanResult parse_scan_csv(std::string_view text, std::string_view origin) {
    const io::CsvTable t = io::parse_csv(text, origin);
    if (t.rows.empty()) throw Error(Errc::parse_error, std::string(origin) + ": table has no rows");
    const std::size_t cs = t.column("s_mm"), cd = t.column("delta_mm"), cst = t.column("status");
    const char* hnames[8] = {"re_e1", "im_e1", "re_e2", "im_e2", "re_h1", "im_h1", "re_h2", "im_h2"};
    std::size_t ch[8];
    for (int k = 0; k < 8; ++k) ch[k] = t.column(hnames[k]);
    const std::size_t ctau = t.column("tau");
    const auto crms = std::find(t.header.begin(), t.header.end(), "residual_rms");

    std::vector<double> ss, dd;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        ss.push_back(t.number(r, cs));
        dd.push_back(t.number(r, cd));
    }
    const std::vector<double> saxis = distinct(ss), daxis = distinct(dd);

    ScanResult sr;
    sr.grid.s_min = saxis.front();
    sr.grid.s_max = saxis.back();
    sr.grid.s_step = uniform_step(saxis, origin, "s");
    sr.grid.delta_min = daxis.front();
    sr.grid.delta_max = daxis.back();
    sr.grid.delta_step = uniform_step(daxis, origin, "delta");
    const auto it = t.meta.find("provenance");
    sr.provenance = it != t.meta.end() && it->second == "family-direct" ? Provenance::family_direct : Provenance::fitted;
    const std::size_t ns = saxis.size(), nd = daxis.size();
    sr.points.resize(ns * nd);
    for (std::size_t i = 0; i < ns; ++i) {
        for (std::size_t j = 0; j < nd; ++j) {
            ScanPoint& p = sr.points[i * nd + j];
            p.s = saxis[i];
            p.delta = daxis[j];
            p.ok = false;
            p.status = "missing";
        }
    }
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const std::size_t i = nearest(saxis, ss[r]), j = nearest(daxis, dd[r]);
        ScanPoint& p = sr.points[i * nd + j];
        const std::string& status = t.rows[r][cst];
        if (status != "ok") {
            p.status = status;
            continue;
        }
        auto z = [&](int k) { return cplx{t.number(r, ch[2 * k]), t.number(r, ch[2 * k + 1])}; };
        p = evaluate_point(ss[r], dd[r], EffHamiltonian::from_pauli(z(0), z(1), z(2), z(3)));
        p.tau = t.number(r, ctau);
        if (crms != t.header.end()) p.residual_rms = t.number(r, static_cast<std::size_t>(crms - t.header.begin()));
    }
    return sr;
}

ScanResult read_scan_csv(const std::string& path) { return parse_scan_csv(io::read_text(path), path); }

nlohmann::json to_json(const EpLocation& loc) {
    return {{"schema_version", io::kSchemaVersion},
            {"s_mm", loc.s},
            {"delta_mm", loc.delta},
            {"s_uncertainty_mm", loc.s_uncertainty},
            {"delta_uncertainty_mm", loc.delta_uncertainty},
            {"s_offset_mm", loc.s_offset},
            {"delta_offset_mm", loc.delta_offset},
            {"grid_index", {loc.i, loc.j}},
            {"abs_D", loc.abs_d},
            {"refined", loc.refined}};
}

nlohmann::json to_json(const CurveTrace& tr) {
    double h1_ep2 = 1.0;
    if (tr.ep_index >= 0) h1_ep2 = std::norm(tr.points[static_cast<std::size_t>(tr.ep_index)].H.h1());
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : tr.points) pts.push_back(curve_point_json(p, h1_ep2));
    return {{"schema_version", io::kSchemaVersion},
            {"ep_index", tr.ep_index},
            {"truncated", tr.truncated},
            {"truncation_reason", tr.truncation_reason},
            {"step_mm", tr.step},
            {"eps_curve", tr.eps_curve},
            {"points", pts}};
}

CurveTrace curve_from_json(const nlohmann::json& j) {
    try {
        CurveTrace tr;
        tr.ep_index = j.at("ep_index").get<long>();
        tr.truncated = j.value("truncated", false);
        tr.truncation_reason = j.value("truncation_reason", std::string{});
        tr.step = j.value("step_mm", 0.0);
        tr.eps_curve = j.value("eps_curve", 0.0);
        for (const auto& p : j.at("points")) {
            CurvePoint c;
            c.s = p.at("s_mm").get<double>();
            c.delta = p.at("delta_mm").get<double>();
            c.H = p.at("H").get<EffHamiltonian>();
            c.D = radicand(c.H);
            c.rel_cross = std::abs(c.D.cross) / c.D.scale();
            c.tau = p.at("tau").get<double>();
            tr.points.push_back(c);
        }
        if (tr.ep_index >= static_cast<long>(tr.points.size()))
            throw Error(Errc::parse_error, "curve ep_index beyond the point list");
        return tr;
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::parse_error, std::string("curve trace: ") + e.what());
    }
}

nlohmann::json to_json(const BraidTrace& tr) {
    nlohmann::json loop = nlohmann::json::array(), e1 = nlohmann::json::array(), e2 = nlohmann::json::array();
    for (const auto& p : tr.loop) loop.push_back({p.first, p.second});
    for (cplx z : tr.E1) e1.push_back(complex_to_json(z));
    for (cplx z : tr.E2) e2.push_back(complex_to_json(z));
    return {{"schema_version", io::kSchemaVersion},
            {"permutation", permutation_name(tr.permutation)},
            {"refinements", tr.refinements},
            {"loop", loop},
            {"E1", e1},
            {"E2", e2}};
}

}  // namespace ptlab::scan
