#include "ptlab/scan/curve.hpp"

#include <algorithm>
#include <cmath>

#include "ptlab/core/error.hpp"

namespace ptlab::scan {

namespace {

struct Vec {
    double s, d;
};

class Contour {
public:
    Contour(const HamiltonianField& f, const CurveOptions& o) : field_(f), opts_(o) {}

    double g(Vec x) const {
        const Radicand D = radicand(field_.eval(x.s, x.d));
        return D.cross / D.scale();
    }

    Vec grad(Vec x) const {
        const double h = 1e-6;
        auto at = [&](double s, double d) { return g({s, d}); };
        // One-sided near the boundary so evaluation stays inside the field.
        auto diff = [&](bool along_s) {
            const double lo = along_s ? field_.bounds.s_min : field_.bounds.delta_min;
            const double hi = along_s ? field_.bounds.s_max : field_.bounds.delta_max;
            const double c = along_s ? x.s : x.d;
            const double a = std::max(lo, c - h), b = std::min(hi, c + h);
            return along_s ? (at(b, x.d) - at(a, x.d)) / (b - a) : (at(x.s, b) - at(x.s, a)) / (b - a);
        };
        return {diff(true), diff(false)};
    }

    // Newton along the gradient. Returns false on divergence.
    bool correct(Vec& x) const {
        for (int it = 0; it < opts_.max_corrector_iterations; ++it) {
            if (!field_.bounds.contains(x.s, x.d)) return false;
            const double v = g(x);
            if (std::abs(v) <= 0.01 * opts_.eps_curve) return true;
            const Vec gr = grad(x);
            const double n2 = gr.s * gr.s + gr.d * gr.d;
            if (!(n2 > 0.0)) return false;
            x = {x.s - v * gr.s / n2, x.d - v * gr.d / n2};
        }
        return field_.bounds.contains(x.s, x.d) && std::abs(g(x)) <= opts_.eps_curve;
    }

    Vec tangent(Vec x) const {
        const Vec gr = grad(x);
        const double n = std::hypot(gr.s, gr.d);
        return {-gr.d / n, gr.s / n};
    }

    CurvePoint point(Vec x) const {
        CurvePoint p;
        p.s = x.s;
        p.delta = x.d;
        p.H = field_.eval(x.s, x.d);
        p.D = radicand(p.H);
        p.rel_cross = std::abs(p.D.cross) / p.D.scale();
        p.tau = gauge_tau(p.H);
        return p;
    }

    // Walks from x0 along +-tangent until the boundary. Returns false if the
    // corrector lost the contour.
    bool walk(Vec x0, Vec t0, std::vector<Vec>& out) const {
        Vec x = x0, t = t0;
        const Bounds& b = field_.bounds;
        while (static_cast<int>(out.size()) < opts_.max_points) {
            double h = opts_.step;
            // Shorten the last step so it lands on the boundary.
            auto limit = [&](double pos, double dir, double lo, double hi) {
                if (dir > 0.0) h = std::min(h, (hi - pos) / dir);
                if (dir < 0.0) h = std::min(h, (lo - pos) / dir);
            };
            limit(x.s, t.s, b.s_min, b.s_max);
            limit(x.d, t.d, b.delta_min, b.delta_max);
            if (h <= 1e-9 * opts_.step) return true;
            Vec y{x.s + h * t.s, x.d + h * t.d};
            y.s = std::clamp(y.s, b.s_min, b.s_max);
            y.d = std::clamp(y.d, b.delta_min, b.delta_max);
            if (!correct(y)) return h < opts_.step;  // a boundary-limited last step may correct outside
            out.push_back(y);
            Vec tn = tangent(y);
            if (tn.s * t.s + tn.d * t.d < 0.0) tn = {-tn.s, -tn.d};
            x = y;
            t = tn;
        }
        return true;
    }

    // Point on the contour between a and b where reh2 - imh2 = 0.
    Vec bisect_ep(Vec a, Vec b) const {
        auto split = [&](Vec x) {
            const Radicand D = radicand(field_.eval(x.s, x.d));
            return D.reh2 - D.imh2;
        };
        double fa = split(a);
        Vec m = a;
        for (int it = 0; it < 200; ++it) {
            m = {0.5 * (a.s + b.s), 0.5 * (a.d + b.d)};
            correct(m);
            const double fm = split(m);
            if (fm == 0.0) break;
            if ((fm > 0.0) == (fa > 0.0)) {
                a = m;
                fa = fm;
            } else {
                b = m;
            }
            if (std::hypot(a.s - b.s, a.d - b.d) <= 1e-15 * (1.0 + std::abs(m.s) + std::abs(m.d))) break;
        }
        return m;
    }

private:
    const HamiltonianField& field_;
    const CurveOptions& opts_;
};

}  // namespace

CurveOptions fitted_curve_options() {
    CurveOptions o;
    o.eps_curve = 1e-3;
    return o;
}

CurveTrace trace_pt_curve(const HamiltonianField& field, std::pair<double, double> start, const CurveOptions& opts) {
    if (!(opts.step > 0.0) || !(opts.eps_curve > 0.0) || opts.max_points < 1)
        throw Error(Errc::invalid_argument, "curve step, eps_curve and max_points must be positive");
    const Contour c(field, opts);
    Vec x0{start.first, start.second};
    if (!field.bounds.contains(x0.s, x0.d)) throw Error(Errc::out_of_bounds, "curve start outside the field");
    if (!c.correct(x0))
        throw Error(Errc::not_on_pt_curve, "start (" + std::to_string(start.first) + ", " +
                                               std::to_string(start.second) + ") cannot be moved onto cross = 0");

    Vec t0 = c.tangent(x0);
    if (opts.direction < 0) t0 = {-t0.s, -t0.d};
    std::vector<Vec> fwd, bwd;
    CurveTrace tr;
    tr.step = opts.step;
    tr.eps_curve = opts.eps_curve;
    if (!c.walk(x0, t0, fwd)) {
        tr.truncated = true;
        tr.truncation_reason = "contour lost after " + std::to_string(fwd.size()) + " forward points";
    }
    if (!c.walk(x0, {-t0.s, -t0.d}, bwd)) {
        tr.truncated = true;
        tr.truncation_reason = "contour lost after " + std::to_string(bwd.size()) + " backward points";
    }

    std::vector<Vec> all(bwd.rbegin(), bwd.rend());
    all.push_back(x0);
    all.insert(all.end(), fwd.begin(), fwd.end());
    if (all.size() > 1 && all.front().s > all.back().s) std::reverse(all.begin(), all.end());

    for (const Vec& v : all) tr.points.push_back(c.point(v));

    // Insert the crossing of reh2 and imh2; reuse a point that already sits on it.
    auto split = [](const CurvePoint& p) { return p.D.reh2 - p.D.imh2; };
    for (std::size_t k = 0; k < tr.points.size(); ++k) {
        if (split(tr.points[k]) == 0.0) {
            tr.ep_index = static_cast<long>(k);
            break;
        }
        if (k + 1 < tr.points.size() && (split(tr.points[k]) > 0.0) != (split(tr.points[k + 1]) > 0.0) &&
            split(tr.points[k + 1]) != 0.0) {
            const Vec m = c.bisect_ep({all[k].s, all[k].d}, {all[k + 1].s, all[k + 1].d});
            // a start placed at the crossing leaves a near-duplicate neighbour; replace it
            const double close = 1e-3 * opts.step;
            for (std::size_t n : {k, k + 1}) {
                if (std::hypot(all[n].s - m.s, all[n].d - m.d) <= close) {
                    tr.points[n] = c.point(m);
                    tr.ep_index = static_cast<long>(n);
                    return tr;
                }
            }
            tr.points.insert(tr.points.begin() + static_cast<long>(k) + 1, c.point(m));
            tr.ep_index = static_cast<long>(k) + 1;
            break;
        }
    }
    return tr;
}

CurveTrace trace_pt_curve(const ScanResult& scan, std::pair<double, double> start, const CurveOptions& opts) {
    return trace_pt_curve(interpolated_field(scan), start, opts);
}

}  // namespace ptlab::scan
