#include "ptlab/scan/grid.hpp"

#include <cmath>

#include "ptlab/core/error.hpp"
#include "ptlab/io/csv.hpp"
#include "ptlab/synth/family.hpp"

namespace ptlab::scan {

namespace {

std::size_t count(double lo, double hi, double step) {
    return static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
}

void parse_axis(std::string_view text, double& lo, double& hi, double& step) {
    double v[3];
    for (int k = 0; k < 3; ++k) {
        const std::size_t colon = text.find(':');
        if ((k < 2) == (colon == std::string_view::npos))
            throw Error(Errc::invalid_argument, "grid axis must read min:max:step");
        try {
            v[k] = io::parse_double(text.substr(0, colon));
        } catch (const Error&) {
            throw Error(Errc::invalid_argument, "grid axis must read min:max:step");
        }
        if (colon != std::string_view::npos) text.remove_prefix(colon + 1);
    }
    lo = v[0];
    hi = v[1];
    step = v[2];
}

}  // namespace

ParamGrid ParamGrid::parse(std::string_view text) {
    const std::size_t x = text.find('x');
    if (x == std::string_view::npos || text.find('x', x + 1) != std::string_view::npos)
        throw Error(Errc::invalid_argument, "grid must read smin:smax:sstep x dmin:dmax:dstep");
    ParamGrid g;
    parse_axis(text.substr(0, x), g.s_min, g.s_max, g.s_step);
    parse_axis(text.substr(x + 1), g.delta_min, g.delta_max, g.delta_step);
    g.validate();
    return g;
}

ParamGrid ParamGrid::point(double s, double delta) {
    ParamGrid g;
    g.s_min = g.s_max = s;
    g.delta_min = g.delta_max = delta;
    return g;
}

ParamGrid ParamGrid::centered(double s, double delta, double half_width, double step) {
    ParamGrid g;
    g.s_min = s - half_width;
    g.s_max = s + half_width;
    g.delta_min = delta - half_width;
    g.delta_max = delta + half_width;
    g.s_step = g.delta_step = step;
    g.validate();
    return g;
}

void ParamGrid::validate() const {
    for (double v : {s_min, s_max, s_step, delta_min, delta_max, delta_step})
        if (!std::isfinite(v)) throw Error(Errc::invalid_argument, "grid values must be finite");
    if (!(s_step > 0.0) || !(delta_step > 0.0)) throw Error(Errc::invalid_argument, "grid steps must be > 0");
    if (!(s_min <= s_max) || !(delta_min <= delta_max)) throw Error(Errc::invalid_argument, "grid bounds must be ordered");
    const double ns_f = (s_max - s_min) / s_step + 1.0;
    const double nd_f = (delta_max - delta_min) / delta_step + 1.0;
    if (ns_f * nd_f > static_cast<double>(kMaxGridPoints))
        throw Error(Errc::invalid_argument, "grid exceeds 1e7 points");
}

std::size_t ParamGrid::ns() const { return count(s_min, s_max, s_step); }
std::size_t ParamGrid::nd() const { return count(delta_min, delta_max, delta_step); }

std::string ParamGrid::str() const {
    using io::format_double;
    return format_double(s_min) + ":" + format_double(s_max) + ":" + format_double(s_step) + "x" +
           format_double(delta_min) + ":" + format_double(delta_max) + ":" + format_double(delta_step);
}

HamiltonianField family_field(const synth::SyntheticFamily& fam) {
    const auto& p = fam.preset();
    return {[fam](double s, double delta) { return fam.H_at(s, delta); },
            {p.s_min, p.s_max, p.delta_min, p.delta_max}};
}

}  // namespace ptlab::scan
