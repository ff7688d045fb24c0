#include "ptlab/scan/locate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "ptlab/core/error.hpp"

namespace ptlab::scan {

EpLocation locate_ep(const ScanResult& sr, double flat_tol) {
    const ParamGrid& g = sr.grid;
    const std::size_t ns = g.ns(), nd = g.nd();
    double dmin = std::numeric_limits<double>::infinity();
    double dmax = 0.0;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < ns; ++i) {
        for (std::size_t j = 0; j < nd; ++j) {
            const ScanPoint& p = sr.at(i, j);
            if (!p.ok) continue;
            const double a = std::abs(p.D.value());
            if (a < dmin) {
                dmin = a;
                bi = i;
                bj = j;
            }
            dmax = std::max(dmax, a);
        }
    }
    if (!std::isfinite(dmin)) throw Error(Errc::no_ep_found, "no successful grid points");
    if (!(dmax - dmin > flat_tol * dmax)) throw Error(Errc::no_ep_found, "|D| is flat over the grid");

    EpLocation loc;
    loc.i = bi;
    loc.j = bj;
    loc.abs_d = dmin;
    loc.s = g.s_at(bi);
    loc.delta = g.delta_at(bj);
    loc.s_uncertainty = g.s_step;
    loc.delta_uncertainty = g.delta_step;
    if (bi == 0 || bj == 0 || bi + 1 == ns || bj + 1 == nd)
        throw Error(Errc::ep_outside_window, "min |D| at grid edge (" + std::to_string(loc.s) + ", " +
                                                 std::to_string(loc.delta) + ") mm; EP likely outside the window");

    // q(x, y) = c0 + c1 x + c2 y + c3 x^2 + c4 x y + c5 y^2 in grid-step units.
    Eigen::Matrix<double, 9, 6> A;
    Eigen::Matrix<double, 9, 1> b;
    int row = 0;
    for (int dx = -1; dx <= 1; ++dx) {
        for (int dy = -1; dy <= 1; ++dy) {
            const ScanPoint& p = sr.at(bi + static_cast<std::size_t>(dx + 1) - 1, bj + static_cast<std::size_t>(dy + 1) - 1);
            if (!p.ok) return loc;
            A.row(row) << 1.0, dx, dy, dx * dx, dx * dy, dy * dy;
            b[row] = std::norm(p.D.value());
            ++row;
        }
    }
    const Eigen::Matrix<double, 6, 1> c = A.colPivHouseholderQr().solve(b);
    Eigen::Matrix2d H;
    H << 2.0 * c[3], c[4], c[4], 2.0 * c[5];
    if (!(H.determinant() > 0.0 && H(0, 0) > 0.0)) return loc;
    const Eigen::Vector2d off = H.ldlt().solve(Eigen::Vector2d(-c[1], -c[2]));
    if (!off.allFinite()) return loc;
    loc.s_offset = std::clamp(off[0], -1.0, 1.0) * g.s_step;
    loc.delta_offset = std::clamp(off[1], -1.0, 1.0) * g.delta_step;
    loc.s += loc.s_offset;
    loc.delta += loc.delta_offset;
    loc.refined = true;
    return loc;
}

}  // namespace ptlab::scan
