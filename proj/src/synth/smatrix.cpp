#include "ptlab/synth/smatrix.hpp"

#include "ptlab/core/error.hpp"

namespace ptlab::synth {

Mat2 resolvent(const Mat2& h, double f) {
    const Mat2 a{f - h.m00, -h.m01, -h.m10, f - h.m11};
    const cplx det = a.det();
    const double scale = a.max_abs();
    if (!(std::abs(det) > 1e-15 * scale * scale))
        throw Error(Errc::pole_on_grid, "f = " + std::to_string(f) + " MHz hits an eigenvalue of H_eff");
    return {a.m11 / det, -a.m01 / det, -a.m10 / det, a.m00 / det};
}

Mat2 smatrix_at(const EffHamiltonian& heff, const CouplingSet& W, double f) {
    const Mat2 r = resolvent(heff.matrix(), f);
    const auto& w0 = W.row(0);
    const auto& w1 = W.row(1);
    const cplx k{0.0, -2.0 * kPi};
    // Products of real couplings are formed first and the two off-diagonal
    // resolvent terms are added last, so S_ab and S_ba round identically
    // whenever r.m01 == r.m10.
    auto entry = [&](const std::array<double, 2>& wa, const std::array<double, 2>& wb) {
        const cplx diag = r.m00 * (wa[0] * wb[0]) + r.m11 * (wa[1] * wb[1]);
        const cplx off = r.m01 * (wa[0] * wb[1]) + r.m10 * (wa[1] * wb[0]);
        return k * (diag + off);
    };
    return {1.0 + entry(w0, w0), entry(w0, w1), entry(w1, w0), 1.0 + entry(w1, w1)};
}

}  // namespace ptlab::synth
