#include "ptlab/core/pt.hpp"

#include <cmath>

#include "ptlab/core/error.hpp"

namespace ptlab {

Mat2 PTNormalForm::matrix() const { return {cplx{A, B}, cplx{C, Dpt}, cplx{C, -Dpt}, cplx{A, -B}}; }

const char* pt_phase_name(PtPhase p) {
    switch (p) {
    case PtPhase::unbroken: return "unbroken";
    case PtPhase::exceptional: return "exceptional";
    case PtPhase::broken: return "broken";
    }
    return "unknown";
}

PtPhase classify_phase(const PTNormalForm& nf, double tol) {
    const double c2 = nf.C * nf.C + nf.Dpt * nf.Dpt;
    const double b2 = nf.B * nf.B;
    const double gap = c2 - b2;
    if (std::abs(gap) <= tol * (c2 + b2)) return PtPhase::exceptional;
    return gap > 0.0 ? PtPhase::unbroken : PtPhase::broken;
}

PtFormResult to_pt_form(const EffHamiltonian& shifted, double tau, const PtTolerances& tol) {
    const Radicand d = radicand(shifted);
    if (std::abs(d.cross) > tol.eps_cross * d.scale())
        throw Error(Errc::not_on_pt_curve, "|Re h . Im h| = " + std::to_string(std::abs(d.cross)) +
                                               " exceeds tolerance relative to " + std::to_string(d.scale()));

    PtFormResult out;
    out.tau_u = {TransformKind::TauU, 0.5 * tau};
    const EffHamiltonian sym = out.tau_u.apply(shifted);  // complex symmetric: h2 ~ 0
    const cplx g = sym.h1();
    const cplx h3 = sym.h3();

    // Need Im h1'' = 0 and Re h3'' = 0 after rotating (h1, h3) by theta:
    //   cos(theta) Im g - sin(theta) Im h3 = 0,  sin(theta) Re g + cos(theta) Re h3 = 0.
    // Both give the same theta mod pi on the curve; use the better conditioned one.
    const double im_norm = std::hypot(g.imag(), h3.imag());
    const double re_norm = std::hypot(g.real(), h3.real());
    double theta = 0.0;
    if (im_norm >= re_norm && im_norm > 0.0)
        theta = std::atan2(g.imag(), h3.imag());
    else if (re_norm > 0.0)
        theta = std::atan2(-h3.real(), g.real());
    theta = fold_half_turn(theta);
    out.rot_o = {TransformKind::RotO, 0.5 * theta};

    const double scale = std::sqrt(d.scale());
    const double tiny = 1e-12 * std::max(scale, 1e-300);
    if (std::abs(std::sin(theta)) < 1e-15 && std::abs(g.imag()) > tiny)
        throw Error(Errc::degenerate_rotation, "sin(2 Phi) = 0 with Im h1 != 0");
    if (std::abs(std::cos(theta)) < 1e-15 && std::abs(g.real()) > tiny)
        throw Error(Errc::degenerate_rotation, "cos(2 Phi) = 0 with Re h1 != 0");

    const EffHamiltonian nf = out.rot_o.apply(sym);
    out.transformed = nf.matrix();
    const Mat2& m = out.transformed;
    out.form.A = 0.5 * (m.m00 + m.m11).real();
    out.form.B = 0.5 * (m.m00 - m.m11).imag();
    out.form.C = 0.5 * (m.m01 + m.m10).real();
    out.form.Dpt = 0.0;
    out.form.residual = (m - out.form.matrix()).max_abs();
    if (out.form.residual > tol.eps_pt)
        throw Error(Errc::degenerate_rotation,
                    "transformed matrix deviates from the normal form by " + std::to_string(out.form.residual));
    return out;
}

double pt_commutator_norm(const Mat2& m) {
    const Mat2 sx = Mat2::sigma_x();
    return (sx * m.conj() - m * sx).max_abs();
}

std::array<double, 2> pt_eigenvector_overlaps(const Mat2& m) {
    const EigenPair E = eigenvalues(EffHamiltonian::from_matrix(m));
    std::array<double, 2> out{};
    const cplx ev[2] = {E.E1, E.E2};
    for (int j = 0; j < 2; ++j) {
        const auto v = eigenvector(m, ev[j]);
        // <v, sigma_x conj(v)> = conj(v0) conj(v1) + conj(v1) conj(v0)
        out[j] = 2.0 * std::abs(v[0]) * std::abs(v[1]);
    }
    return out;
}

PTReport pt_analysis(const EffHamiltonian& heff, const PtAnalysisOptions& opts) {
    PTReport rep;
    rep.offset = opts.global_offset ? *opts.global_offset : mean_half_width(heff);
    const EffHamiltonian shifted = width_offset(heff, rep.offset);
    rep.shifted_eigenvalues = eigenvalues(shifted);

    const auto [gauged, g0] = gauge_fix(shifted);
    rep.phi0 = g0.angle;
    rep.tau = extract_tau(gauged);
    const PtFormResult r = to_pt_form(gauged, rep.tau, opts.tol);
    rep.phi = r.rot_o.angle;
    rep.form = r.form;
    rep.phase = classify_phase(r.form, opts.phase_tol);
    rep.commutator_norm = pt_commutator_norm(r.transformed);
    rep.eigvec_pt_overlap = pt_eigenvector_overlaps(r.transformed);

    const Mat2 v = r.rot_o.matrix() * r.tau_u.matrix() * g0.matrix();
    const Mat2 uprime = v.adjoint() * Mat2::sigma_x() * v.conj();
    const Mat2 h = shifted.matrix();
    rep.antilinear_residual = (uprime * h.conj() - h * uprime).max_abs();
    return rep;
}

}  // namespace ptlab
