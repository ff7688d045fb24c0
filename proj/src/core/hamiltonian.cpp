#include "ptlab/core/hamiltonian.hpp"

#include <string>

#include "ptlab/core/error.hpp"

namespace ptlab {

std::string_view errc_name(Errc code) noexcept {
    switch (code) {
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::degenerate_gauge: return "degenerate-gauge";
    case Errc::not_gauge_fixed: return "not-gauge-fixed";
    case Errc::singular_ratio: return "singular-ratio";
    case Errc::not_on_pt_curve: return "not-on-pt-curve";
    case Errc::degenerate_rotation: return "degenerate-rotation";
    case Errc::pole_on_grid: return "pole-on-grid";
    case Errc::non_convergence: return "non-convergence";
    case Errc::insufficient_span: return "insufficient-span";
    case Errc::unresolvable_doublet: return "unresolvable-doublet";
    case Errc::out_of_bounds: return "out-of-bounds";
    case Errc::ep_outside_window: return "ep-outside-window";
    case Errc::no_ep_found: return "no-ep-found";
    case Errc::scan_quality: return "scan-quality";
    case Errc::refine_loop: return "refine-loop";
    case Errc::contour_lost: return "contour-lost";
    case Errc::io_error: return "io-error";
    case Errc::parse_error: return "parse-error";
    }
    return "unknown";
}

int errc_exit_class(Errc code) noexcept {
    switch (code) {
    case Errc::invalid_argument:
        return 1;
    case Errc::io_error:
    case Errc::parse_error:
    case Errc::out_of_bounds:
    case Errc::insufficient_span:
    case Errc::unresolvable_doublet:
        return 2;
    default:
        return 3;
    }
}

EffHamiltonian EffHamiltonian::from_pauli(cplx e1, cplx e2, cplx h1, cplx h2) {
    if (!is_finite(e1) || !is_finite(e2) || !is_finite(h1) || !is_finite(h2))
        throw Error(Errc::invalid_argument, "non-finite Hamiltonian entry");
    return EffHamiltonian(e1, e2, h1, h2);
}

EffHamiltonian EffHamiltonian::from_matrix(const Mat2& m) {
    // m01 = h1 - i h2, m10 = h1 + i h2
    return from_pauli(m.m00, m.m11, 0.5 * (m.m01 + m.m10), 0.5 * kI * (m.m01 - m.m10));
}

Mat2 EffHamiltonian::matrix() const {
    const cplx ih2 = kI * h2_;
    return {e1_, h1_ - ih2, h1_ + ih2, e2_};
}

cplx branch_sqrt(cplx z) {
    cplx r = std::sqrt(z);
    if (r.real() == 0.0 && r.imag() < 0.0) r = -r;
    return r;
}

Radicand radicand(const EffHamiltonian& H) {
    Radicand d;
    for (const cplx& c : H.h()) {
        d.reh2 += c.real() * c.real();
        d.imh2 += c.imag() * c.imag();
        d.cross += c.real() * c.imag();
    }
    return d;
}

EigenPair eigenvalues(const EffHamiltonian& H) {
    const cplx root = branch_sqrt(radicand(H).value());
    const cplx mean = H.mean();
    return {mean + root, mean - root};
}

double mean_half_width(const EffHamiltonian& H) { return -H.mean().imag(); }

EffHamiltonian width_offset(const EffHamiltonian& H) { return H.shifted({0.0, mean_half_width(H)}); }

EffHamiltonian width_offset(const EffHamiltonian& H, double offset) { return H.shifted({0.0, offset}); }

bool is_dissipative(const EffHamiltonian& H, double tol) {
    const EigenPair E = eigenvalues(H);
    return E.E1.imag() <= tol && E.E2.imag() <= tol;
}

bool is_ep(const EffHamiltonian& H, double eps_d, double eps_h) {
    if (!(eps_d > 0.0) || !(eps_h > 0.0)) throw Error(Errc::invalid_argument, "is_ep tolerances must be positive");
    const Radicand d = radicand(H);
    return std::abs(d.value()) <= eps_d * d.scale() && d.scale() >= eps_h;
}

std::array<cplx, 2> eigenvector(const Mat2& m, cplx lambda) {
    // Two candidate null vectors of (m - lambda); keep the better conditioned one.
    std::array<cplx, 2> a{m.m01, lambda - m.m00};
    std::array<cplx, 2> b{lambda - m.m11, m.m10};
    const double na = std::hypot(std::abs(a[0]), std::abs(a[1]));
    const double nb = std::hypot(std::abs(b[0]), std::abs(b[1]));
    if (na == 0.0 && nb == 0.0) return {1.0, 0.0};
    auto& v = na >= nb ? a : b;
    const double n = std::max(na, nb);
    return {v[0] / n, v[1] / n};
}

double defectiveness(const EffHamiltonian& H) {
    const Mat2 m = H.matrix();
    const EigenPair E = eigenvalues(H);
    // Scalar matrix: every vector is an eigenvector.
    if (m.m01 == 0.0 && m.m10 == 0.0 && m.m00 == m.m11) return 1.0;
    auto v1 = eigenvector(m, E.E1);
    auto v2 = eigenvector(m, E.E2);
    const cplx overlap = std::conj(v1[0]) * v2[0] + std::conj(v1[1]) * v2[1];
    const double c = std::min(1.0, std::abs(overlap));
    // V^H V = [[1, c], [c*, 1]] has eigenvalues 1 +- c.
    return std::sqrt(1.0 - c);
}

}  // namespace ptlab
