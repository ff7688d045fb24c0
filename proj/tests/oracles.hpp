#pragma once

// Reference computations written directly from the defining formulas, without
// going through the library's own eigenvalue or radicand code.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <random>

#include "ptlab/core/hamiltonian.hpp"

namespace oracle {

using cplx = std::complex<double>;
using lcplx = std::complex<long double>;

/// Roots of lambda^2 - tr lambda + det = 0 in long double.
inline std::array<cplx, 2> charpoly_roots(const ptlab::Mat2& m) {
    const lcplx a(m.m00), b(m.m01), c(m.m10), d(m.m11);
    const lcplx tr = a + d;
    const lcplx det = a * d - b * c;
    const lcplx disc = std::sqrt(tr * tr / 4.0L - det);
    return {cplx(tr / 2.0L + disc), cplx(tr / 2.0L - disc)};
}

/// max |x_k - y_pi(k)| minimized over both pairings.
inline double pair_distance(cplx x1, cplx x2, cplx y1, cplx y2) {
    return std::min(std::max(std::abs(x1 - y1), std::abs(x2 - y2)), std::max(std::abs(x1 - y2), std::abs(x2 - y1)));
}

inline double pair_distance(const ptlab::EigenPair& a, const ptlab::EigenPair& b) {
    return pair_distance(a.E1, a.E2, b.E1, b.E2);
}

/// Random matrix with entries of magnitude ~scale around a complex offset.
inline ptlab::EffHamiltonian random_hamiltonian(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double scale = std::pow(10.0, 3.0 * u(rng));
    auto z = [&] { return scale * cplx(u(rng), u(rng)); };
    const cplx offset = std::pow(10.0, 1.0 + 2.0 * u(rng)) * cplx(u(rng), 0.1 * u(rng));
    return ptlab::EffHamiltonian::from_matrix({offset + z(), z(), z(), offset + z()});
}

/// |Re h|^2, |Im h|^2, Re h . Im h from the matrix entries.
struct Parts {
    double reh2, imh2, cross;
};

inline Parts radicand_parts(const ptlab::Mat2& m) {
    const cplx h1 = 0.5 * (m.m01 + m.m10);
    const cplx h2 = cplx(0.0, 0.5) * (m.m01 - m.m10);
    const cplx h3 = 0.5 * (m.m00 - m.m11);
    Parts p{0.0, 0.0, 0.0};
    for (cplx h : {h1, h2, h3}) {
        p.reh2 += h.real() * h.real();
        p.imh2 += h.imag() * h.imag();
        p.cross += h.real() * h.imag();
    }
    return p;
}

/// S11 of one level at f0 - i gamma/2 coupled to antenna 1 with strength w.
inline cplx single_level_s11(double f, double f0, double gamma, double w) {
    return 1.0 - 2.0 * M_PI * cplx(0.0, 1.0) * w * w / (f - cplx(f0, -gamma / 2.0));
}

}  // namespace oracle
