#include "ptlab/core/transforms.hpp"

#include <cmath>

#include "ptlab/core/error.hpp"

namespace ptlab {

Mat2 BasisTransform::matrix() const {
    switch (kind) {
    case TransformKind::TauU:
        return {std::polar(1.0, angle), 0.0, 0.0, std::polar(1.0, -angle)};
    case TransformKind::GaugeO0:
    case TransformKind::RotO:
        break;
    }
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return {c, s, -s, c};
}

Mat2 BasisTransform::apply(const Mat2& m) const {
    const Mat2 v = matrix();
    return v * m * v.adjoint();
}

EffHamiltonian BasisTransform::apply(const EffHamiltonian& H) const {
    // Act on the Pauli vector directly; this keeps e1 + e2 bit-exact.
    const double c = std::cos(2.0 * angle);
    const double s = std::sin(2.0 * angle);
    const cplx h1 = H.h1(), h2 = H.h2(), h3 = H.h3();
    const cplx mean = H.mean();
    if (kind == TransformKind::TauU) {
        // exp(i a sigma_z) sigma_x exp(-i a sigma_z) = cos(2a) sigma_x - sin(2a) sigma_y
        const cplx n1 = c * h1 + s * h2;
        const cplx n2 = -s * h1 + c * h2;
        return EffHamiltonian::from_pauli(mean + h3, mean - h3, n1, n2);
    }
    const cplx n1 = c * h1 - s * h3;
    const cplx n3 = s * h1 + c * h3;
    return EffHamiltonian::from_pauli(mean + n3, mean - n3, n1, h2);
}

double fold_half_turn(double theta) {
    while (theta > 0.5 * kPi) theta -= kPi;
    while (theta <= -0.5 * kPi) theta += kPi;
    return theta;
}

std::pair<EffHamiltonian, BasisTransform> gauge_fix(const EffHamiltonian& H) {
    if (H.h2() == 0.0) return {H, BasisTransform::identity(TransformKind::GaugeO0)};
    const double a = (H.h1() / H.h2()).imag();
    const double b = (H.h3() / H.h2()).imag();
    if (a == 0.0 && b == 0.0)
        throw Error(Errc::degenerate_gauge, "Im(h1/h2) and Im(h3/h2) both vanish; rotation angle undefined");
    // Im(h1'/h2) = cos(2phi) a - sin(2phi) b = 0
    const double two_phi = fold_half_turn(std::atan2(a, b));
    const BasisTransform t{TransformKind::GaugeO0, 0.5 * two_phi};
    return {t.apply(H), t};
}

double gauge_ratio_modulus(const EffHamiltonian& H) {
    const cplx ih2 = kI * H.h2();
    return std::abs(H.h1() + ih2) / std::abs(H.h1() - ih2);
}

double extract_tau(const EffHamiltonian& H, double modulus_tol) {
    const cplx ih2 = kI * H.h2();
    const cplx num = H.h1() + ih2;
    const cplx den = H.h1() - ih2;
    if (den == 0.0) throw Error(Errc::singular_ratio, "H12 = h1 - i h2 vanishes");
    const cplx ratio = num / den;
    if (std::abs(std::abs(ratio) - 1.0) > modulus_tol)
        throw Error(Errc::not_gauge_fixed,
                    "off-diagonal ratio modulus " + std::to_string(std::abs(ratio)) + " differs from 1");
    if (std::abs(ratio + 1.0) <= 1e-12) throw Error(Errc::singular_ratio, "ratio at -1 (tau = +-pi/2)");
    return 0.5 * std::arg(ratio);
}

}  // namespace ptlab
