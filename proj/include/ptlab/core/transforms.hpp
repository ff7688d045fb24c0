#pragma once

#include <utility>

#include "ptlab/core/hamiltonian.hpp"

namespace ptlab {

enum class TransformKind { GaugeO0, TauU, RotO };

/// Unitary basis change V acting by conjugation, M -> V M V^dagger.
///
/// GaugeO0 and RotO are the real rotation exp(i angle sigma_y) =
/// [[cos, sin], [-sin, cos]]; on h they rotate (h1, h3) by 2*angle:
///     h1' = cos(2a) h1 - sin(2a) h3,  h3' = sin(2a) h1 + cos(2a) h3.
/// TauU is the diagonal phase exp(i angle sigma_z); it rotates (h1, h2) by
/// 2*angle and, with angle = tau/2, makes a gauge-fixed matrix symmetric.
struct BasisTransform {
    TransformKind kind = TransformKind::RotO;
    double angle = 0.0;  // [rad]

    static BasisTransform identity(TransformKind k) { return {k, 0.0}; }

    Mat2 matrix() const;
    BasisTransform inverse() const { return {kind, -angle}; }

    Mat2 apply(const Mat2& m) const;
    EffHamiltonian apply(const EffHamiltonian& H) const;
};

/// Folds an angle into (-pi/2, pi/2].
double fold_half_turn(double theta);

/// Rotates the basis so that (h1 + i h2)/(h1 - i h2) is unimodular, i.e.
/// h1/h2 is real. The rotation angle is the representative in (-pi/4, pi/4].
/// With h2 == 0 the identity is returned. Throws degenerate_gauge when both
/// Im(h1/h2) and Im(h3/h2) vanish.
std::pair<EffHamiltonian, BasisTransform> gauge_fix(const EffHamiltonian& H);

/// Modulus of the off-diagonal ratio (h1 + i h2)/(h1 - i h2).
double gauge_ratio_modulus(const EffHamiltonian& H);

/// T-violation parameter tau in (-pi/2, pi/2) with
/// (h1 + i h2)/(h1 - i h2) = exp(2 i tau). Requires a gauge-fixed H.
double extract_tau(const EffHamiltonian& H, double modulus_tol = 1e-6);

}  // namespace ptlab
