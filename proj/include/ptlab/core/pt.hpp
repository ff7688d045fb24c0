#pragma once

#include <array>
#include <optional>

#include "ptlab/core/transforms.hpp"

namespace ptlab {

/// Entries of the PT-symmetric normal form
///     [[A + iB, C + iD], [C - iD, A - iB]]
/// with P = sigma_x and T = complex conjugation.
struct PTNormalForm {
    double A = 0.0;
    double B = 0.0;
    double C = 0.0;
    double Dpt = 0.0;
    double residual = 0.0;  // max |entry| deviation of the transformed matrix from the pattern

    Mat2 matrix() const;
};

enum class PtPhase { unbroken, exceptional, broken };

const char* pt_phase_name(PtPhase p);

/// Real eigenvalues iff C^2 >= B^2 (for D = 0). Points with
/// |C^2 - B^2| <= tol * (C^2 + B^2) are reported as exceptional.
PtPhase classify_phase(const PTNormalForm& nf, double tol = 1e-9);

struct PtTolerances {
    double eps_cross = 1e-6;  // |Re h . Im h| relative to reh2 + imh2
    double eps_pt = 1e-8;     // [MHz]
};

struct PtFormResult {
    PTNormalForm form;
    BasisTransform tau_u;  // angle tau/2
    BasisTransform rot_o;  // angle Phi
    Mat2 transformed;      // O U H U^dagger O^T
};

/// Brings a width-offset, gauge-fixed Hamiltonian on the curve Re h . Im h = 0
/// into the normal form with D = 0.
PtFormResult to_pt_form(const EffHamiltonian& shifted, double tau, const PtTolerances& tol = {});

/// Max entry of sigma_x conj(M) - M sigma_x, the matrix of the antilinear
/// commutator [PT, M] acting as v -> sigma_x conj(v).
double pt_commutator_norm(const Mat2& m);

/// |<v, PT v>| / |v|^2 for both eigenvectors of m. Equals 1 for PT eigenstates.
std::array<double, 2> pt_eigenvector_overlaps(const Mat2& m);

/// Full chain width_offset -> gauge_fix -> extract_tau -> to_pt_form for one point.
struct PTReport {
    double offset = 0.0;  // (Gamma1 + Gamma2)/4 added as +i*offset
    double tau = 0.0;
    double phi0 = 0.0;    // gauge rotation angle
    double phi = 0.0;     // normal-form rotation angle
    PTNormalForm form;
    PtPhase phase = PtPhase::unbroken;
    double commutator_norm = 0.0;
    /// Max entry of U' conj(H) - H U' with U' = V^dagger sigma_x conj(V),
    /// V the total basis change. Zero when H commutes with U' T.
    double antilinear_residual = 0.0;
    std::array<double, 2> eigvec_pt_overlap{};
    EigenPair shifted_eigenvalues;
};

struct PtAnalysisOptions {
    PtTolerances tol;
    std::optional<double> global_offset;  // use a fixed offset instead of the local one
    double phase_tol = 1e-9;
};

PTReport pt_analysis(const EffHamiltonian& heff, const PtAnalysisOptions& opts = {});

}  // namespace ptlab
