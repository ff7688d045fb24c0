#pragma once

#include <array>

#include "ptlab/core/matrix2.hpp"

namespace ptlab {

/// Non-Hermitian 2x2 effective Hamiltonian in Pauli-vector form
///
///     H = (e1 + e2)/2 * 1 + h . sigma,   h = (h1, h2, (e1 - e2)/2)
///
/// so that H11 = e1, H22 = e2, H12 = h1 - i h2, H21 = h1 + i h2. h1 is the
/// symmetric and h2 the antisymmetric off-diagonal part. Only (e1, e2, h1, h2)
/// are stored; h3 is always derived. Units are MHz throughout.
class EffHamiltonian {
public:
    EffHamiltonian() = default;

    /// Throws Error(invalid_argument) on non-finite input.
    static EffHamiltonian from_pauli(cplx e1, cplx e2, cplx h1, cplx h2);
    static EffHamiltonian from_matrix(const Mat2& m);

    cplx e1() const { return e1_; }
    cplx e2() const { return e2_; }
    cplx h1() const { return h1_; }
    cplx h2() const { return h2_; }
    cplx h3() const { return 0.5 * (e1_ - e2_); }
    std::array<cplx, 3> h() const { return {h1_, h2_, h3()}; }

    /// (e1 + e2)/2
    cplx mean() const { return 0.5 * (e1_ + e2_); }
    cplx trace() const { return e1_ + e2_; }

    Mat2 matrix() const;

    /// Adds s * identity (shifts both e1 and e2).
    EffHamiltonian shifted(cplx s) const { return from_pauli(e1_ + s, e2_ + s, h1_, h2_); }

    friend bool operator==(const EffHamiltonian&, const EffHamiltonian&) = default;

private:
    EffHamiltonian(cplx e1, cplx e2, cplx h1, cplx h2) : e1_(e1), e2_(e2), h1_(h1), h2_(h2) {}

    cplx e1_{}, e2_{}, h1_{}, h2_{};
};

/// Complex eigenvalues E_j = f_j - i Gamma_j / 2. E1 carries the + branch of
/// the square root of the radicand.
struct EigenPair {
    cplx E1{}, E2{};

    double position(int j) const { return (j == 1 ? E1 : E2).real(); }
    double width(int j) const { return -2.0 * (j == 1 ? E1 : E2).imag(); }
};

/// Decomposition of the radicand D = h . h into |Re h|^2, |Im h|^2, Re h . Im h.
struct Radicand {
    double reh2 = 0.0;
    double imh2 = 0.0;
    double cross = 0.0;

    cplx value() const { return {reh2 - imh2, 2.0 * cross}; }
    double scale() const { return reh2 + imh2; }
};

/// Principal square root with Re >= 0; on the imaginary axis Im >= 0.
cplx branch_sqrt(cplx z);

Radicand radicand(const EffHamiltonian& H);
EigenPair eigenvalues(const EffHamiltonian& H);

/// H + i (Gamma1 + Gamma2)/4 * 1 with the widths of H itself, so the trace
/// becomes real. h is unchanged.
EffHamiltonian width_offset(const EffHamiltonian& H);

/// H + i * offset * 1, for a fixed offset taken from a reference point.
EffHamiltonian width_offset(const EffHamiltonian& H, double offset);

/// (Gamma1 + Gamma2)/4 of H.
double mean_half_width(const EffHamiltonian& H);

/// True if both eigenvalues have Im E <= tol (purely dissipative).
bool is_dissipative(const EffHamiltonian& H, double tol = 1e-12);

/// Exceptional point test: |D| <= eps_d * (reh2 + imh2) and reh2 + imh2 >= eps_h.
bool is_ep(const EffHamiltonian& H, double eps_d, double eps_h);

/// Smallest singular value of the eigenvector matrix with unit columns.
/// Equals 1 for normal matrices, 0 at a Jordan block.
double defectiveness(const EffHamiltonian& H);

/// Right eigenvector for eigenvalue lambda, unit norm.
std::array<cplx, 2> eigenvector(const Mat2& m, cplx lambda);

}  // namespace ptlab
