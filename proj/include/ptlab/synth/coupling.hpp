#pragma once

#include <array>
#include <vector>

#include "ptlab/core/hamiltonian.hpp"

namespace ptlab::synth {

/// Real, frequency-independent channel couplings W[c][mu] in sqrt(MHz).
/// Rows 0 and 1 are the antennas; further rows are fictitious dissipative
/// channels (wall and ferrite losses).
class CouplingSet {
public:
    CouplingSet() = default;
    /// Throws invalid_argument unless there are >= 2 rows, all finite.
    explicit CouplingSet(std::vector<std::array<double, 2>> rows);

    int channels() const { return static_cast<int>(rows_.size()); }
    const std::vector<std::array<double, 2>>& rows() const { return rows_; }
    const std::array<double, 2>& row(int c) const { return rows_.at(static_cast<std::size_t>(c)); }

    /// The two antenna rows only.
    CouplingSet antennas() const;

    /// pi * sum_c W[c][mu] W[c][nu] over all channels (real symmetric, PSD).
    Mat2 damping() const;

    friend bool operator==(const CouplingSet&, const CouplingSet&) = default;

private:
    std::vector<std::array<double, 2>> rows_;
};

/// H_eff = H - i pi sum_c W_c W_c^T for a Hermitian internal Hamiltonian H.
/// Throws invalid_argument if H is not Hermitian to 1e-12 relative.
EffHamiltonian effective_hamiltonian(const Mat2& internal, const CouplingSet& W);

}  // namespace ptlab::synth
