#include "ptlab/synth/coupling.hpp"

#include <cmath>

#include "ptlab/core/error.hpp"

namespace ptlab::synth {

CouplingSet::CouplingSet(std::vector<std::array<double, 2>> rows) : rows_(std::move(rows)) {
    if (rows_.size() < 2) throw Error(Errc::invalid_argument, "a coupling set needs at least the two antenna rows");
    for (const auto& r : rows_)
        if (!std::isfinite(r[0]) || !std::isfinite(r[1]))
            throw Error(Errc::invalid_argument, "coupling matrix entries must be finite");
}

CouplingSet CouplingSet::antennas() const { return CouplingSet({rows_[0], rows_[1]}); }

Mat2 CouplingSet::damping() const {
    double g00 = 0.0, g01 = 0.0, g11 = 0.0;
    for (const auto& r : rows_) {
        g00 += r[0] * r[0];
        g01 += r[0] * r[1];
        g11 += r[1] * r[1];
    }
    return {kPi * g00, kPi * g01, kPi * g01, kPi * g11};
}

EffHamiltonian effective_hamiltonian(const Mat2& internal, const CouplingSet& W) {
    const double scale = std::max(internal.max_abs(), 1.0);
    if ((internal - internal.adjoint()).max_abs() > 1e-12 * scale)
        throw Error(Errc::invalid_argument, "internal Hamiltonian is not Hermitian");
    return EffHamiltonian::from_matrix(internal - kI * W.damping());
}

}  // namespace ptlab::synth
