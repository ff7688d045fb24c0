#pragma once

#include "ptlab/synth/coupling.hpp"

namespace ptlab::synth {

/// Scattering matrix between the two antennas at frequency f [MHz]:
///
///     S_ab(f) = delta_ab - 2 pi i sum_{mu,nu} W_a,mu [(f - H_eff)^-1]_mu,nu W_b,nu
///
/// H_eff already contains the damping of all channels. Only the antenna rows
/// of W enter. For a symmetric H_eff the result has S12 == S21 bit-for-bit.
/// Throws pole_on_grid if f - H_eff is singular.
Mat2 smatrix_at(const EffHamiltonian& heff, const CouplingSet& W, double f);

/// Resolvent (f - H)^-1, or throws pole_on_grid.
Mat2 resolvent(const Mat2& h, double f);

}  // namespace ptlab::synth
