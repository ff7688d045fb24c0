#pragma once

#include <array>

#include <Eigen/Dense>

#include "ptlab/fit/model.hpp"

namespace ptlab::fit {

/// Per-component noise level of a spectrum from the median absolute fourth
/// difference along frequency, which the smooth resonance part barely enters.
double estimate_noise(const synth::Spectrum& spec, const ChannelMask& mask = {});

struct SeedEstimate {
    std::array<double, 2> position{};  // [MHz]
    std::array<double, 2> width{};     // Gamma_j [MHz]
    bool resolved = false;             // false: single-peak fallback
    Eigen::VectorXd params;            // packed as in model.hpp
};

/// Peak picking on P(f) = |S(f) - 1|_F^2. Two resolved maxima give positions
/// and full widths at half maximum; otherwise the strongest peak is split
/// symmetrically. Antenna couplings follow from the peak heights of
/// |S_aa - 1| ~ 4 pi W_aj^2 / Gamma_j. Throws unresolvable_doublet for a
/// spectrum without any resonance.
SeedEstimate seed_estimate(const synth::Spectrum& spec);

Eigen::VectorXd seed_initializer(const synth::Spectrum& spec);

}  // namespace ptlab::fit
