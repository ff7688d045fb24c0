#pragma once

#include <array>
#include <string>
#include <string_view>
#include <utility>

#include <Eigen/Dense>

#include "ptlab/synth/spectrum.hpp"

namespace ptlab::fit {

using synth::CouplingSet;
using synth::Spectrum;

/// Selects which of S11, S12, S21, S22 enter the residual.
struct ChannelMask {
    std::array<bool, 4> use{true, true, true, true};

    /// Comma-separated entry names, e.g. "S11" or "S11,S22". Throws invalid_argument.
    static ChannelMask parse(std::string_view text);
    int count() const;
    std::string str() const;
    friend bool operator==(const ChannelMask&, const ChannelMask&) = default;
};

/// Parameter packing (12 reals):
///   0..7   Re e1, Im e1, Re e2, Im e2, Re h1, Im h1, Re h2, Im h2
///   8..11  W[0][0], W[0][1], W[1][0], W[1][1]  (antenna row, mode column)
/// Losses into non-antenna channels are carried by the imaginary parts of H.
inline constexpr int kParamCount = 12;

Eigen::VectorXd pack(const EffHamiltonian& H, const CouplingSet& W);
std::pair<EffHamiltonian, CouplingSet> unpack(const Eigen::VectorXd& p);

/// Residual entry written for every component at a frequency where the model
/// has a pole, or for non-finite parameters.
inline constexpr double kPoleSentinel = 1e6;

/// Stacked [Re(model - data), Im(model - data)] per grid point and per masked
/// S entry in the order S11, S12, S21, S22. Length 2 * mask.count() * N.
void residual_vector(const Eigen::VectorXd& p, const Spectrum& spec, const ChannelMask& mask, Eigen::VectorXd& r);
Eigen::VectorXd residual_vector(const Eigen::VectorXd& p, const Spectrum& spec, const ChannelMask& mask = {});

/// Residuals and the analytic Jacobian from dR/dH = R E R for the resolvent R.
void residual_jacobian(const Eigen::VectorXd& p, const Spectrum& spec, const ChannelMask& mask, Eigen::VectorXd& r,
                       Eigen::MatrixXd& J);

}  // namespace ptlab::fit
