#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ptlab/core/error.hpp"
#include "ptlab/fit/model.hpp"
#include "ptlab/fit/seed.hpp"

namespace ptlab::fit {

enum class JacobianMode { analytic, forward_difference };

struct FitConfig {
    int max_iterations = 200;
    double gradient_tolerance = 1e-10;
    double step_tolerance = 1e-12;
    int n_starts = 8;
    double damping_init = 1e-3;
    std::uint64_t seed = 1;
    ChannelMask mask;
    JacobianMode jacobian = JacobianMode::analytic;
    /// |h2| <= t_invariance_tol * |h| is treated as h2 = 0 when fixing the gauge.
    double t_invariance_tol = 1e-9;
    /// Skip the remaining starts once a converged start explains the data to
    /// noise_floor_factor times the estimated noise level.
    bool early_stop = true;
    double noise_floor_factor = 1.5;

    /// Throws invalid_argument on non-positive tolerances, n_starts < 1 or an empty mask.
    void validate() const;
};

struct FitResult {
    EffHamiltonian H;  // gauge-fixed
    CouplingSet W;     // antenna rows
    double tau = 0.0;
    double residual_rms = 0.0;
    bool converged = false;
    std::vector<double> covariance_proxy;  // diag(J^T J) in packed order
    int start_index = 0;                   // which start produced the result
    int iterations = 0;
    std::vector<double> cost_history;

    /// Eigenvalues sorted by real part ascending, ties by imaginary part descending.
    EigenPair eigenvalues() const;
};

/// Raised when no start converges; carries the best residual seen.
class FitError : public Error {
public:
    FitError(const std::string& what, double best_rms) : Error(Errc::non_convergence, what), best_rms_(best_rms) {}
    double best_residual_rms() const noexcept { return best_rms_; }

private:
    double best_rms_;
};

EigenPair sorted_eigenvalues(const EffHamiltonian& H);


/// Fixes the basis of a fitted (H, W) pair: gauge_fix, then the quarter-turn
/// and column signs that make W diagonal-dominant with W[0][0], W[1][1] >= 0.
/// S is unchanged by all of these.
std::pair<EffHamiltonian, CouplingSet> canonical_basis(const EffHamiltonian& H, const CouplingSet& W,
                                                       double t_invariance_tol = 1e-9);

/// Multi-start Levenberg-Marquardt fit of the S-matrix model. Start 0 is the
/// peak-picking seed (or init); further starts are log-uniform perturbations
/// of it. The best converged start is returned in the canonical basis.
/// Throws insufficient_span if the grid is narrower than four widths, and
/// FitError if no start converges.
FitResult fit_spectrum(const Spectrum& spec, const FitConfig& cfg = {}, const std::optional<FitResult>& init = {});

}  // namespace ptlab::fit
