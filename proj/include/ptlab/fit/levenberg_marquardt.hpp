#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace ptlab::fit {

using ResidualFn = std::function<void(const Eigen::VectorXd& x, Eigen::VectorXd& r)>;
/// Fills residuals and the Jacobian dr/dx at x.
using JacobianFn = std::function<void(const Eigen::VectorXd& x, Eigen::VectorXd& r, Eigen::MatrixXd& J)>;

struct LmOptions {
    int max_iterations = 200;
    double gradient_tolerance = 1e-10;  // max cosine between r and a Jacobian column
    double step_tolerance = 1e-12;      // relative step length
    double damping_init = 1e-3;
};

enum class LmStop { gradient, step, zero_cost, max_iterations, damping_overflow };

struct LmResult {
    Eigen::VectorXd x;
    double cost = 0.0;  // 0.5 * |r|^2
    int iterations = 0;
    bool converged = false;
    LmStop stop = LmStop::max_iterations;
    std::vector<double> cost_history;  // cost after each accepted step, starting with the initial cost
    Eigen::VectorXd curvature;         // diag(J^T J) at the returned point
};

/// Forward differences with step rel_step * max(|x_j|, 1).
void forward_difference_jacobian(const ResidualFn& f, const Eigen::VectorXd& x, const Eigen::VectorXd& r0,
                                 Eigen::MatrixXd& J, double rel_step = 1e-7);

/// Damped Gauss-Newton with Marquardt diagonal scaling. Only cost-decreasing
/// steps are accepted, so cost_history is non-increasing. A null jacobian
/// falls back to forward differences.
LmResult levenberg_marquardt(const ResidualFn& residuals, const JacobianFn& jacobian, Eigen::VectorXd x0,
                             const LmOptions& opts = {});

}  // namespace ptlab::fit
