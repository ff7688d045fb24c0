#include "ptlab/fit/levenberg_marquardt.hpp"

#include <cmath>

namespace ptlab::fit {

void forward_difference_jacobian(const ResidualFn& f, const Eigen::VectorXd& x, const Eigen::VectorXd& r0,
                                 Eigen::MatrixXd& J, double rel_step) {
    J.resize(r0.size(), x.size());
    Eigen::VectorXd xp = x;
    Eigen::VectorXd rp(r0.size());
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        const double h = rel_step * std::max(std::abs(x[j]), 1.0);
        xp[j] = x[j] + h;
        f(xp, rp);
        J.col(j) = (rp - r0) / (xp[j] - x[j]);
        xp[j] = x[j];
    }
}

LmResult levenberg_marquardt(const ResidualFn& residuals, const JacobianFn& jacobian, Eigen::VectorXd x0,
                             const LmOptions& opts) {
    LmResult out;
    Eigen::VectorXd x = std::move(x0);
    Eigen::VectorXd r;
    Eigen::MatrixXd J;

    auto eval_jacobian = [&](const Eigen::VectorXd& at) {
        if (jacobian) {
            jacobian(at, r, J);
        } else {
            residuals(at, r);
            forward_difference_jacobian(residuals, at, r, J);
        }
    };

    eval_jacobian(x);
    double cost = 0.5 * r.squaredNorm();
    out.cost_history.push_back(cost);
    double lambda = opts.damping_init;
    Eigen::VectorXd r_trial(r.size());

    int it = 0;
    for (; it < opts.max_iterations; ++it) {
        if (r.lpNorm<Eigen::Infinity>() <= 1e-15) {
            out.converged = true;
            out.stop = LmStop::zero_cost;
            break;
        }
        const Eigen::VectorXd g = J.transpose() * r;
        const Eigen::MatrixXd A = J.transpose() * J;
        const double rnorm = r.norm();
        double max_cos = 0.0;
        for (Eigen::Index j = 0; j < g.size(); ++j) {
            const double cn = std::sqrt(A(j, j));
            if (cn > 0.0) max_cos = std::max(max_cos, std::abs(g[j]) / (cn * rnorm));
        }
        if (max_cos <= opts.gradient_tolerance) {
            out.converged = true;
            out.stop = LmStop::gradient;
            break;
        }

        Eigen::VectorXd d = A.diagonal();
        const double dmax = d.maxCoeff();
        for (Eigen::Index j = 0; j < d.size(); ++j) d[j] = std::max(d[j], 1e-12 * dmax);

        bool accepted = false;
        bool small_step = false;
        while (lambda < 1e16) {
            Eigen::MatrixXd M = A;
            M.diagonal() += lambda * d;
            const Eigen::VectorXd step = M.ldlt().solve(-g);
            if (!step.allFinite()) {
                lambda *= 4.0;
                continue;
            }
            const Eigen::VectorXd x_trial = x + step;
            residuals(x_trial, r_trial);
            const double c_trial = 0.5 * r_trial.squaredNorm();
            if (std::isfinite(c_trial) && c_trial < cost) {
                small_step = step.norm() <= opts.step_tolerance * (x.norm() + opts.step_tolerance);
                x = x_trial;
                cost = c_trial;
                lambda = std::max(lambda / 3.0, 1e-15);
                accepted = true;
                break;
            }
            if (step.norm() <= opts.step_tolerance * (x.norm() + opts.step_tolerance)) {
                // Cannot decrease further at machine resolution.
                small_step = true;
                break;
            }
            lambda *= 4.0;
        }
        if (accepted) {
            out.cost_history.push_back(cost);
            eval_jacobian(x);
        }
        if (small_step) {
            out.converged = true;
            out.stop = LmStop::step;
            ++it;
            break;
        }
        if (!accepted) {
            out.stop = LmStop::damping_overflow;
            ++it;
            break;
        }
    }
    if (it >= opts.max_iterations && !out.converged) out.stop = LmStop::max_iterations;

    out.iterations = it;
    out.x = std::move(x);
    out.cost = cost;
    out.curvature = J.colwise().squaredNorm().transpose();
    return out;
}

}  // namespace ptlab::fit
