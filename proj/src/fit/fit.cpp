#include "ptlab/fit/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "ptlab/core/transforms.hpp"
#include "ptlab/fit/levenberg_marquardt.hpp"

namespace ptlab::fit {

namespace {

// exp(U(-ln k, ln k))
double log_uniform(std::mt19937_64& rng, double k) {
    std::uniform_real_distribution<double> u(-std::log(k), std::log(k));
    return std::exp(u(rng));
}

Eigen::VectorXd perturb(const Eigen::VectorXd& p0, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(-0.5, 0.5);
    std::uniform_real_distribution<double> phase(-kPi, kPi);
    Eigen::VectorXd p = p0;
    const double g1 = -2.0 * p0[1], g2 = -2.0 * p0[3];
    p[0] += unit(rng) * g1;
    p[2] += unit(rng) * g2;
    p[1] *= log_uniform(rng, 2.0);
    p[3] *= log_uniform(rng, 2.0);
    const double scale = std::max(std::abs(p0[0] - p0[2]), 0.25 * (g1 + g2));
    for (int k : {4, 6}) {
        const cplx z = std::polar(0.1 * scale * log_uniform(rng, 3.0), phase(rng));
        p[k] = z.real();
        p[k + 1] = z.imag();
    }
    for (int k = 8; k < 12; ++k) p[k] *= log_uniform(rng, 2.0);
    return p;
}

double widest(const EffHamiltonian& H) {
    const EigenPair E = eigenvalues(H);
    return std::max(E.width(1), E.width(2));
}

}  // namespace

void FitConfig::validate() const {
    if (max_iterations < 1) throw Error(Errc::invalid_argument, "max_iterations must be >= 1");
    if (!(gradient_tolerance > 0.0) || !(step_tolerance > 0.0) || !(damping_init > 0.0))
        throw Error(Errc::invalid_argument, "fit tolerances and initial damping must be > 0");
    if (n_starts < 1) throw Error(Errc::invalid_argument, "n_starts must be >= 1");
    if (mask.count() == 0) throw Error(Errc::invalid_argument, "channel mask selects no S entry");
    if (!(t_invariance_tol >= 0.0)) throw Error(Errc::invalid_argument, "t_invariance_tol must be >= 0");
}

EigenPair sorted_eigenvalues(const EffHamiltonian& H) {
    EigenPair E = eigenvalues(H);
    const bool swap = E.E2.real() < E.E1.real() || (E.E2.real() == E.E1.real() && E.E2.imag() > E.E1.imag());
    if (swap) std::swap(E.E1, E.E2);
    return E;
}

EigenPair FitResult::eigenvalues() const { return sorted_eigenvalues(H); }

std::pair<EffHamiltonian, CouplingSet> canonical_basis(const EffHamiltonian& H, const CouplingSet& W,
                                                       double t_invariance_tol) {
    const auto hn = std::sqrt(std::norm(H.h1()) + std::norm(H.h2()) + std::norm(H.h3()));
    EffHamiltonian h = H;
    BasisTransform g = BasisTransform::identity(TransformKind::GaugeO0);
    if (std::abs(H.h2()) > t_invariance_tol * hn) std::tie(h, g) = gauge_fix(H);

    // H' = G H G^T requires W' = W G^T.
    auto rotate_w = [](const std::array<double, 2>& w, const Mat2& G) {
        return std::array<double, 2>{w[0] * G.m00.real() + w[1] * G.m01.real(),
                                     w[0] * G.m10.real() + w[1] * G.m11.real()};
    };
    const Mat2 G = g.matrix();
    std::array<double, 2> w0 = rotate_w(W.row(0), G);
    std::array<double, 2> w1 = rotate_w(W.row(1), G);

    // The other gauge solution is a quarter turn away: D = [[0, 1], [-1, 0]].
    const double keep = std::abs(w0[0]) + std::abs(w1[1]);
    const double turn = std::abs(w0[1]) + std::abs(w1[0]);
    if (turn > keep) {
        const BasisTransform q{TransformKind::RotO, 0.5 * kPi};
        h = q.apply(h);
        w0 = {w0[1], -w0[0]};
        w1 = {w1[1], -w1[0]};
    }
    // Column sign flips F = diag(+-1, +-1): H -> F H F negates h1, h2 when the signs differ.
    const bool flip0 = w0[0] < 0.0;
    const bool flip1 = w1[1] < 0.0;
    if (flip0) {
        w0[0] = -w0[0];
        w1[0] = -w1[0];
    }
    if (flip1) {
        w0[1] = -w0[1];
        w1[1] = -w1[1];
    }
    if (flip0 != flip1) h = EffHamiltonian::from_pauli(h.e1(), h.e2(), -h.h1(), -h.h2());
    return {h, CouplingSet({w0, w1})};
}

FitResult fit_spectrum(const Spectrum& spec, const FitConfig& cfg, const std::optional<FitResult>& init) {
    cfg.validate();
    spec.validate();

    Eigen::VectorXd p0;
    double max_width = 0.0;
    if (init) {
        p0 = pack(init->H, init->W);
        max_width = widest(init->H);
    } else {
        const SeedEstimate est = seed_estimate(spec);
        p0 = est.params;
        max_width = std::max(est.width[0], est.width[1]);
    }
    if (!(spec.span() > 4.0 * max_width))
        throw Error(Errc::insufficient_span, "grid span " + std::to_string(spec.span()) +
                                                 " MHz does not cover four widths of " + std::to_string(max_width) +
                                                 " MHz");

    const ChannelMask mask = cfg.mask;
    const ResidualFn res = [&](const Eigen::VectorXd& x, Eigen::VectorXd& r) { residual_vector(x, spec, mask, r); };
    JacobianFn jac;
    if (cfg.jacobian == JacobianMode::analytic)
        jac = [&](const Eigen::VectorXd& x, Eigen::VectorXd& r, Eigen::MatrixXd& J) {
            residual_jacobian(x, spec, mask, r, J);
        };

    LmOptions opts;
    opts.max_iterations = cfg.max_iterations;
    opts.gradient_tolerance = cfg.gradient_tolerance;
    opts.step_tolerance = cfg.step_tolerance;
    opts.damping_init = cfg.damping_init;

    const double m = static_cast<double>(2 * mask.count()) * static_cast<double>(spec.size());
    std::optional<LmResult> best;
    int best_start = -1;
    const double floor_rms = cfg.noise_floor_factor * estimate_noise(spec, mask) + 1e-9;
    double best_any = std::numeric_limits<double>::infinity();
    for (int k = 0; k < cfg.n_starts; ++k) {
        std::mt19937_64 rng(synth::split_seed(cfg.seed, static_cast<std::uint64_t>(k)));
        const Eigen::VectorXd x0 = k == 0 ? p0 : perturb(p0, rng);
        LmResult r = levenberg_marquardt(res, jac, x0, opts);
        best_any = std::min(best_any, std::sqrt(2.0 * r.cost / m));
        if (!r.converged) continue;
        if (!best || r.cost < best->cost) {
            best = std::move(r);
            best_start = k;
        }
        if (cfg.early_stop && std::sqrt(2.0 * best->cost / m) <= floor_rms) break;
    }
    if (!best)
        throw FitError("no start converged (best residual rms " + std::to_string(best_any) + ")", best_any);

    const auto [H, W] = unpack(best->x);
    const auto [Hc, Wc] = canonical_basis(H, W, cfg.t_invariance_tol);

    FitResult out;
    out.H = Hc;
    out.W = Wc;
    out.tau = extract_tau(Hc);
    out.converged = true;
    out.start_index = best_start;
    out.iterations = best->iterations;
    out.cost_history = best->cost_history;
    Eigen::VectorXd r;
    Eigen::MatrixXd J;
    residual_jacobian(pack(Hc, Wc), spec, mask, r, J);
    out.residual_rms = std::sqrt(r.squaredNorm() / m);
    const Eigen::VectorXd curv = J.colwise().squaredNorm().transpose();
    out.covariance_proxy.assign(curv.data(), curv.data() + curv.size());
    return out;
}

}  // namespace ptlab::fit
