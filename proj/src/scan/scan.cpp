#include "ptlab/scan/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <memory>
#include <mutex>
#include <thread>

#include "ptlab/core/error.hpp"
#include "ptlab/core/transforms.hpp"

namespace ptlab::scan {

const char* provenance_name(Provenance p) { return p == Provenance::fitted ? "fitted" : "family-direct"; }

std::size_t ScanResult::failures() const {
    return static_cast<std::size_t>(std::count_if(points.begin(), points.end(), [](const auto& p) { return !p.ok; }));
}

ScanSource ScanSource::from_family(const synth::SyntheticFamily& fam) {
    ScanSource src;
    src.kind = Provenance::family_direct;
    src.hamiltonian = [fam](double s, double delta) { return fam.H_at(s, delta); };
    return src;
}

ScanSource ScanSource::from_spectra(std::function<synth::Spectrum(double, double)> load) {
    ScanSource src;
    src.kind = Provenance::fitted;
    src.spectrum = std::move(load);
    return src;
}

double gauge_tau(const EffHamiltonian& H) {
    if (H.h2() == 0.0) return 0.0;
    return extract_tau(gauge_fix(H).first);
}

ScanPoint evaluate_point(double s, double delta, const EffHamiltonian& H) {
    ScanPoint p;
    p.s = s;
    p.delta = delta;
    p.H = H;
    p.E = fit::sorted_eigenvalues(H);
    p.D = radicand(H);
    p.tau = gauge_tau(H);
    p.ok = true;
    return p;
}

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
    std::size_t workers = jobs > 0 ? static_cast<std::size_t>(jobs) : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, n);
    if (workers <= 1) {
        for (std::size_t k = 0; k < n; ++k) fn(k);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        try {
            for (std::size_t k = next++; k < n; k = next++) fn(k);
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = n;
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

ScanResult scan(const ParamGrid& grid, const ScanSource& source, const ScanOptions& opts) {
    grid.validate();
    if (source.kind == Provenance::fitted) opts.fit.validate();
    if (!(opts.max_failure_rate >= 0.0 && opts.max_failure_rate <= 1.0))
        throw Error(Errc::invalid_argument, "max_failure_rate must lie in [0, 1]");

    ScanResult out;
    out.grid = grid;
    out.provenance = source.kind;
    const std::size_t nd = grid.nd();
    out.points.resize(grid.size());

    parallel_for(out.points.size(), opts.jobs, [&](std::size_t k) {
        const double s = grid.s_at(k / nd);
        const double delta = grid.delta_at(k % nd);
        ScanPoint& pt = out.points[k];
        try {
            if (source.kind == Provenance::family_direct) {
                pt = evaluate_point(s, delta, source.hamiltonian(s, delta));
            } else {
                const fit::FitResult r = fit::fit_spectrum(source.spectrum(s, delta), opts.fit);
                pt = evaluate_point(s, delta, r.H);
                pt.tau = r.tau;
                pt.residual_rms = r.residual_rms;
            }
        } catch (const Error& e) {
            pt = ScanPoint{};
            pt.s = s;
            pt.delta = delta;
            pt.ok = false;
            pt.status = std::string(errc_name(e.code()));
        }
    });

    const std::size_t failed = out.failures();
    if (static_cast<double>(failed) > opts.max_failure_rate * static_cast<double>(out.points.size()))
        throw Error(Errc::scan_quality, std::to_string(failed) + " of " + std::to_string(out.points.size()) +
                                            " grid points failed");
    return out;
}

HamiltonianField interpolated_field(const ScanResult& sr) {
    const ParamGrid g = sr.grid;
    const std::size_t ns = g.ns(), nd = g.nd();
    HamiltonianField f;
    f.bounds = {g.s_min, g.s_at(ns - 1), g.delta_min, g.delta_at(nd - 1)};
    const auto pts = std::make_shared<const std::vector<ScanPoint>>(sr.points);
    f.eval = [g, ns, nd, pts, bounds = f.bounds](double s, double delta) {
        if (!bounds.contains(s, delta))
            throw Error(Errc::out_of_bounds, "(" + std::to_string(s) + ", " + std::to_string(delta) +
                                                 ") mm outside the scanned grid");
        auto locate = [](double x, double lo, double step, std::size_t n, std::size_t& i, double& t) {
            if (n == 1) {
                i = 0;
                t = 0.0;
                return;
            }
            const double u = std::clamp((x - lo) / step, 0.0, static_cast<double>(n - 1));
            i = std::min(static_cast<std::size_t>(u), n - 2);
            t = u - static_cast<double>(i);
        };
        std::size_t i, j;
        double ts, td;
        locate(s, g.s_min, g.s_step, ns, i, ts);
        locate(delta, g.delta_min, g.delta_step, nd, j, td);
        const std::size_t i1 = std::min(i + 1, ns - 1), j1 = std::min(j + 1, nd - 1);
        const ScanPoint* c[4] = {&(*pts)[i * nd + j], &(*pts)[i * nd + j1], &(*pts)[i1 * nd + j], &(*pts)[i1 * nd + j1]};
        const double w[4] = {(1 - ts) * (1 - td), (1 - ts) * td, ts * (1 - td), ts * td};
        cplx e1 = 0.0, e2 = 0.0, h1 = 0.0, h2 = 0.0;
        for (int k = 0; k < 4; ++k) {
            if (w[k] == 0.0) continue;
            if (!c[k]->ok)
                throw Error(Errc::scan_quality, "interpolation touches failed point (" + std::to_string(c[k]->s) +
                                                    ", " + std::to_string(c[k]->delta) + ")");
            e1 += w[k] * c[k]->H.e1();
            e2 += w[k] * c[k]->H.e2();
            h1 += w[k] * c[k]->H.h1();
            h2 += w[k] * c[k]->H.h2();
        }
        return EffHamiltonian::from_pauli(e1, e2, h1, h2);
    };
    return f;
}

}  // namespace ptlab::scan
