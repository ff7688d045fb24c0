#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ptlab/fit/fit.hpp"
#include "ptlab/scan/grid.hpp"
#include "ptlab/synth/family.hpp"

namespace ptlab::scan {

enum class Provenance { family_direct, fitted };

const char* provenance_name(Provenance p);

struct ScanPoint {
    double s = 0.0, delta = 0.0;
    bool ok = false;
    std::string status = "ok";  // error name for failed points
    EffHamiltonian H;
    EigenPair E;  // sorted by real part, see fit::sorted_eigenvalues
    Radicand D;
    double tau = 0.0;
    double residual_rms = 0.0;  // 0 for family-direct points
};

/// Points in row-major order, s outermost: index = i * nd + j.
struct ScanResult {
    ParamGrid grid;
    Provenance provenance = Provenance::family_direct;
    std::vector<ScanPoint> points;

    std::size_t index(std::size_t i, std::size_t j) const { return i * grid.nd() + j; }
    const ScanPoint& at(std::size_t i, std::size_t j) const { return points[index(i, j)]; }
    std::size_t failures() const;
};

/// Where grid points get their Hamiltonian: the family itself, or a fit of
/// the spectrum a loader returns for (s, delta).
struct ScanSource {
    Provenance kind = Provenance::family_direct;
    std::function<EffHamiltonian(double, double)> hamiltonian;
    std::function<synth::Spectrum(double, double)> spectrum;

    static ScanSource from_family(const synth::SyntheticFamily& fam);
    static ScanSource from_spectra(std::function<synth::Spectrum(double, double)> load);
};

struct ScanOptions {
    int jobs = 0;  // 0: hardware concurrency
    double max_failure_rate = 0.2;
    fit::FitConfig fit;
};

/// tau of an arbitrary-basis H: 0 when h2 vanishes, else extract_tau after gauge_fix.
double gauge_tau(const EffHamiltonian& H);

ScanPoint evaluate_point(double s, double delta, const EffHamiltonian& H);

/// Evaluates every grid point on a bounded worker pool. Per-point failures
/// are recorded; more than max_failure_rate of them raises scan_quality.
/// The result does not depend on the number of workers.
ScanResult scan(const ParamGrid& grid, const ScanSource& source, const ScanOptions& opts = {});

/// Runs fn(k) for k in [0, n) on up to jobs threads.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

/// Bilinear interpolation of the Pauli entries between scan points; exact
/// for families that are affine in (s, delta). Throws out_of_bounds outside
/// the grid and scan_quality next to failed points.
HamiltonianField interpolated_field(const ScanResult& scan);

}  // namespace ptlab::scan
