#pragma once

#include <cstdint>
#include <vector>

#include "ptlab/synth/coupling.hpp"

namespace ptlab::synth {

struct SpectrumMeta {
    double s_mm = 0.0;
    double delta_mm = 0.0;
    double B_mT = 0.0;
    std::uint64_t seed = 0;
    double sigma = 0.0;
};

/// Sampled 2x2 S-matrix on an ascending, uniform frequency grid [MHz].
struct Spectrum {
    std::vector<double> freqs;
    std::vector<Mat2> S;
    SpectrumMeta meta;

    std::size_t size() const { return freqs.size(); }
    double span() const { return freqs.empty() ? 0.0 : freqs.back() - freqs.front(); }

    /// Throws invalid_argument unless the grid is strictly ascending, uniform
    /// to 1e-9 relative, and matches S in length.
    void validate() const;
};

struct NoiseSpec {
    double sigma = 0.0;  // per real component of each S entry
    std::uint64_t seed = 0;
};

inline constexpr double kDefaultSpanMHz = 40.0;
inline constexpr double kDefaultStepMHz = 0.01;

/// Grid f0 - span/2 + k*step, k = 0 .. round(span/step).
std::vector<double> frequency_grid(double f0, double span, double step);

/// Samples smatrix_at on the grid centred at f0 and adds i.i.d. Gaussian noise
/// of width sigma to the real and imaginary part of every entry. sigma == 0
/// reproduces smatrix_at exactly.
Spectrum synth_spectrum(const EffHamiltonian& heff, const CouplingSet& W, double f0, double span, double step,
                        const NoiseSpec& noise);

/// Deterministic per-item seed derived from a base seed and an index.
std::uint64_t split_seed(std::uint64_t base, std::uint64_t index);

}  // namespace ptlab::synth
