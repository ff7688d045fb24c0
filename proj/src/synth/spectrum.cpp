#include "ptlab/synth/spectrum.hpp"

#include <cmath>
#include <random>

#include "ptlab/core/error.hpp"
#include "ptlab/synth/smatrix.hpp"

namespace ptlab::synth {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t split_seed(std::uint64_t base, std::uint64_t index) {
    return splitmix64(splitmix64(base) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

void Spectrum::validate() const {
    if (freqs.size() < 2) throw Error(Errc::invalid_argument, "spectrum needs at least two frequency points");
    if (freqs.size() != S.size()) throw Error(Errc::invalid_argument, "frequency and S-matrix counts differ");
    const double step = (freqs.back() - freqs.front()) / static_cast<double>(freqs.size() - 1);
    if (!(step > 0.0)) throw Error(Errc::invalid_argument, "frequency grid must be strictly ascending");
    for (std::size_t k = 1; k < freqs.size(); ++k) {
        const double d = freqs[k] - freqs[k - 1];
        if (!(d > 0.0)) throw Error(Errc::invalid_argument, "frequency grid must be strictly ascending");
        if (std::abs(d - step) > 1e-9 * std::max(std::abs(freqs[k]), step) + 1e-9 * step)
            throw Error(Errc::invalid_argument, "frequency grid is not uniform");
    }
    for (const Mat2& m : S)
        if (!m.is_finite()) throw Error(Errc::invalid_argument, "non-finite S-matrix sample");
}

std::vector<double> frequency_grid(double f0, double span, double step) {
    if (!(span > 0.0) || !(step > 0.0) || !std::isfinite(f0))
        throw Error(Errc::invalid_argument, "span and step must be positive");
    const double ratio = span / step;
    if (ratio > 1e7) throw Error(Errc::invalid_argument, "span/step exceeds 1e7 grid points");
    const auto n = static_cast<std::size_t>(std::llround(ratio)) + 1;
    std::vector<double> f(n);
    const double start = f0 - 0.5 * span;
    for (std::size_t k = 0; k < n; ++k) f[k] = start + static_cast<double>(k) * step;
    return f;
}

Spectrum synth_spectrum(const EffHamiltonian& heff, const CouplingSet& W, double f0, double span, double step,
                        const NoiseSpec& noise) {
    if (!(noise.sigma >= 0.0)) throw Error(Errc::invalid_argument, "noise sigma must be >= 0");
    Spectrum out;
    out.freqs = frequency_grid(f0, span, step);
    out.S.reserve(out.freqs.size());
    for (double f : out.freqs) out.S.push_back(smatrix_at(heff, W, f));
    out.meta.seed = noise.seed;
    out.meta.sigma = noise.sigma;
    if (noise.sigma > 0.0) {
        std::mt19937_64 rng(split_seed(noise.seed, 0));
        std::normal_distribution<double> n(0.0, noise.sigma);
        for (Mat2& m : out.S)
            for (cplx* z : {&m.m00, &m.m01, &m.m10, &m.m11}) {
                const double re = n(rng);
                const double im = n(rng);
                *z += cplx{re, im};
            }
    }
    return out;
}

}  // namespace ptlab::synth
