#include "ptlab/fit/seed.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "ptlab/core/error.hpp"

namespace ptlab::fit {

namespace {

struct Peak {
    std::size_t index = 0;
    double height = 0.0;
};

double frob2(const Mat2& s) {
    const Mat2 d = s - Mat2::identity();
    return std::norm(d.m00) + std::norm(d.m01) + std::norm(d.m10) + std::norm(d.m11);
}

std::vector<double> smooth(const std::vector<double>& x, std::size_t half) {
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const std::size_t lo = i >= half ? i - half : 0;
        const std::size_t hi = std::min(x.size() - 1, i + half);
        double s = 0.0;
        for (std::size_t k = lo; k <= hi; ++k) s += x[k];
        out[i] = s / static_cast<double>(hi - lo + 1);
    }
    return out;
}

// Distance from the peak to where p drops below half its height, walking in
// direction dir. Returns a negative value if p rises again or the grid ends.
double half_drop(const std::vector<double>& p, const std::vector<double>& f, std::size_t i0, int dir, double noise) {
    const double half = 0.5 * p[i0];
    std::size_t i = i0;
    double lowest = p[i0];
    while (true) {
        if ((dir < 0 && i == 0) || (dir > 0 && i + 1 == p.size())) return -1.0;
        const std::size_t j = dir > 0 ? i + 1 : i - 1;
        if (p[j] > half && p[j] - lowest > 0.1 * (p[i0] - lowest) + 4.0 * noise * std::sqrt(p[j])) return -1.0;  // climbing the neighbour
        lowest = std::min(lowest, p[j]);
        if (p[j] < half) {
            const double t = (p[i] - half) / (p[i] - p[j]);
            return std::abs(f[i] + t * (f[j] - f[i]) - f[i0]);
        }
        i = j;
    }
}

double fwhm(const std::vector<double>& p, const std::vector<double>& f, std::size_t i0, double noise) {
    const double l = half_drop(p, f, i0, -1, noise);
    const double r = half_drop(p, f, i0, +1, noise);
    if (l > 0.0 && r > 0.0) return l + r;
    if (l > 0.0) return 2.0 * l;
    if (r > 0.0) return 2.0 * r;
    return f.back() - f.front();
}

}  // namespace

double estimate_noise(const synth::Spectrum& spec, const ChannelMask& mask) {
    const std::size_t n = spec.size();
    if (n < 5) return 0.0;
    std::vector<double> d;
    d.reserve(8 * (n - 4));
    auto comp = [&](std::size_t i, int k) -> cplx {
        const Mat2& s = spec.S[i];
        return k == 0 ? s.m00 : k == 1 ? s.m01 : k == 2 ? s.m10 : s.m11;
    };
    for (int k = 0; k < 4; ++k) {
        if (!mask.use[k]) continue;
        for (std::size_t i = 0; i + 4 < n; ++i) {
            const cplx v = comp(i, k) - 4.0 * comp(i + 1, k) + 6.0 * comp(i + 2, k) - 4.0 * comp(i + 3, k) +
                           comp(i + 4, k);
            d.push_back(std::abs(v.real()));
            d.push_back(std::abs(v.imag()));
        }
    }
    if (d.empty()) return 0.0;
    const auto mid = d.begin() + static_cast<long>(d.size() / 2);
    std::nth_element(d.begin(), mid, d.end());
    // Gaussian MAD -> sigma, and Var(4th difference) = 70 sigma^2.
    return *mid / 0.6744897501960817 / std::sqrt(70.0);
}

SeedEstimate seed_estimate(const synth::Spectrum& spec) {
    spec.validate();
    const std::size_t n = spec.size();
    if (n < 5) throw Error(Errc::insufficient_span, "spectrum has fewer than 5 points");

    std::vector<double> raw(n);
    for (std::size_t i = 0; i < n; ++i) raw[i] = frob2(spec.S[i]);
    const double sigma = estimate_noise(spec);
    const std::size_t half_window = sigma > 1e-6 ? 8 : 2;
    const std::vector<double> p = smooth(raw, half_window);
    // Scatter of smoothed P = |S - 1|^2 is about 2 sigma sqrt(P) / sqrt(window).
    const double noise = 2.0 * sigma / std::sqrt(2.0 * static_cast<double>(half_window) + 1.0);

    std::vector<double> sorted = p;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<long>(n / 2), sorted.end());
    const double median = sorted[n / 2];
    const double pmax = *std::max_element(p.begin(), p.end());
    if (!(pmax > 1e-10 + 64.0 * sigma * sigma))
        throw Error(Errc::unresolvable_doublet, "no resonance found in the spectrum");
    if (!(pmax > 10.0 * median))
        throw Error(Errc::insufficient_span, "resonance response fills the whole frequency window");

    std::vector<Peak> peaks;
    for (std::size_t i = 1; i + 1 < n; ++i)
        if (p[i] >= p[i - 1] && p[i] > p[i + 1] && p[i] > 0.1 * pmax) peaks.push_back({i, p[i]});
    if (peaks.empty()) {
        const auto it = std::max_element(p.begin(), p.end());
        peaks.push_back({static_cast<std::size_t>(it - p.begin()), *it});
    }
    std::sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) { return a.height > b.height; });

    // Accept a second maximum only if a real dip separates it from the first.
    const Peak first = peaks.front();
    const Peak* second = nullptr;
    for (std::size_t k = 1; k < peaks.size() && !second; ++k) {
        const std::size_t lo = std::min(first.index, peaks[k].index);
        const std::size_t hi = std::max(first.index, peaks[k].index);
        const double valley = *std::min_element(p.begin() + static_cast<long>(lo), p.begin() + static_cast<long>(hi));
        if (valley < 0.8 * peaks[k].height) second = &peaks[k];
    }

    SeedEstimate est;
    const std::vector<double>& f = spec.freqs;
    std::array<std::size_t, 2> idx{};
    if (second) {
        est.resolved = true;
        idx = {first.index, second->index};
        for (int j = 0; j < 2; ++j) {
            est.position[j] = f[idx[j]];
            est.width[j] = fwhm(p, f, idx[j], noise);
        }
    } else {
        const double w = fwhm(p, f, first.index, noise);
        est.position = {f[first.index] - 0.25 * w, f[first.index] + 0.25 * w};
        est.width = {0.5 * w, 0.5 * w};
        idx = {first.index, first.index};
    }

    // Isolated level at its own resonance: S_aa - 1 = -4 pi W_aj^2 / Gamma_j.
    double Wj[2][2];
    for (int j = 0; j < 2; ++j) {
        const Mat2& s = spec.S[idx[j]];
        const double split = est.resolved ? 1.0 : 0.5;
        Wj[0][j] = std::sqrt(split * std::abs(s.m00 - 1.0) * est.width[j] / (4.0 * kPi));
        Wj[1][j] = std::sqrt(split * std::abs(s.m11 - 1.0) * est.width[j] / (4.0 * kPi));
    }

    const double dist = std::abs(est.position[0] - est.position[1]);
    const double off = 0.1 * std::max(dist, 0.5 * (est.width[0] + est.width[1]));
    est.params.resize(12);
    est.params << est.position[0], -0.5 * est.width[0], est.position[1], -0.5 * est.width[1], off, 0.0, 0.0, 0.0,
        Wj[0][0], Wj[0][1], Wj[1][0], Wj[1][1];
    return est;
}

Eigen::VectorXd seed_initializer(const synth::Spectrum& spec) { return seed_estimate(spec).params; }

}  // namespace ptlab::fit
