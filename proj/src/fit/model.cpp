#include "ptlab/fit/model.hpp"

#include <cmath>

#include "ptlab/core/error.hpp"
#include "ptlab/synth/smatrix.hpp"

namespace ptlab::fit {

namespace {

constexpr const char* kEntryNames[4] = {"S11", "S12", "S21", "S22"};
constexpr int kRowOf[4] = {0, 0, 1, 1};
constexpr int kColOf[4] = {0, 1, 0, 1};

cplx entry(const Mat2& m, int k) {
    switch (k) {
    case 0: return m.m00;
    case 1: return m.m01;
    case 2: return m.m10;
    default: return m.m11;
    }
}

bool all_finite(const Eigen::VectorXd& p) { return p.size() == kParamCount && p.allFinite(); }

}  // namespace

ChannelMask ChannelMask::parse(std::string_view text) {
    ChannelMask m;
    m.use = {false, false, false, false};
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find(',', pos), text.size());
        std::string_view tok = text.substr(pos, end - pos);
        while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
        while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
        bool found = false;
        for (int k = 0; k < 4; ++k) {
            if (tok == kEntryNames[k]) {
                m.use[k] = true;
                found = true;
            }
        }
        if (!found) throw Error(Errc::invalid_argument, "unknown S entry '" + std::string(tok) + "' in mask");
        pos = end + 1;
    }
    return m;
}

int ChannelMask::count() const {
    int n = 0;
    for (bool u : use) n += u ? 1 : 0;
    return n;
}

std::string ChannelMask::str() const {
    std::string out;
    for (int k = 0; k < 4; ++k) {
        if (!use[k]) continue;
        if (!out.empty()) out += ',';
        out += kEntryNames[k];
    }
    return out;
}

Eigen::VectorXd pack(const EffHamiltonian& H, const CouplingSet& W) {
    Eigen::VectorXd p(kParamCount);
    p << H.e1().real(), H.e1().imag(), H.e2().real(), H.e2().imag(), H.h1().real(), H.h1().imag(), H.h2().real(),
        H.h2().imag(), W.row(0)[0], W.row(0)[1], W.row(1)[0], W.row(1)[1];
    return p;
}

std::pair<EffHamiltonian, CouplingSet> unpack(const Eigen::VectorXd& p) {
    if (p.size() != kParamCount) throw Error(Errc::invalid_argument, "parameter vector must have 12 entries");
    return {EffHamiltonian::from_pauli({p[0], p[1]}, {p[2], p[3]}, {p[4], p[5]}, {p[6], p[7]}),
            CouplingSet({{{p[8], p[9]}}, {{p[10], p[11]}}})};
}

void residual_vector(const Eigen::VectorXd& p, const Spectrum& spec, const ChannelMask& mask, Eigen::VectorXd& r) {
    const int nm = mask.count();
    const Eigen::Index n = static_cast<Eigen::Index>(spec.size());
    r.resize(2 * nm * n);
    if (!all_finite(p)) {
        r.setConstant(kPoleSentinel);
        return;
    }
    const auto [H, W] = unpack(p);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        Eigen::Index row = 2 * nm * i;
        try {
            const Mat2 s = synth::smatrix_at(H, W, spec.freqs[ui]);
            for (int k = 0; k < 4; ++k) {
                if (!mask.use[k]) continue;
                const cplx d = entry(s, k) - entry(spec.S[ui], k);
                r[row++] = d.real();
                r[row++] = d.imag();
            }
        } catch (const Error& e) {
            if (e.code() != Errc::pole_on_grid) throw;
            r.segment(row, 2 * nm).setConstant(kPoleSentinel);
        }
    }
}

Eigen::VectorXd residual_vector(const Eigen::VectorXd& p, const Spectrum& spec, const ChannelMask& mask) {
    Eigen::VectorXd r;
    residual_vector(p, spec, mask, r);
    return r;
}

void residual_jacobian(const Eigen::VectorXd& p, const Spectrum& spec, const ChannelMask& mask, Eigen::VectorXd& r,
                       Eigen::MatrixXd& J) {
    residual_vector(p, spec, mask, r);
    const int nm = mask.count();
    const Eigen::Index n = static_cast<Eigen::Index>(spec.size());
    J.setZero(2 * nm * n, kParamCount);
    if (!all_finite(p)) return;

    const auto [H, Wset] = unpack(p);
    const Mat2 hm = H.matrix();
    const double w[2][2] = {{p[8], p[9]}, {p[10], p[11]}};
    const cplx k{0.0, -2.0 * kPi};

    // dS_ab/dH_mn = k L_am Q_nb with L = W R, Q = R W^T. In terms of the
    // packed parameters H_mn is linear: e1 -> E00, e2 -> E11,
    // h1 -> E01 + E10, h2 -> -i E01 + i E10.
    for (Eigen::Index i = 0; i < n; ++i) {
        Mat2 R;
        try {
            R = synth::resolvent(hm, spec.freqs[static_cast<std::size_t>(i)]);
        } catch (const Error&) {
            continue;  // sentinel rows keep a zero Jacobian
        }
        const cplx Rm[2][2] = {{R.m00, R.m01}, {R.m10, R.m11}};
        cplx L[2][2], Q[2][2];
        for (int a = 0; a < 2; ++a) {
            for (int m = 0; m < 2; ++m) {
                L[a][m] = w[a][0] * Rm[0][m] + w[a][1] * Rm[1][m];
                Q[m][a] = Rm[m][0] * w[a][0] + Rm[m][1] * w[a][1];
            }
        }
        Eigen::Index row = 2 * nm * i;
        for (int e = 0; e < 4; ++e) {
            if (!mask.use[e]) continue;
            const int a = kRowOf[e];
            const int b = kColOf[e];
            cplx d[kParamCount];
            const cplx d00 = k * L[a][0] * Q[0][b];
            const cplx d11 = k * L[a][1] * Q[1][b];
            const cplx d01 = k * L[a][0] * Q[1][b];
            const cplx d10 = k * L[a][1] * Q[0][b];
            d[0] = d00;
            d[1] = kI * d00;
            d[2] = d11;
            d[3] = kI * d11;
            d[4] = d01 + d10;
            d[5] = kI * (d01 + d10);
            d[6] = -kI * d01 + kI * d10;
            d[7] = d01 - d10;
            // dS_ab/dW_cm = k (delta_ac Q_mb + L_am delta_bc)
            for (int c = 0; c < 2; ++c) {
                for (int m = 0; m < 2; ++m) {
                    cplx v = 0.0;
                    if (a == c) v += Q[m][b];
                    if (b == c) v += L[a][m];
                    d[8 + 2 * c + m] = k * v;
                }
            }
            for (int j = 0; j < kParamCount; ++j) {
                J(row, j) = d[j].real();
                J(row + 1, j) = d[j].imag();
            }
            row += 2;
        }
    }
}

}  // namespace ptlab::fit
