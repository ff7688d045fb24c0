#include "ptlab/synth/family.hpp"

#include <cmath>

#include "ptlab/core/error.hpp"
#include "ptlab/core/serialize.hpp"
#include "ptlab/core/transforms.hpp"

namespace ptlab::synth {

namespace {

constexpr double kBoundsSlack = 1e-9;  // [mm], admits grid points with rounding

bool is_real(const AffineEntry& e) { return e.c.imag() == 0.0 && e.d_ds.imag() == 0.0 && e.d_ddelta.imag() == 0.0; }

nlohmann::json affine_to_json(const AffineEntry& e) {
    return {{"const", complex_to_json(e.c)}, {"d_ds", complex_to_json(e.d_ds)}, {"d_ddelta", complex_to_json(e.d_ddelta)}};
}

AffineEntry affine_from_json(const nlohmann::json& j) {
    return {complex_from_json(j.at("const")), complex_from_json(j.at("d_ds")), complex_from_json(j.at("d_ddelta"))};
}

}  // namespace

FamilyPreset build_preset(const FamilyDesign& d) {
    if (!(d.gamma_mean >= std::abs(d.gamma_split)))
        throw Error(Errc::invalid_argument, "gamma_mean must dominate gamma_split for passive damping");

    FamilyPreset p;
    p.name = d.name;
    p.B_mT = d.B_mT;
    p.s_ep = d.s_ep;
    p.delta_ep = d.delta_ep;
    p.s_min = d.s_ep - d.half_window;
    p.s_max = d.s_ep + d.half_window;
    p.delta_min = d.delta_ep - d.half_window;
    p.delta_max = d.delta_ep + d.half_window;
    p.f_center = d.f_center;

    const double m = d.curve_slope;
    // r_k = r_ep + along u + across (dd + m u)
    auto real_entry = [m](double c, double along, double across) {
        return AffineEntry{c, along + across * m, across};
    };
    p.h1 = real_entry(d.r_ep[0], d.along[0], d.across[0]);
    p.h2 = real_entry(d.r_ep[1], d.along[1], d.across[1]);
    const double k = d.h3_slope;
    p.e1 = {cplx{d.f_center, -(d.gamma_mean + d.gamma_split)}, d.slope_s + k * m, d.slope_delta + k};
    p.e2 = {cplx{d.f_center, -(d.gamma_mean - d.gamma_split)}, d.slope_s - k * m, d.slope_delta - k};

    // Dissipative rows: Cholesky factor of diag(P, T) - Wa^T Wa.
    const auto& wa = d.antenna;
    const double P = (d.gamma_mean + d.gamma_split) / kPi;
    const double T = (d.gamma_mean - d.gamma_split) / kPi;
    const double m00 = P - (wa[0][0] * wa[0][0] + wa[1][0] * wa[1][0]);
    const double m01 = -(wa[0][0] * wa[0][1] + wa[1][0] * wa[1][1]);
    const double m11 = T - (wa[0][1] * wa[0][1] + wa[1][1] * wa[1][1]);
    if (!(m00 > 0.0) || !(m00 * m11 - m01 * m01 >= 0.0))
        throw Error(Errc::invalid_argument, "antenna couplings exceed the total damping");
    const double l00 = std::sqrt(m00);
    const double l10 = m01 / l00;
    const double l11 = std::sqrt(std::max(0.0, m11 - l10 * l10));
    p.W = CouplingSet({wa[0], wa[1], {l00, l10}, {0.0, l11}});
    return p;
}

std::vector<std::string> builtin_preset_names() { return {"b38", "b0"}; }

FamilyDesign builtin_design(std::string_view name) {
    FamilyDesign d;
    d.half_window = 0.5;
    d.gamma_mean = 1.1;
    d.gamma_split = 0.9;
    d.h3_slope = 3.0;
    d.curve_slope = 1.0;
    d.antenna = {{{0.20, 0.05}, {0.04, 0.18}}};
    if (name == "b38") {
        d.name = "b38";
        d.B_mT = 38.0;
        d.s_ep = 1.72;
        d.delta_ep = 41.78;
        d.f_center = 2441.0;
        d.slope_s = 2.0;
        d.slope_delta = -1.0;
        // 0.9 * (24/25, 7/25): |r_ep| = gamma_split, tau_ep = atan(7/24)
        d.r_ep = {0.864, 0.252};
        d.along = {1.0, 0.45};
        d.across = {0.4, -0.2};
        return d;
    }
    if (name == "b0") {
        d.name = "b0";
        d.B_mT = 0.0;
        d.s_ep = 1.68;
        d.delta_ep = 41.19;
        d.f_center = 2438.0;
        d.slope_s = 1.5;
        d.slope_delta = -0.8;
        d.r_ep = {0.9, 0.0};
        d.along = {1.2, 0.0};
        d.across = {0.3, 0.0};
        return d;
    }
    throw Error(Errc::invalid_argument, "unknown family preset '" + std::string(name) + "'");
}

FamilyPreset builtin_preset(std::string_view name) { return build_preset(builtin_design(name)); }

void to_json(nlohmann::json& j, const FamilyPreset& p) {
    nlohmann::json w = nlohmann::json::array();
    for (const auto& r : p.W.rows()) w.push_back({r[0], r[1]});
    j = {{"schema_version", 1},
         {"name", p.name},
         {"B_mT", p.B_mT},
         {"ep", {{"s_mm", p.s_ep}, {"delta_mm", p.delta_ep}}},
         {"bounds", {{"s_min", p.s_min}, {"s_max", p.s_max}, {"delta_min", p.delta_min}, {"delta_max", p.delta_max}}},
         {"f_center_MHz", p.f_center},
         {"heff",
          {{"e1", affine_to_json(p.e1)},
           {"e2", affine_to_json(p.e2)},
           {"h1", affine_to_json(p.h1)},
           {"h2", affine_to_json(p.h2)}}},
         {"W", w}};
}

void from_json(const nlohmann::json& j, FamilyPreset& p) {
    try {
        p.name = j.at("name").get<std::string>();
        p.B_mT = j.at("B_mT").get<double>();
        p.s_ep = j.at("ep").at("s_mm").get<double>();
        p.delta_ep = j.at("ep").at("delta_mm").get<double>();
        const auto& b = j.at("bounds");
        p.s_min = b.at("s_min").get<double>();
        p.s_max = b.at("s_max").get<double>();
        p.delta_min = b.at("delta_min").get<double>();
        p.delta_max = b.at("delta_max").get<double>();
        p.f_center = j.at("f_center_MHz").get<double>();
        const auto& h = j.at("heff");
        p.e1 = affine_from_json(h.at("e1"));
        p.e2 = affine_from_json(h.at("e2"));
        p.h1 = affine_from_json(h.at("h1"));
        p.h2 = affine_from_json(h.at("h2"));
        std::vector<std::array<double, 2>> rows;
        for (const auto& r : j.at("W")) rows.push_back({r.at(0).get<double>(), r.at(1).get<double>()});
        p.W = CouplingSet(std::move(rows));
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::parse_error, std::string("family preset: ") + e.what());
    }
}

SyntheticFamily::SyntheticFamily(FamilyPreset preset) : preset_(std::move(preset)) {
    const auto& p = preset_;
    if (!(p.s_min < p.s_max) || !(p.delta_min < p.delta_max))
        throw Error(Errc::invalid_argument, "family bounds must be ordered");
    if (!contains(p.s_ep, p.delta_ep)) throw Error(Errc::invalid_argument, "family EP lies outside its bounds");
    if (!is_ep(H_at(p.s_ep, p.delta_ep), 1e-8, 1e-12))
        throw Error(Errc::invalid_argument, "family '" + p.name + "' has no exceptional point at its declared location");
    real_offdiagonal_ = is_real(p.h1) && is_real(p.h2);
}

bool SyntheticFamily::contains(double s, double delta) const {
    const auto& p = preset_;
    return s >= p.s_min - kBoundsSlack && s <= p.s_max + kBoundsSlack && delta >= p.delta_min - kBoundsSlack &&
           delta <= p.delta_max + kBoundsSlack;
}

EffHamiltonian SyntheticFamily::H_at(double s, double delta) const {
    if (!contains(s, delta))
        throw Error(Errc::out_of_bounds, "(s, delta) = (" + std::to_string(s) + ", " + std::to_string(delta) +
                                             ") mm outside family '" + preset_.name + "'");
    const double ds = s - preset_.s_ep;
    const double dd = delta - preset_.delta_ep;
    return EffHamiltonian::from_pauli(preset_.e1.at(ds, dd), preset_.e2.at(ds, dd), preset_.h1.at(ds, dd),
                                      preset_.h2.at(ds, dd));
}

double SyntheticFamily::tau_at(double s, double delta) const {
    const EffHamiltonian H = H_at(s, delta);
    if (real_offdiagonal_) {
        const double r1 = H.h1().real();
        const double r2 = H.h2().real();
        if (r2 == 0.0) return 0.0;
        if (r1 == 0.0) throw Error(Errc::singular_ratio, "tau = +-pi/2 at this point");
        return std::atan(r2 / r1);
    }
    return extract_tau(gauge_fix(H).first);
}

Spectrum SyntheticFamily::spectrum_at(double s, double delta, const NoiseSpec& noise, double span, double step) const {
    Spectrum sp = synth_spectrum(H_at(s, delta), couplings(), preset_.f_center, span, step, noise);
    sp.meta.s_mm = s;
    sp.meta.delta_mm = delta;
    sp.meta.B_mT = preset_.B_mT;
    return sp;
}

}  // namespace ptlab::synth
