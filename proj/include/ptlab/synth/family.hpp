#pragma once

#include <array>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ptlab/synth/coupling.hpp"
#include "ptlab/synth/spectrum.hpp"

namespace ptlab::synth {

/// c + d_ds * (s - s_ep) + d_ddelta * (delta - delta_ep)
struct AffineEntry {
    cplx c{};
    cplx d_ds{};
    cplx d_ddelta{};

    cplx at(double ds, double dd) const { return c + d_ds * ds + d_ddelta * dd; }
};

/// Explicit affine coefficients of a two-parameter synthetic family. This is
/// what ships as a JSON preset.
struct FamilyPreset {
    std::string name;
    double B_mT = 0.0;
    double s_ep = 0.0, delta_ep = 0.0;  // [mm]
    double s_min = 0.0, s_max = 0.0, delta_min = 0.0, delta_max = 0.0;
    double f_center = 0.0;  // spectrum window centre [MHz]
    AffineEntry e1, e2, h1, h2;
    CouplingSet W;
};

/// Physical knobs from which a preset is built. With u = s - s_ep and
/// w = (delta - delta_ep) + curve_slope * u:
///
///     Re mean = f_center + slope_s (s - s_ep) + slope_delta (delta - delta_ep)
///     Im mean = -gamma_mean,   Im h = (0, 0, -gamma_split)
///     Re h1   = r_ep[0] + along[0] u + across[0] w
///     Re h2   = r_ep[1] + along[1] u + across[1] w
///     Re h3   = h3_slope * w
///
/// Re h . Im h = -gamma_split * h3_slope * w, so the curve of real radicand is
/// the line w = 0. |r_ep| = gamma_split puts the exceptional point at u = w = 0.
/// W is completed with two dissipative rows so that pi W^T W =
/// diag(gamma_mean + gamma_split, gamma_mean - gamma_split); the family is
/// then in the gauge where h1/h2 is real and tau = atan(Re h2 / Re h1).
struct FamilyDesign {
    std::string name;
    double B_mT = 0.0;
    double s_ep = 0.0, delta_ep = 0.0;
    double half_window = 0.5;  // [mm]
    double f_center = 0.0;
    double slope_s = 0.0, slope_delta = 0.0;  // [MHz/mm]
    double gamma_mean = 0.0;                  // (Gamma1 + Gamma2)/4 [MHz]
    double gamma_split = 0.0;                 // [MHz]
    std::array<double, 2> r_ep{};             // [MHz]
    std::array<double, 2> along{};            // [MHz/mm]
    std::array<double, 2> across{};           // [MHz/mm]
    double h3_slope = 0.0;                    // [MHz/mm]
    double curve_slope = 1.0;
    std::array<std::array<double, 2>, 2> antenna{};  // [sqrt(MHz)]
};

FamilyPreset build_preset(const FamilyDesign& d);

/// Built-in presets: "b38" (B = 38 mT, EP at (1.72, 41.78) mm) and
/// "b0" (B = 0, T-invariant, EP at (1.68, 41.19) mm).
std::vector<std::string> builtin_preset_names();
FamilyDesign builtin_design(std::string_view name);
FamilyPreset builtin_preset(std::string_view name);

void to_json(nlohmann::json& j, const FamilyPreset& p);
void from_json(const nlohmann::json& j, FamilyPreset& p);

class SyntheticFamily {
public:
    /// Validates bounds and that the preset has an exceptional point at its
    /// declared location.
    explicit SyntheticFamily(FamilyPreset preset);

    const FamilyPreset& preset() const { return preset_; }
    const CouplingSet& couplings() const { return preset_.W; }
    std::pair<double, double> ep_location() const { return {preset_.s_ep, preset_.delta_ep}; }
    double center_frequency() const { return preset_.f_center; }

    bool contains(double s, double delta) const;

    /// Throws out_of_bounds outside the declared window.
    EffHamiltonian H_at(double s, double delta) const;
    std::pair<EffHamiltonian, CouplingSet> at(double s, double delta) const { return {H_at(s, delta), couplings()}; }

    /// Planted T-violation profile. Closed form atan(Re h2 / Re h1) for presets
    /// with real h1, h2 coefficients; otherwise gauge_fix + extract_tau.
    double tau_at(double s, double delta) const;

    /// Spectrum of the family at (s, delta) on the default 40 MHz / 10 kHz window.
    Spectrum spectrum_at(double s, double delta, const NoiseSpec& noise, double span = kDefaultSpanMHz,
                         double step = kDefaultStepMHz) const;

private:
    FamilyPreset preset_;
    bool real_offdiagonal_ = false;
};

}  // namespace ptlab::synth
