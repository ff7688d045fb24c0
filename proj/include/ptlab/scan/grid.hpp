#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>

#include "ptlab/core/hamiltonian.hpp"

namespace ptlab::synth {
class SyntheticFamily;
}

namespace ptlab::scan {

inline constexpr double kDefaultGridStep = 0.01;  // [mm]
inline constexpr std::size_t kMaxGridPoints = 10'000'000;

/// Rectangular (s, delta) grid [mm]. A zero extent gives a single line or point.
struct ParamGrid {
    double s_min = 0.0, s_max = 0.0, s_step = kDefaultGridStep;
    double delta_min = 0.0, delta_max = 0.0, delta_step = kDefaultGridStep;

    /// "min:max:step" per axis joined by 'x', s first: "1.5:2.0:0.01x41.5:42.0:0.01".
    static ParamGrid parse(std::string_view text);
    static ParamGrid point(double s, double delta);
    static ParamGrid centered(double s, double delta, double half_width, double step = kDefaultGridStep);

    /// Throws invalid_argument unless steps > 0, bounds ordered, size <= 1e7.
    void validate() const;
    std::size_t ns() const;
    std::size_t nd() const;
    std::size_t size() const { return ns() * nd(); }
    double s_at(std::size_t i) const { return s_min + static_cast<double>(i) * s_step; }
    double delta_at(std::size_t j) const { return delta_min + static_cast<double>(j) * delta_step; }
    std::string str() const;
};

struct Bounds {
    double s_min = 0.0, s_max = 0.0, delta_min = 0.0, delta_max = 0.0;
    bool contains(double s, double delta, double slack = 1e-9) const {
        return s >= s_min - slack && s <= s_max + slack && delta >= delta_min - slack && delta <= delta_max + slack;
    }
};

/// H(s, delta) on a rectangle; eval throws out_of_bounds outside it.
struct HamiltonianField {
    std::function<EffHamiltonian(double s, double delta)> eval;
    Bounds bounds;
};

HamiltonianField family_field(const synth::SyntheticFamily& fam);

}  // namespace ptlab::scan
