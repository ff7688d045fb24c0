#pragma once

#include <cstddef>

#include "ptlab/scan/scan.hpp"

namespace ptlab::scan {

struct EpLocation {
    double s = 0.0, delta = 0.0;               // refined location [mm]
    double s_offset = 0.0, delta_offset = 0.0;  // refinement relative to the coarse grid point [mm]
    double s_uncertainty = 0.0, delta_uncertainty = 0.0;  // one grid step
    std::size_t i = 0, j = 0;                  // coarse grid indices
    double abs_d = 0.0;                        // |D| at the coarse point
    bool refined = false;
};

/// argmin |D| over the successful points, refined by a least-squares
/// quadratic of |D|^2 on the 3x3 neighbourhood (offset clipped to one step).
/// Throws ep_outside_window for a minimum on the grid boundary and
/// no_ep_found when |D| varies by less than flat_tol relative over the grid.
EpLocation locate_ep(const ScanResult& scan, double flat_tol = 1e-6);

}  // namespace ptlab::scan
