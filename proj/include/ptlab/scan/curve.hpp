#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ptlab/scan/scan.hpp"

namespace ptlab::scan {

struct CurvePoint {
    double s = 0.0, delta = 0.0;
    EffHamiltonian H;
    Radicand D;
    double tau = 0.0;
    double rel_cross = 0.0;  // |Re h . Im h| / (|Re h|^2 + |Im h|^2)
};

/// Zero contour of Re h . Im h, ordered by increasing s.
struct CurveTrace {
    std::vector<CurvePoint> points;
    /// Point where |Re h|^2 - |Im h|^2 changes sign; -1 if it does not.
    long ep_index = -1;
    bool truncated = false;
    std::string truncation_reason;
    double step = 0.0;
    double eps_curve = 0.0;
};

struct CurveOptions {
    double step = 0.01;      // arc length per predictor step [mm]
    double eps_curve = 1e-9;  // accepted |cross| relative to reh2 + imh2
    int max_points = 100000;
    int max_corrector_iterations = 30;
    /// Orientation of the first tangent; the returned trace is the same up to
    /// point placement for either sign.
    int direction = 1;
};

/// Defaults for fitted data: eps_curve 1e-3.
CurveOptions fitted_curve_options();

/// Predictor-corrector continuation of cross = 0 from start in both
/// directions to the field boundary. The sign change of reh2 - imh2 is
/// bisected and inserted as an explicit point. Throws not_on_pt_curve if the
/// start cannot be corrected onto the curve; a corrector failure later on
/// returns the partial trace with truncated = true.
CurveTrace trace_pt_curve(const HamiltonianField& field, std::pair<double, double> start, const CurveOptions& opts = {});
CurveTrace trace_pt_curve(const ScanResult& scan, std::pair<double, double> start, const CurveOptions& opts = {});

}  // namespace ptlab::scan
