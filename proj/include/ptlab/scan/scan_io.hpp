#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "ptlab/scan/braid.hpp"
#include "ptlab/scan/curve.hpp"
#include "ptlab/scan/locate.hpp"

namespace ptlab::scan {

/// One row per grid point:
///   s_mm,delta_mm,f1,g1,f2,g2,reh2,imh2,cross,tau,status
/// followed by the Pauli entries re_e1,im_e1,...,im_h2 and residual_rms so
/// the table can be read back into a ScanResult. g = Gamma = -2 Im E.
std::string scan_csv(const ScanResult& scan, std::string_view config_hash);
/// Same table for an arbitrary list of points, e.g. a fit summary.
std::string points_csv(const std::vector<ScanPoint>& points, std::string_view config_hash, Provenance provenance,
                       std::string_view grid = {});

/// Rebuilds a ScanResult from a scan or fit-summary table. The grid is
/// inferred from the distinct s and delta values; grid points without a row
/// are marked failed with status "missing".
ScanResult parse_scan_csv(std::string_view text, std::string_view origin = "<memory>");
ScanResult read_scan_csv(const std::string& path);

nlohmann::json to_json(const EpLocation& loc);
/// Raw radicand parts plus the same divided by |h1|^2 of each point and of the EP point.
nlohmann::json to_json(const CurveTrace& trace);
CurveTrace curve_from_json(const nlohmann::json& j);
nlohmann::json to_json(const BraidTrace& trace);

}  // namespace ptlab::scan
