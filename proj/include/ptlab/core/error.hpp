#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ptlab {

enum class Errc {
    invalid_argument,
    degenerate_gauge,
    not_gauge_fixed,
    singular_ratio,
    not_on_pt_curve,
    degenerate_rotation,
    pole_on_grid,
    non_convergence,
    insufficient_span,
    unresolvable_doublet,
    out_of_bounds,
    ep_outside_window,
    no_ep_found,
    scan_quality,
    refine_loop,
    contour_lost,
    io_error,
    parse_error,
};

std::string_view errc_name(Errc code) noexcept;

/// Exit-code class of an error: 1 usage, 2 data, 3 numerical failure.
int errc_exit_class(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace ptlab
