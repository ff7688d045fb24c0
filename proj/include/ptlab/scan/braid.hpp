#pragma once

#include <utility>
#include <vector>

#include "ptlab/scan/grid.hpp"

namespace ptlab::scan {

using Loop = std::vector<std::pair<double, double>>;

enum class Permutation { identity, swap };

const char* permutation_name(Permutation p);

struct BraidTrace {
    Loop loop;  // as evaluated, after any refinement; first == last
    std::vector<cplx> E1, E2;  // tracked paths, E1[0] = branch-labelled E1 at the start
    Permutation permutation = Permutation::identity;
    int refinements = 0;  // number of loop doublings applied
};

struct BraidOptions {
    int min_points = 64;
    int max_points = 1 << 16;
    /// Eigenvalue gap, relative to |h|, below which tracking is ambiguous.
    double gap_tol = 1e-9;
};

/// Closed polygon loops with n segments, traversed `turns` times counter-clockwise.
Loop circle_loop(std::pair<double, double> center, double radius, int n = 64, int turns = 1);
Loop square_loop(std::pair<double, double> center, double half_width, int n = 64, int turns = 1);

/// Nearest-neighbour continuation of both eigenvalues around a closed loop.
/// A step whose jump reaches half the local eigenvalue gap is ambiguous; the
/// loop is then refined by segment midpoints, first up to min_points and then
/// by doubling up to max_points, after which refine_loop is raised. Throws
/// invalid_argument for an open loop.
BraidTrace braid(const Loop& loop, const HamiltonianField& field, const BraidOptions& opts = {});

}  // namespace ptlab::scan
