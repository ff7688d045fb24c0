#include "ptlab/scan/braid.hpp"

#include <cmath>

#include "ptlab/core/error.hpp"

namespace ptlab::scan {

namespace {

Loop refine(const Loop& loop) {
    Loop out;
    out.reserve(2 * loop.size());
    for (std::size_t k = 0; k + 1 < loop.size(); ++k) {
        out.push_back(loop[k]);
        out.push_back({0.5 * (loop[k].first + loop[k + 1].first), 0.5 * (loop[k].second + loop[k + 1].second)});
    }
    out.push_back(loop.back());
    return out;
}


// Tracks once; returns false and sets where on ambiguity.
bool track(const Loop& loop, const HamiltonianField& field, const BraidOptions& opts, BraidTrace& tr,
           std::size_t& where) {
    tr.E1.clear();
    tr.E2.clear();
    for (std::size_t k = 0; k < loop.size(); ++k) {
        const EffHamiltonian H = field.eval(loop[k].first, loop[k].second);
        const EigenPair E = eigenvalues(H);
        const double hn = std::sqrt(radicand(H).scale());
        const double gap = std::abs(E.E1 - E.E2);
        if (!(gap > opts.gap_tol * hn)) {
            where = k;
            return false;
        }
        if (k == 0) {
            tr.E1.push_back(E.E1);
            tr.E2.push_back(E.E2);
            continue;
        }
        const cplx p1 = tr.E1.back(), p2 = tr.E2.back();
        const double keep = std::abs(E.E1 - p1) + std::abs(E.E2 - p2);
        const double cross = std::abs(E.E2 - p1) + std::abs(E.E1 - p2);
        const cplx n1 = keep <= cross ? E.E1 : E.E2;
        const cplx n2 = keep <= cross ? E.E2 : E.E1;
        const double jump = std::max(std::abs(n1 - p1), std::abs(n2 - p2));
        const double prev_gap = std::abs(p1 - p2);
        if (!(jump < 0.5 * std::min(gap, prev_gap))) {
            where = k;
            return false;
        }
        tr.E1.push_back(n1);
        tr.E2.push_back(n2);
    }
    return true;
}

}  // namespace

const char* permutation_name(Permutation p) { return p == Permutation::swap ? "swap" : "identity"; }

Loop circle_loop(std::pair<double, double> center, double radius, int n, int turns) {
    if (n < 3 || turns < 1 || !(radius > 0.0)) throw Error(Errc::invalid_argument, "circle loop needs n >= 3, turns >= 1, radius > 0");
    Loop out;
    const int total = n * turns;
    for (int k = 0; k < total; ++k) {
        const double a = 2.0 * kPi * static_cast<double>(k % n) / n;
        out.push_back({center.first + radius * std::cos(a), center.second + radius * std::sin(a)});
    }
    out.push_back(out.front());
    return out;
}

Loop square_loop(std::pair<double, double> center, double half_width, int n, int turns) {
    if (n < 4 || turns < 1 || !(half_width > 0.0))
        throw Error(Errc::invalid_argument, "square loop needs n >= 4, turns >= 1, half_width > 0");
    // Perimeter parameter u in [0, 8): four sides of length 2 each (units of half_width),
    // starting at the lower-left corner.
    Loop out;
    const int total = n * turns;
    for (int k = 0; k < total; ++k) {
        const double u = 8.0 * static_cast<double>(k % n) / n;
        double x, y;
        if (u < 2.0) {
            x = -1.0 + u;
            y = -1.0;
        } else if (u < 4.0) {
            x = 1.0;
            y = -1.0 + (u - 2.0);
        } else if (u < 6.0) {
            x = 1.0 - (u - 4.0);
            y = 1.0;
        } else {
            x = -1.0;
            y = 1.0 - (u - 6.0);
        }
        out.push_back({center.first + half_width * x, center.second + half_width * y});
    }
    out.push_back(out.front());
    return out;
}

BraidTrace braid(const Loop& loop, const HamiltonianField& field, const BraidOptions& opts) {
    if (loop.size() < 4) throw Error(Errc::invalid_argument, "loop needs at least 3 distinct points");
    if (std::abs(loop.front().first - loop.back().first) > 1e-12 ||
        std::abs(loop.front().second - loop.back().second) > 1e-12)
        throw Error(Errc::invalid_argument, "loop is not closed (first point != last point)");

    BraidTrace tr;
    tr.loop = loop;
    while (static_cast<int>(tr.loop.size()) - 1 < opts.min_points) {
        tr.loop = refine(tr.loop);
        ++tr.refinements;
    }
    while (true) {
        std::size_t where = 0;
        if (track(tr.loop, field, opts, tr, where)) break;
        if (2 * (static_cast<int>(tr.loop.size()) - 1) > opts.max_points) {
            const auto& p = tr.loop[where];
            throw Error(Errc::refine_loop, "eigenvalue tracking ambiguous near (" + std::to_string(p.first) + ", " +
                                               std::to_string(p.second) + ") mm with " +
                                               std::to_string(tr.loop.size() - 1) +
                                               " segments; use a finer loop or move it off the EP");
        }
        tr.loop = refine(tr.loop);
        ++tr.refinements;
    }
    // The loop is closed, so the final pair is the starting pair in some order.
    const cplx start = tr.E1.front();
    const bool same = std::abs(tr.E1.back() - start) <= std::abs(tr.E2.back() - start);
    tr.permutation = same ? Permutation::identity : Permutation::swap;
    return tr;
}

}  // namespace ptlab::scan
