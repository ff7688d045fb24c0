#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>

#include "oracles.hpp"
#include "ptlab/core/error.hpp"
#include "ptlab/scan/scan_io.hpp"

using namespace ptlab;
using namespace ptlab::scan;

namespace {

Errc code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return Errc::invalid_argument;
}

const synth::SyntheticFamily& b38() {
    static const synth::SyntheticFamily fam(synth::builtin_preset("b38"));
    return fam;
}

}  // namespace

TEST_CASE("grid syntax") {
    const auto g = ParamGrid::parse("1.5:2.0:0.01x41.5:42.0:0.01");
    CHECK(g.ns() == 51);
    CHECK(g.nd() == 51);
    CHECK(g.size() == 2601);
    CHECK(g.s_at(50) == doctest::Approx(2.0));
    CHECK(ParamGrid::parse(g.str()).size() == 2601);
    CHECK(ParamGrid::point(1.7, 41.2).size() == 1);
    CHECK(ParamGrid::centered(1.72, 41.78, 0.25).ns() == 51);
    CHECK(code_of([] { ParamGrid::parse("1:2:0.1"); }) == Errc::invalid_argument);
    CHECK(code_of([] { ParamGrid::parse("2:1:0.1x1:2:0.1"); }) == Errc::invalid_argument);
    CHECK(code_of([] { ParamGrid::parse("1:2:0x1:2:0.1"); }) == Errc::invalid_argument);
    CHECK(code_of([] { ParamGrid::parse("0:1:1e-5x0:1:1e-5"); }) == Errc::invalid_argument);
}

TEST_CASE("family scan") {
    const auto g = ParamGrid::parse("1.5:2.0:0.05x41.5:42.0:0.05");
    const auto sr = scan::scan(g, ScanSource::from_family(b38()));
    CHECK(sr.points.size() == g.size());
    CHECK(sr.failures() == 0);
    CHECK(sr.provenance == Provenance::family_direct);
    const auto& p = sr.at(3, 7);
    CHECK(p.s == doctest::Approx(1.65));
    CHECK(p.delta == doctest::Approx(41.85));
    const auto R = oracle::charpoly_roots(b38().H_at(p.s, p.delta).matrix());
    CHECK(oracle::pair_distance(p.E.E1, p.E.E2, R[0], R[1]) < 1e-9);
    CHECK(p.E.E1.real() <= p.E.E2.real());
}

TEST_CASE("scan is independent of the worker count") {
    const auto g = ParamGrid::parse("1.5:2.0:0.05x41.5:42.0:0.05");
    ScanOptions one, three;
    one.jobs = 1;
    three.jobs = 3;
    const auto a = scan::scan(g, ScanSource::from_family(b38()), one);
    const auto b = scan::scan(g, ScanSource::from_family(b38()), three);
    CHECK(scan_csv(a, "x") == scan_csv(b, "x"));
}

TEST_CASE("parallel_for propagates errors") {
    std::atomic<int> n{0};
    parallel_for(100, 4, [&](std::size_t) { ++n; });
    CHECK(n == 100);
    CHECK_THROWS_AS(parallel_for(10, 2, [](std::size_t k) {
                        if (k == 5) throw Error(Errc::io_error, "boom");
                    }),
                    Error);
}

TEST_CASE("scan quality gate") {
    const auto g = ParamGrid::parse("1.5:2.0:0.1x41.5:42.0:0.1");
    const auto loader = [](double s, double) -> synth::Spectrum {
        if (s > 1.65) throw Error(Errc::io_error, "missing file");
        return b38().spectrum_at(s, 41.7, {0.0, 0});
    };
    CHECK(code_of([&] { scan::scan(g, ScanSource::from_spectra(loader)); }) == Errc::scan_quality);
    ScanOptions lax;
    lax.max_failure_rate = 1.0;
    const auto sr = scan::scan(g, ScanSource::from_spectra(loader), lax);
    CHECK(sr.failures() == 24);
    CHECK(sr.at(5, 0).status == "io-error");
}

TEST_CASE("locate the exceptional point") {
    const auto sr = scan::scan(ParamGrid::parse("1.5:2.0:0.01x41.5:42.0:0.01"), ScanSource::from_family(b38()));
    const auto loc = locate_ep(sr);
    CHECK(std::abs(loc.s - 1.72) <= 0.01);
    CHECK(std::abs(loc.delta - 41.78) <= 0.01);
    CHECK(loc.s_uncertainty == doctest::Approx(0.01));
    // window that misses the point
    const auto off = scan::scan(ParamGrid::parse("1.8:2.0:0.01x41.9:42.1:0.01"), ScanSource::from_family(b38()));
    CHECK(code_of([&] { locate_ep(off); }) == Errc::ep_outside_window);
}

TEST_CASE("flat landscape has no exceptional point") {
    ScanSource src;
    src.kind = Provenance::family_direct;
    src.hamiltonian = [](double, double) { return EffHamiltonian::from_pauli({1, -1}, {2, -1}, 0.1, 0.0); };
    const auto sr = scan::scan(ParamGrid::parse("0:1:0.1x0:1:0.1"), src);
    CHECK(code_of([&] { locate_ep(sr); }) == Errc::no_ep_found);
}

TEST_CASE("interpolated field") {
    const auto sr = scan::scan(ParamGrid::parse("1.5:2.0:0.05x41.5:42.0:0.05"), ScanSource::from_family(b38()));
    const auto f = interpolated_field(sr);
    CHECK((f.eval(1.65, 41.85).matrix() - b38().H_at(1.65, 41.85).matrix()).max_abs() < 1e-12);
    // the family is affine, so bilinear interpolation is exact in between
    CHECK((f.eval(1.6731, 41.8122).matrix() - b38().H_at(1.6731, 41.8122).matrix()).max_abs() < 1e-10);
    CHECK(code_of([&] { f.eval(2.5, 41.7); }) == Errc::out_of_bounds);
}

TEST_CASE("trace the curve of real radicand") {
    const auto tr = trace_pt_curve(family_field(b38()), {1.72, 41.78});
    REQUIRE(tr.points.size() > 50);
    CHECK_FALSE(tr.truncated);
    REQUIRE(tr.ep_index >= 0);
    const auto& ep = tr.points[static_cast<std::size_t>(tr.ep_index)];
    CHECK(ep.s == doctest::Approx(1.72).epsilon(1e-6));
    CHECK(ep.delta == doctest::Approx(41.78).epsilon(1e-8));
    for (std::size_t k = 0; k < tr.points.size(); ++k) {
        const auto& p = tr.points[k];
        const auto P = oracle::radicand_parts(b38().H_at(p.s, p.delta).matrix());
        CHECK(std::abs(P.cross) < 1e-9 * (P.reh2 + P.imh2));
        if (static_cast<long>(k) != tr.ep_index) CHECK((P.reh2 > P.imh2) == (p.s > 1.72));
        if (k > 0) CHECK(p.s > tr.points[k - 1].s);
    }
    // the analytic curve is delta - 41.78 = -(s - 1.72)
    for (const auto& p : tr.points) CHECK(std::abs((p.delta - 41.78) + (p.s - 1.72)) < 1e-6);
    CHECK(code_of([] { trace_pt_curve(family_field(b38()), {1.5, 41.5}); }) == Errc::not_on_pt_curve);
}

TEST_CASE("curve from an interpolated scan") {
    const auto sr = scan::scan(ParamGrid::parse("1.5:2.0:0.01x41.5:42.0:0.01"), ScanSource::from_family(b38()));
    const auto loc = locate_ep(sr);
    const auto tr = trace_pt_curve(sr, {loc.s, loc.delta});
    CHECK(tr.ep_index >= 0);
    CHECK(tr.points.size() > 40);
}

TEST_CASE("braiding") {
    const auto f = family_field(b38());
    CHECK(braid(square_loop({1.72, 41.78}, 0.1), f).permutation == Permutation::swap);
    CHECK(braid(circle_loop({1.75, 41.76}, 0.2), f).permutation == Permutation::swap);
    CHECK(braid(square_loop({1.95, 42.0}, 0.1), f).permutation == Permutation::identity);
    CHECK(braid(circle_loop({1.72, 41.78}, 0.1, 64, 2), f).permutation == Permutation::identity);
    const auto bt = braid(circle_loop({1.72, 41.78}, 0.1), f);
    CHECK(std::abs(bt.E1.back() - bt.E2.front()) < 1e-6);
    CHECK(code_of([&] { braid({{1.7, 41.7}, {1.8, 41.7}, {1.8, 41.8}, {1.7, 41.8}}, f); }) == Errc::invalid_argument);
    CHECK(code_of([] { circle_loop({0, 0}, -1.0); }) == Errc::invalid_argument);
}

TEST_CASE("scan table round trip") {
    const auto sr = scan::scan(ParamGrid::parse("1.5:2.0:0.05x41.5:42.0:0.05"), ScanSource::from_family(b38()));
    const std::string text = scan_csv(sr, "0123456789abcdef");
    const auto back = parse_scan_csv(text);
    CHECK(back.grid.size() == sr.grid.size());
    CHECK(back.provenance == sr.provenance);
    for (std::size_t k = 0; k < sr.points.size(); ++k) CHECK(back.points[k].H == sr.points[k].H);
    CHECK(scan_csv(back, "0123456789abcdef") == text);
}

TEST_CASE("curve json round trip") {
    const auto tr = trace_pt_curve(family_field(b38()), {1.72, 41.78});
    const auto back = curve_from_json(to_json(tr));
    REQUIRE(back.points.size() == tr.points.size());
    CHECK(back.ep_index == tr.ep_index);
    for (std::size_t k = 0; k < tr.points.size(); ++k) CHECK(back.points[k].H == tr.points[k].H);
    CHECK(code_of([] { curve_from_json(nlohmann::json::object()); }) == Errc::parse_error);
}
