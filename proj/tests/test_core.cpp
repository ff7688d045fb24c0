#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "ptlab/core/error.hpp"
#include "ptlab/core/pt.hpp"
#include "ptlab/core/serialize.hpp"
#include "ptlab/core/transforms.hpp"

using namespace ptlab;

namespace {

EffHamiltonian on_curve(std::mt19937_64& rng, double re_norm, double im_norm, cplx mean) {
    // Re h and Im h orthogonal in R^3
    std::normal_distribution<double> g;
    double r[3] = {g(rng), g(rng), g(rng)};
    double m[3] = {g(rng), g(rng), g(rng)};
    const double rr = std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
    for (double& x : r) x /= rr;
    const double dot = r[0] * m[0] + r[1] * m[1] + r[2] * m[2];
    for (int k = 0; k < 3; ++k) m[k] -= dot * r[k];
    const double mm = std::sqrt(m[0] * m[0] + m[1] * m[1] + m[2] * m[2]);
    const cplx h1{re_norm * r[0], im_norm * m[0] / mm};
    const cplx h2{re_norm * r[1], im_norm * m[1] / mm};
    const cplx h3{re_norm * r[2], im_norm * m[2] / mm};
    return EffHamiltonian::from_pauli(mean + h3, mean - h3, h1, h2);
}

}  // namespace

TEST_CASE("pauli entries") {
    const auto H = EffHamiltonian::from_pauli({1, -0.5}, {2, -0.1}, {0.3, 0.2}, {-0.4, 0.1});
    const Mat2 m = H.matrix();
    CHECK(m.m00 == cplx(1, -0.5));
    CHECK(m.m11 == cplx(2, -0.1));
    CHECK(std::abs(m.m01 - (cplx(0.3, 0.2) - kI * cplx(-0.4, 0.1))) < 1e-15);
    CHECK(std::abs(m.m10 - (cplx(0.3, 0.2) + kI * cplx(-0.4, 0.1))) < 1e-15);
    const auto back = EffHamiltonian::from_matrix(m);
    CHECK(std::abs(back.h1() - H.h1()) < 1e-15);
    CHECK(std::abs(back.h2() - H.h2()) < 1e-15);
    CHECK_THROWS_AS(EffHamiltonian::from_pauli({NAN, 0}, 0.0, 0.0, 0.0), Error);
}

TEST_CASE("eigenvalues against characteristic polynomial") {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 2000; ++k) {
        const auto H = oracle::random_hamiltonian(rng);
        const auto E = eigenvalues(H);
        const auto R = oracle::charpoly_roots(H.matrix());
        const double scale = std::max(std::abs(R[0]), std::abs(R[1]));
        REQUIRE(oracle::pair_distance(E.E1, E.E2, R[0], R[1]) <= 1e-10 * scale);
    }
}

TEST_CASE("branch convention") {
    CHECK(branch_sqrt({-4.0, 0.0}) == cplx(0.0, 2.0));
    CHECK(branch_sqrt({4.0, 0.0}) == cplx(2.0, 0.0));
    CHECK(branch_sqrt({-4.0, -0.0}).imag() >= 0.0);
    std::mt19937_64 rng(5);
    for (int k = 0; k < 200; ++k) {
        const auto H = oracle::random_hamiltonian(rng);
        const auto E = eigenvalues(H);
        const cplx half = 0.5 * (E.E1 - E.E2);
        CHECK(half.real() >= 0.0);
    }
}

TEST_CASE("radicand parts") {
    std::mt19937_64 rng(3);
    for (int k = 0; k < 500; ++k) {
        const auto H = oracle::random_hamiltonian(rng);
        const auto D = radicand(H);
        const auto P = oracle::radicand_parts(H.matrix());
        const double sc = D.scale();
        CHECK(std::abs(D.reh2 - P.reh2) <= 1e-12 * sc);
        CHECK(std::abs(D.imh2 - P.imh2) <= 1e-12 * sc);
        CHECK(std::abs(D.cross - P.cross) <= 1e-12 * sc);
        const auto E = eigenvalues(H);
        const cplx half = 0.5 * (E.E1 - E.E2);
        CHECK(std::abs(D.value() - half * half) <= 1e-10 * std::abs(D.value()));
    }
}

TEST_CASE("hermitian and dissipative") {
    const auto Hh = EffHamiltonian::from_matrix({1.0, cplx(0.2, 0.3), cplx(0.2, -0.3), 2.0});
    const auto E = eigenvalues(Hh);
    CHECK(std::abs(E.E1.imag()) < 1e-15);
    CHECK(std::abs(E.E2.imag()) < 1e-15);
    const auto Hd = EffHamiltonian::from_pauli({1, -0.4}, {2, -0.2}, {0.1, -0.05}, 0.0);
    CHECK(is_dissipative(Hd));
    CHECK_FALSE(is_dissipative(EffHamiltonian::from_pauli({1, 0.4}, {2, -0.2}, 0.0, 0.0)));
    CHECK(E.width(1) == doctest::Approx(-2.0 * E.E1.imag()));
}

TEST_CASE("width offset gives a real trace") {
    const auto H = EffHamiltonian::from_pauli({10, -1.7}, {12, -0.3}, {0.2, -0.1}, {0.1, 0.05});
    CHECK(mean_half_width(H) == doctest::Approx(1.0));
    const auto S = width_offset(H);
    CHECK(std::abs(S.trace().imag()) < 1e-14);
    CHECK(S.h1() == H.h1());
    CHECK(width_offset(H, 0.25).trace().imag() == doctest::Approx(-1.5));
}

TEST_CASE("exceptional point and defectiveness") {
    // Jordan block: h = (1, i, 0) gives h.h = 0
    const auto J = EffHamiltonian::from_pauli(0.0, 0.0, 1.0, kI);
    CHECK(is_ep(J, 1e-12, 1e-12));
    CHECK(defectiveness(J) < 1e-6);
    const auto N = EffHamiltonian::from_matrix({1.0, 0.5, 0.5, -1.0});
    CHECK_FALSE(is_ep(N, 1e-9, 1e-12));
    CHECK(defectiveness(N) == doctest::Approx(1.0));
    CHECK_FALSE(is_ep(EffHamiltonian::from_pauli(1.0, 1.0, 0.0, 0.0), 1e-9, 1e-12));
}

TEST_CASE("eigenvector") {
    const Mat2 m{1.0, 2.0, 0.5, -1.0};
    const auto E = eigenvalues(EffHamiltonian::from_matrix(m));
    const auto v = eigenvector(m, E.E1);
    CHECK(std::abs(m.m00 * v[0] + m.m01 * v[1] - E.E1 * v[0]) < 1e-12);
    CHECK(std::abs(m.m10 * v[0] + m.m11 * v[1] - E.E1 * v[1]) < 1e-12);
    CHECK(std::hypot(std::abs(v[0]), std::abs(v[1])) == doctest::Approx(1.0));
}

TEST_CASE("transforms are unitary and invert") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> ang(-3.0, 3.0);
    for (auto kind : {TransformKind::GaugeO0, TransformKind::TauU, TransformKind::RotO}) {
        const BasisTransform t{kind, ang(rng)};
        const Mat2 v = t.matrix();
        CHECK((v * v.adjoint() - Mat2::identity()).max_abs() < 1e-15);
        const auto H = oracle::random_hamiltonian(rng);
        const auto back = t.inverse().apply(t.apply(H));
        CHECK((back.matrix() - H.matrix()).max_abs() < 1e-12 * H.matrix().max_abs());
        CHECK((t.apply(H).matrix() - v * H.matrix() * v.adjoint()).max_abs() < 1e-12 * H.matrix().max_abs());
    }
}

TEST_CASE("basis invariance of the radicand parts") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> ang(-3.2, 3.2);
    std::uniform_int_distribution<int> kind(0, 2);
    for (int n = 0; n < 200; ++n) {
        auto H = oracle::random_hamiltonian(rng);
        const auto D0 = radicand(H);
        for (int k = 0; k < 5; ++k) H = BasisTransform{static_cast<TransformKind>(kind(rng)), ang(rng)}.apply(H);
        const auto D1 = radicand(H);
        CHECK(std::abs(D1.reh2 - D0.reh2) <= 1e-10 * D0.scale());
        CHECK(std::abs(D1.imh2 - D0.imh2) <= 1e-10 * D0.scale());
        CHECK(std::abs(D1.cross - D0.cross) <= 1e-10 * D0.scale());
    }
}

TEST_CASE("fold half turn") {
    CHECK(fold_half_turn(0.5 * kPi) == doctest::Approx(0.5 * kPi));
    CHECK(fold_half_turn(-0.5 * kPi) == doctest::Approx(0.5 * kPi));
    CHECK(fold_half_turn(2.0) == doctest::Approx(2.0 - kPi));
    CHECK(fold_half_turn(7.0) == doctest::Approx(7.0 - 2.0 * kPi));
}

TEST_CASE("gauge fix makes h1/h2 real") {
    std::mt19937_64 rng(4);
    for (int k = 0; k < 300; ++k) {
        const auto H = oracle::random_hamiltonian(rng);
        const auto [G, t] = gauge_fix(H);
        CHECK(t.kind == TransformKind::GaugeO0);
        CHECK(t.angle > -0.25 * kPi - 1e-15);
        CHECK(t.angle <= 0.25 * kPi + 1e-15);
        const cplx r = G.h1() / G.h2();
        CHECK(std::abs(r.imag()) <= 1e-9 * std::max(1.0, std::abs(r)));
        CHECK(gauge_ratio_modulus(G) == doctest::Approx(1.0).epsilon(1e-8));
    }
    const auto noh2 = EffHamiltonian::from_pauli({1, -1}, {2, -0.5}, {0.3, 0.1}, 0.0);
    CHECK(gauge_fix(noh2).second.angle == 0.0);
    const auto real_h = EffHamiltonian::from_pauli(1.0, 2.0, 0.3, 0.4);
    CHECK_THROWS_AS(gauge_fix(real_h), Error);
}

TEST_CASE("tau extraction") {
    for (double tau : {-1.2, -0.3, 0.0, 0.2837, 1.1}) {
        const cplx z{0.7, -0.2};
        const auto H = EffHamiltonian::from_pauli({3, -1}, {2, -0.4}, z * std::cos(tau), z * std::sin(tau));
        CHECK(extract_tau(H) == doctest::Approx(tau).epsilon(1e-12));
    }
    const auto bad = EffHamiltonian::from_pauli(0.0, 0.0, cplx(1.0, 0.3), cplx(0.2, 0.5));
    try {
        extract_tau(bad);
        FAIL("expected not_gauge_fixed");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::not_gauge_fixed);
    }
    try {
        extract_tau(EffHamiltonian::from_pauli(0.0, 0.0, 0.0, 1.0));
        FAIL("expected singular_ratio");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::singular_ratio);
    }
}

TEST_CASE("dichotomy on the curve") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.1, 2.0);
    int real_count = 0, pair_count = 0;
    for (int k = 0; k < 400; ++k) {
        const auto H = on_curve(rng, u(rng), u(rng), {2440.0 * u(rng), -u(rng)});
        const auto D = radicand(H);
        REQUIRE(std::abs(D.cross) < 1e-12 * D.scale());
        const auto S = width_offset(H);
        const auto E = eigenvalues(S);
        const double sc = std::sqrt(D.scale());
        if (D.reh2 >= D.imh2) {
            ++real_count;
            CHECK(std::abs(E.E1.imag()) <= 1e-10 * sc);
            CHECK(std::abs(E.E2.imag()) <= 1e-10 * sc);
        } else {
            ++pair_count;
            CHECK(std::abs(E.E1.imag() + E.E2.imag()) <= 1e-10 * sc);
            CHECK(std::abs(E.E1.real() - E.E2.real()) <= 1e-10 * std::abs(E.E1));
        }
    }
    CHECK(real_count > 50);
    CHECK(pair_count > 50);
}

TEST_CASE("pt normal form") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.1, 2.0);
    for (int k = 0; k < 200; ++k) {
        const auto H = on_curve(rng, u(rng), u(rng), {100.0, -1.0 - u(rng)});
        PTReport r;
        REQUIRE_NOTHROW(r = pt_analysis(H));
        CHECK(r.form.residual < 1e-9);
        CHECK(r.commutator_norm < 1e-9);
        CHECK(r.antilinear_residual < 1e-9);
        const auto D = radicand(H);
        CHECK(r.phase == (D.reh2 > D.imh2 ? PtPhase::unbroken : PtPhase::broken));
        // the normal form keeps the eigenvalues of the shifted matrix
        const auto Ef = eigenvalues(EffHamiltonian::from_matrix(r.form.matrix()));
        CHECK(oracle::pair_distance(Ef, r.shifted_eigenvalues) < 1e-9);
        if (r.phase == PtPhase::unbroken) {
            CHECK(r.eigvec_pt_overlap[0] == doctest::Approx(1.0).epsilon(1e-8));
            CHECK(r.eigvec_pt_overlap[1] == doctest::Approx(1.0).epsilon(1e-8));
        }
    }
}

TEST_CASE("pt form off the curve") {
    const auto H = EffHamiltonian::from_pauli({1, -1}, {2, -0.2}, {0.3, 0.2}, {0.1, 0.3});
    try {
        to_pt_form(width_offset(H), 0.0);
        FAIL("expected not_on_pt_curve");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::not_on_pt_curve);
    }
}

TEST_CASE("phase classification") {
    CHECK(classify_phase({0, 1.0, 2.0, 0, 0}) == PtPhase::unbroken);
    CHECK(classify_phase({0, 2.0, 1.0, 0, 0}) == PtPhase::broken);
    CHECK(classify_phase({0, 1.0, 1.0 + 1e-12, 0, 0}) == PtPhase::exceptional);
    CHECK(std::string(pt_phase_name(PtPhase::broken)) == "broken");
}

TEST_CASE("commutator of a normal form vanishes") {
    const PTNormalForm nf{0.3, -0.7, 1.1, 0.4, 0.0};
    CHECK(pt_commutator_norm(nf.matrix()) < 1e-15);
    CHECK(pt_commutator_norm(Mat2{1.0, 2.0, 0.0, kI}) > 0.1);
}

TEST_CASE("json round trip") {
    const auto H = EffHamiltonian::from_pauli({2441.25, -1.5}, {2440.5, -0.25}, {0.125, 0.0}, {-0.0625, 1e-17});
    nlohmann::json j = H;
    CHECK(j.get<EffHamiltonian>() == H);
    CHECK_THROWS_AS(nlohmann::json::parse(R"({"e1": 1})").get<EffHamiltonian>(), Error);
}

TEST_CASE("error exit classes") {
    CHECK(errc_exit_class(Errc::invalid_argument) == 1);
    CHECK(errc_exit_class(Errc::parse_error) == 2);
    CHECK(errc_exit_class(Errc::out_of_bounds) == 2);
    CHECK(errc_exit_class(Errc::non_convergence) == 3);
    CHECK(errc_exit_class(Errc::not_on_pt_curve) == 3);
    CHECK(errc_name(Errc::refine_loop) == "refine-loop");
}
