// S-matrix, Weyl matrices, Fredholm determinant and phase shift.
#include <catch_amalgamated.hpp>

#include "support/random_instances.hpp"

#include <numbers>

using namespace resl;
using namespace resl::testing;

namespace {

Mat scalar(cplx z) { return Mat::Constant(1, 1, z); }

Perturbation example1(double b = 2.0) { return validate_perturbation(1, {scalar(1.0)}, {scalar(b)}); }

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error raised");
    return ErrorKind::InvalidInput;
}

cplx circle_point_off_roots(const std::vector<cplx>& roots, Rng& g) {
    for (;;) {
        const cplx k = std::polar(1.0, uniform(g, -3.1, 3.1));
        double gap = 1e300;
        for (cplx r : roots) gap = std::min(gap, std::abs(k - r));
        if (gap > 1e-2) return k;
    }
}

} // namespace

TEST_CASE("S-matrix of the odd example at k = i", "[scattering]") {
    const JostData J = build_jost(example1());
    const cplx i(0.0, 1.0);
    const cplx S = s_matrix(J, i)(0, 0);
    CHECK(std::abs(S - (1.0 + 2.0 * i) / (1.0 - 2.0 * i)) < 1e-15);
    CHECK(std::abs(std::abs(S) - 1.0) < 1e-15);
    CHECK(kind_of([&] { s_matrix(J, 0.0); }) == ErrorKind::DivisionAtZero);
    CHECK(kind_of([&] { s_matrix(J, 0.5); }) == ErrorKind::AtPole);
}

TEST_CASE("S-matrix is unitary and symmetric in form on the circle", "[scattering][property]") {
    Rng g(41);
    for (int i = 0; i < 40; ++i) {
        const Perturbation V = i % 2 ? random_adjoint_pair(1 + i % 3, 1 + i % 4, i % 3 == 0, g) : random_suite_member(3, 5, g);
        const JostData J = build_jost(V);
        const auto roots = expand_roots(jost_roots(J, jost_determinant(J)));
        for (int n = 0; n < 4; ++n) {
            const cplx k = circle_point_off_roots(roots, g);
            const Mat S = s_matrix(J, k);
            CHECK(max_abs(S.adjoint() * S - identity(V.d)) < 1e-10);
            CHECK(max_abs(S - s_matrix_adjoint_form(J, k)) < 1e-10);
            // S(1/k) = S(k)^{-1}
            CHECK(max_abs(s_matrix(J, 1.0 / k) * S - identity(V.d)) < 1e-10);
        }
    }
}

TEST_CASE("S-matrix asymptotics at infinity and at zero", "[scattering][property]") {
    Rng g(42);
    for (int i = 0; i < 30; ++i) {
        const Perturbation V = random_suite_member(3, 4, g);
        const JostData J = build_jost(V);
        const Mat C = asymptotic_constant(J);
        const Mat Tp = J.st.T[V.p];
        for (double r : {1e4, -1e4}) {
            const Mat lhs = ipow(-r, V.q) * C * s_matrix(J, r);
            CHECK(max_abs(lhs - Tp) < 1e-2 * std::max(1.0, max_abs(Tp)));
        }
        const double r = 1e-4;
        const Mat lhs0 = ipow(-r, V.q) * Tp * s_matrix(J, r);
        CHECK(max_abs(lhs0 - C) < 1e-2 * std::max(1.0, max_abs(C)));
    }
}

TEST_CASE("Weyl matrix of the odd example", "[scattering]") {
    const JostData J = build_jost(example1());
    const cplx k = std::polar(1.0, std::numbers::pi / 3);
    // phi_1 phi_2^{-1} = 1 / (lambda - 2) with lambda = 1
    CHECK(std::abs(weyl_from_smatrix(J, k).Mp(0, 0) + 1.0) < 1e-13);
}

TEST_CASE("Weyl matrices from S agree with regular solutions", "[scattering][property]") {
    Rng g(43);
    for (int i = 0; i < 30; ++i) {
        const Perturbation V = random_suite_member(3, 4, g);
        const JostData J = build_jost(V);
        const auto roots = expand_roots(jost_roots(J, jost_determinant(J)));
        const cplx k = circle_point_off_roots(roots, g);
        const WeylPair w = weyl_from_smatrix(J, k);
        const cplx lam = lambda_of_k(k);
        const Mat Mp = weyl_from_regular(V, lam, V.p), Mp1 = weyl_from_regular(V, lam, V.p + 1);
        CHECK(max_abs(w.Mp - Mp) < 1e-9 * std::max(1.0, max_abs(Mp)));
        CHECK(max_abs(w.Mp1 - Mp1) < 1e-9 * std::max(1.0, max_abs(Mp1)));
    }
}

TEST_CASE("Fredholm determinant of the odd scalar case", "[scattering]") {
    for (double b : {2.0, -0.7, 3.5}) {
        const FredholmData F = fredholm_determinant(example1(b));
        REQUIRE(F.D.degree() == 1);
        CHECK(std::abs(F.D.coeff(0) - 1.0) < 1e-13);
        CHECK(std::abs(F.D.coeff(1) + b) < 1e-13);
    }
}

TEST_CASE("Fredholm determinant matches the Jost determinant", "[scattering][property]") {
    Rng g(44);
    for (int i = 0; i < 30; ++i) {
        const Perturbation V = i % 3 == 2 ? random_adjoint_pair(1 + i % 2, 1 + i % 3, i % 2, g) : random_suite_member(3, 4, g);
        const JostData J = build_jost(V);
        const FredholmData F = fredholm_determinant(V);
        CHECK(jost_fredholm_defect(jost_determinant(J), F, J.st.T[V.p].determinant()) < 1e-9);
        CHECK(std::abs(F.F1 - F.F1_formula) < 1e-9 * (1.0 + std::abs(F.F1)));
        CHECK(std::abs(F.F2 - F.F2_formula) < 1e-9 * (1.0 + std::abs(F.F2)));
    }
}

TEST_CASE("phase shift derivative of the odd example", "[scattering]") {
    const JostData J = build_jost(example1());
    const cplx i(0.0, 1.0);
    const double closed = phase_shift_derivative({0.5}, i);
    const double numeric = phase_shift_derivative_numeric(J, std::numbers::pi / 2);
    CHECK(std::abs(closed - numeric) < 1e-8);
    CHECK(kind_of([] { phase_shift_derivative({0.5}, 0.5); }) == ErrorKind::InvalidInput);
    CHECK(kind_of([] { phase_shift_derivative({1.0}, 1.0); }) == ErrorKind::OnRoot);
}

TEST_CASE("phase shift derivative against finite differences", "[scattering][property]") {
    Rng g(45);
    for (int i = 0; i < 30; ++i) {
        const JostData J = build_jost(random_suite_member(3, 4, g));
        const auto roots = expand_roots(jost_roots(J, jost_determinant(J)));
        const cplx k = circle_point_off_roots(roots, g);
        const double closed = phase_shift_derivative(roots, k);
        CHECK(std::abs(closed - phase_shift_derivative_numeric(J, std::arg(k))) < 1e-5 * (1.0 + std::abs(closed)));
    }
}
