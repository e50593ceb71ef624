// Polar and triangular gauges.
#include <catch_amalgamated.hpp>

#include "support/random_instances.hpp"

using namespace resl;
using namespace resl::testing;

namespace {

Mat scalar(cplx z) { return Mat::Constant(1, 1, z); }

// s = a^* with a a generic invertible matrix
Perturbation random_general(int d, int p, bool odd, Rng& g) {
    std::vector<Mat> a, s, b;
    for (int x = 1; x <= p; ++x) {
        Mat ax = random_matrix(d, g) + 2.0 * identity(d);
        if (x == p && odd) ax = identity(d);
        a.push_back(ax);
        s.push_back(ax.adjoint());
        b.push_back(x == p && odd ? hermitian_with_spectrum(std::vector<double>(d, 0.8), g) : random_hermitian(d, g, 0.5));
    }
    return validate_perturbation(d, a, s, b);
}

double root_distance(const Perturbation& X, const Perturbation& Y) {
    auto rx = expand_roots(jost_roots(build_jost(X), jost_determinant(build_jost(X))));
    auto ry = expand_roots(jost_roots(build_jost(Y), jost_determinant(build_jost(Y))));
    double worst = 0.0;
    for (cplx x : rx) {
        double best = 1e300;
        for (cplx y : ry) best = std::min(best, std::abs(x - y));
        worst = std::max(worst, best / (1.0 + std::abs(x)));
    }
    return worst;
}

} // namespace

TEST_CASE("polar gauge fixes positive coefficients", "[gauge]") {
    Rng g(61);
    const Perturbation V = random_selfadjoint(2, 3, false, g);
    const GaugeResult r = polar_gauge(V);
    for (const Mat& u : r.u) CHECK(max_abs(u - identity(2)) < 1e-12);
    CHECK(coefficient_distance(r.V, V) < 1e-12);
}

TEST_CASE("polar gauge of a negative scalar", "[gauge]") {
    const Perturbation V = validate_perturbation(1, {scalar(-2.0)}, {scalar(0.5)});
    CHECK(V.tag == ClassTag::complex);
    const GaugeResult r = polar_gauge(V);
    CHECK(std::abs(r.V.a[0](0, 0) - 2.0) < 1e-15);
    CHECK(std::abs(r.V.s[0](0, 0) - 2.0) < 1e-15);
    CHECK(std::abs(r.u[1](0, 0) + 1.0) < 1e-15);
    CHECK(r.V.tag == ClassTag::selfadjoint);
}

TEST_CASE("polar gauge output class and spectrum", "[gauge][property]") {
    Rng g(62);
    for (int i = 0; i < 20; ++i) {
        const Perturbation V = random_general(2, 1 + i % 3, i % 2 == 1, g);
        const GaugeResult r = polar_gauge(V);
        CHECK(in_positive_class(r.V, 1e-12));
        for (int x = 1; x <= V.p; ++x) CHECK(max_abs(r.V.b_at(x) - r.V.b_at(x).adjoint()) < 1e-12);
        CHECK(r.V.q == V.q);
        CHECK(root_distance(r.V, V) < 1e-8);
    }
}

TEST_CASE("triangular gauge", "[gauge][property]") {
    Rng g(63);
    for (int i = 0; i < 20; ++i) {
        const Perturbation V = random_general(3, 1 + i % 3, i % 2 == 1, g);
        const GaugeResult r = triangular_gauge(V);
        CHECK(in_triangular_class(r.V, 1e-12));
        for (int x = 1; x <= V.p; ++x)
            for (int row = 1; row < 3; ++row)
                for (int col = 0; col < row; ++col) CHECK(std::abs(r.V.a_at(x)(row, col)) < 1e-12);
        CHECK(root_distance(r.V, V) < 1e-8);
        // idempotent on the target class
        CHECK(coefficient_distance(triangular_gauge(r.V).V, r.V) < 1e-12);
    }
}

TEST_CASE("triangular and polar gauges coincide for scalars", "[gauge]") {
    Rng g(64);
    for (int i = 0; i < 10; ++i) {
        const Perturbation V = random_general(1, 1 + i % 3, i % 2 == 1, g);
        CHECK(coefficient_distance(triangular_gauge(V).V, polar_gauge(V).V) < 1e-12);
    }
}

TEST_CASE("gauge invariants", "[gauge][property]") {
    Rng g(65);
    for (int i = 0; i < 20; ++i) {
        const Perturbation V = random_general(2, 1 + i % 3, i % 2 == 1, g);
        const GaugeResult r = i % 4 < 2 ? polar_gauge(V) : triangular_gauge(V);
        const int p = V.p;
        CHECK(std::abs(r.V.b_at(p).determinant() - V.b_at(p).determinant()) < 1e-10);
        const Mat I = identity(2);
        const cplx c0 = (I - V.s_at(p) * V.a_at(p)).determinant(), c1 = (I - r.V.s_at(p) * r.V.a_at(p)).determinant();
        CHECK(std::abs(c0 - c1) < 1e-10 * (1.0 + std::abs(c0)));
        // polar output is idempotent as well
        if (i % 4 < 2) CHECK(coefficient_distance(polar_gauge(r.V).V, r.V) < 1e-12);
    }
}

TEST_CASE("fixed point with a given u_1", "[gauge]") {
    Mat tri(2, 2);
    tri << 1.5, cplx(0.2, 0.1), 0.0, 0.9;
    const Perturbation V = validate_perturbation(2, {tri}, {tri.adjoint()}, {Mat::Identity(2, 2) * 0.3});
    CHECK(coefficient_distance(triangular_gauge(V).V, V) < 1e-14);
    Mat bad = identity(2);
    bad(0, 1) = 0.5;
    CHECK_THROWS_AS(triangular_gauge(V, bad), Error);
}
