// Perturbation validation, the k <-> lambda maps, matrix polynomials,
// interpolation and root finding.
#include <catch_amalgamated.hpp>

#include "support/random_instances.hpp"

using namespace resl;
using namespace resl::testing;
using Catch::Matchers::WithinAbs;

namespace {

Mat scalar(cplx z) { return Mat::Constant(1, 1, z); }

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error raised");
    return ErrorKind::InvalidInput;
}

} // namespace

TEST_CASE("example perturbations get their order and class", "[core]") {
    const Perturbation V1 = validate_perturbation(1, {scalar(1.0)}, {scalar(2.0)});
    CHECK(V1.q == 1);
    CHECK(V1.tag == ClassTag::selfadjoint);

    const Perturbation V2 = validate_perturbation(1, {scalar(std::sqrt(2.0))}, {scalar(0.0)});
    CHECK(V2.q == 2);
    CHECK(V2.tag == ClassTag::selfadjoint);
}

TEST_CASE("identity tail with singular b_p is ambiguous", "[core]") {
    CHECK(kind_of([] { validate_perturbation(2, {identity(2)}, {zeros(2)}); }) == ErrorKind::AmbiguousOrder);
}

TEST_CASE("validation rejects malformed inputs", "[core]") {
    CHECK(kind_of([] { validate_perturbation(1, {}, {}); }) == ErrorKind::EmptySupport);
    CHECK(kind_of([] { validate_perturbation(1, {scalar(0.0)}, {scalar(1.0)}); }) == ErrorKind::SingularCoefficient);
    CHECK(kind_of([] { validate_perturbation(2, {identity(2), identity(2)}, {zeros(2)}); }) == ErrorKind::InvalidInput);
    CHECK(kind_of([] { validate_perturbation(2, {identity(3)}, {zeros(3)}); }) == ErrorKind::InvalidInput);
}

TEST_CASE("class tags", "[core]") {
    Mat tri(2, 2);
    tri << 1.0, cplx(0.3, 0.2), 0.0, 2.0;
    const Perturbation T = validate_perturbation(2, {tri}, {tri.adjoint()}, {zeros(2)});
    CHECK(T.tag == ClassTag::triangular);
    CHECK(T.is_selfadjoint_operator());

    Mat gen(2, 2);
    gen << 1.0, 0.4, -0.3, 2.0;
    const Perturbation C = validate_perturbation(2, {gen}, {zeros(2)});
    CHECK(C.tag == ClassTag::complex);
    CHECK_FALSE(C.is_selfadjoint_operator());
}

TEST_CASE("random self-adjoint instances validate; zeroing a coefficient breaks them", "[core][property]") {
    Rng g(11);
    for (int i = 0; i < 40; ++i) {
        const int d = 1 + i % 3, p = 1 + (i / 3) % 4;
        const Perturbation V = random_selfadjoint(d, p, i % 2 == 1, g);
        CHECK(V.tag == ClassTag::selfadjoint);
        CHECK(V.q == (i % 2 == 1 ? 2 * p - 1 : 2 * p));
        std::vector<Mat> a = V.a;
        a[g() % p] = zeros(d);
        CHECK(kind_of([&] { validate_perturbation(d, a, V.b); }) == ErrorKind::SingularCoefficient);
    }
}

TEST_CASE("lambda of k", "[core]") {
    CHECK(std::abs(lambda_of_k(1.0) - 2.0) < 1e-15);
    CHECK(std::abs(lambda_of_k(cplx(0, 1))) < 1e-15);
    CHECK(std::abs(lambda_of_k(0.5) - 2.5) < 1e-15);
    CHECK(kind_of([] { lambda_of_k(0.0); }) == ErrorKind::DivisionAtZero);
}

TEST_CASE("k of lambda picks the branch inside the disc", "[core]") {
    CHECK(std::abs(k_of_lambda(2.5) - 0.5) < 1e-15);
    CHECK(std::abs(k_of_lambda(-2.5) + 0.5) < 1e-15);
    // 5 - sqrt(24)
    CHECK(std::abs(k_of_lambda(10.0) - 0.10102051443364424) < 1e-15);
    CHECK(kind_of([] { k_of_lambda(1.0); }) == ErrorKind::OnCut);

    Rng g(3);
    for (int i = 0; i < 200; ++i) {
        const cplx lam(uniform(g, -5, 5), uniform(g, -5, 5));
        if (std::abs(lam.imag()) < 1e-3) continue;
        const cplx k = k_of_lambda(lam);
        CHECK(std::abs(k) < 1.0);
        CHECK(std::abs(lambda_of_k(k) - lam) < 1e-12 * (1.0 + std::abs(lam)));
    }
}

TEST_CASE("matrix polynomial evaluation", "[matpoly]") {
    const MatPoly P(1, 0, {scalar(1.0), scalar(-2.0)});
    CHECK(std::abs(P.eval(0.5)(0, 0)) < 1e-15);

    const MatPoly I = MatPoly::constant(identity(3));
    CHECK(max_abs(I.eval(cplx(0.3, 0.7)) - identity(3)) == 0.0);

    Mat M = Mat::Zero(2, 2);
    M(0, 0) = 1.0;
    M(1, 1) = 3.0;
    Mat expect = Mat::Zero(2, 2);
    expect(0, 0) = 4.0;
    expect(1, 1) = 12.0;
    CHECK(max_abs(MatPoly::monomial(M, 2).eval(2.0) - expect) < 1e-14);
}

TEST_CASE("matrix polynomial arithmetic agrees with pointwise evaluation", "[matpoly][property]") {
    Rng g(5);
    for (int i = 0; i < 20; ++i) {
        const int d = 1 + i % 3;
        const MatPoly X(d, -1, {random_matrix(d, g), random_matrix(d, g), random_matrix(d, g)});
        const MatPoly Y(d, 1, {random_matrix(d, g), random_matrix(d, g)});
        const cplx k(uniform(g, -1, 1), uniform(g, -1, 1));
        CHECK(max_abs((X + Y).eval(k) - (X.eval(k) + Y.eval(k))) < 1e-12);
        CHECK(max_abs((X * Y).eval(k) - X.eval(k) * Y.eval(k)) < 1e-12);
        const double h = 1e-6;
        const Mat fd = (X.eval(k + h) - X.eval(k - h)) / (2 * h);
        CHECK(max_abs(X.derivative().eval(k) - fd) < 1e-6 * (1.0 + max_abs(fd)));
    }
}

TEST_CASE("interpolation recovers coefficients", "[matpoly]") {
    const MatPoly lin = interpolate_matpoly({0.0, 1.0}, {scalar(1.0), scalar(-1.0)}, 1);
    CHECK(std::abs(lin.coeff(0)(0, 0) - 1.0) < 1e-14);
    CHECK(std::abs(lin.coeff(1)(0, 0) + 2.0) < 1e-14);

    const std::vector<cplx> nodes = circle_nodes(3);
    const MatPoly flat = interpolate_matpoly(nodes, {scalar(3.0), scalar(3.0), scalar(3.0)}, 2);
    CHECK(flat.degree() == 0);

    // (k^2 c_1 - b_1 k + 1) a_1^{-1} with a_1 = 2, b_1 = 1, c_1 = -3
    std::vector<Mat> vals;
    for (cplx k : nodes) vals.push_back(scalar((-3.0 * k * k - k + 1.0) / 2.0));
    const MatPoly ex = interpolate_matpoly(nodes, vals, 2);
    CHECK(std::abs(ex.coeff(0)(0, 0) - 0.5) < 1e-14);
    CHECK(std::abs(ex.coeff(1)(0, 0) + 0.5) < 1e-14);
    CHECK(std::abs(ex.coeff(2)(0, 0) + 1.5) < 1e-14);
}

TEST_CASE("interpolation preconditions", "[matpoly]") {
    CHECK(kind_of([] { interpolate_matpoly({0.0, 0.0}, {scalar(1.0), scalar(1.0)}, 1); }) == ErrorKind::DuplicateNodes);
    CHECK(kind_of([] { interpolate_matpoly({0.0}, {scalar(1.0)}, 1); }) == ErrorKind::InconsistentSamples);
    const std::vector<cplx> nodes = circle_nodes(6);
    std::vector<Mat> vals;
    for (cplx k : nodes) vals.push_back(scalar(k * k * k));
    CHECK(kind_of([&] { interpolate_matpoly(nodes, vals, 2); }) == ErrorKind::InconsistentSamples);
}

TEST_CASE("roots of small polynomials", "[roots]") {
    auto r = find_roots(Poly({1.0, -2.0}));
    REQUIRE(r.size() == 1);
    CHECK(std::abs(r[0].value - 0.5) < 1e-15);
    CHECK(r[0].multiplicity == 1);

    r = find_roots(Poly({1.0 / std::sqrt(2.0), 0.0, -1.0 / std::sqrt(2.0)}));
    sort_roots(r);
    REQUIRE(r.size() == 2);
    // equal moduli, ordered by argument in [0, 2 pi)
    CHECK(std::abs(r[0].value - 1.0) + std::abs(r[1].value + 1.0) < 1e-14);

    r = find_roots(Poly({0.5, 0.0, -1.5}));
    REQUIRE(r.size() == 2);
    for (const Root& x : r) CHECK_THAT(std::abs(x.value), WithinAbs(1.0 / std::sqrt(3.0), 1e-14));
}

TEST_CASE("root multiplicities", "[roots]") {
    auto r = find_roots(Poly::from_roots({0.5, 0.5, 2.0}));
    sort_roots(r);
    REQUIRE(r.size() == 2);
    CHECK(r[0].multiplicity == 2);
    CHECK(std::abs(r[0].value - 0.5) < 1e-7);
    CHECK(r[1].multiplicity == 1);
}

TEST_CASE("roots reproduce the polynomial", "[roots][property]") {
    Rng g(8);
    for (int i = 0; i < 30; ++i) {
        std::vector<cplx> z;
        for (int j = 0; j < 2 + i % 7; ++j) z.push_back(cplx(uniform(g, -2, 2), uniform(g, -2, 2)));
        const auto r = expand_roots(find_roots(Poly::from_roots(z)));
        REQUIRE(r.size() == z.size());
        for (cplx x : z) {
            double best = 1e300;
            for (cplx y : r) best = std::min(best, std::abs(x - y));
            CHECK(best < 1e-9);
        }
    }
}
