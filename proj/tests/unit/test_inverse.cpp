// Scalar resonance vectors, finite block Jacobi spectral data, and
// reconstruction from S-matrix and Jost samples.
#include <catch_amalgamated.hpp>

#include "support/random_instances.hpp"

using namespace resl;
using namespace resl::testing;

namespace {

Mat scalar(cplx z) { return Mat::Constant(1, 1, z); }

Mat diag(std::initializer_list<cplx> v) {
    Vec x(static_cast<int>(v.size()));
    int i = 0;
    for (cplx z : v) x(i++) = z;
    return x.asDiagonal();
}

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error raised");
    return ErrorKind::InvalidInput;
}

std::vector<cplx> sorted_roots(const Perturbation& V) {
    const JostData J = build_jost(V);
    std::vector<Root> rs = jost_roots(J, jost_determinant(J));
    sort_roots(rs);
    return expand_roots(rs);
}

} // namespace

TEST_CASE("forward resonance vectors are admissible", "[inverse][property]") {
    Rng g(51);
    for (int i = 0; i < 60; ++i) {
        const ResonanceVerdict v = validate_resonance_vector(sorted_roots(random_scalar(1 + i % 5, i % 2 == 1, g)));
        CHECK(v.admissible());
    }
    CHECK(validate_resonance_vector(sorted_roots(validate_perturbation(1, {scalar(1.0)}, {scalar(2.0)}))).admissible());
}

TEST_CASE("resonance vectors violating one condition", "[inverse]") {
    const ResonanceVerdict dbl = validate_resonance_vector({0.5, 0.5, 3.0});
    CHECK(dbl.ordering);
    CHECK_FALSE(dbl.disc_roots);
    CHECK_FALSE(dbl.admissible());

    const ResonanceVerdict order = validate_resonance_vector({2.0, 0.5});
    CHECK_FALSE(order.ordering);

    const ResonanceVerdict nonreal = validate_resonance_vector({cplx(0, 0.5), cplx(0, -0.5)});
    CHECK_FALSE(nonreal.disc_roots);

    // zeros of F in (2, 2.5) must be odd in number
    const ResonanceVerdict inter = validate_resonance_vector({0.4, 0.5, 3.0, 4.0});
    CHECK(inter.ordering);
    CHECK(inter.disc_roots);
    CHECK_FALSE(inter.interlacing);
    CHECK(inter.constant_term);

    // F(0) = 1/2 with everything else in order
    const ResonanceVerdict c4 = validate_resonance_vector({-0.5, -1.0});
    CHECK(c4.ordering);
    CHECK(c4.disc_roots);
    CHECK(c4.interlacing);
    CHECK_FALSE(c4.constant_term);
}

TEST_CASE("spectral data of a 1 x 1 matrix", "[inverse]") {
    const double beta = 0.7;
    const FiniteJacobi F{1, 1, {}, {scalar(beta)}};
    const SpectralData sd = spectral_data_forward(F);
    REQUIRE(sd.m == 1);
    CHECK(std::abs(sd.mu[0] - beta) < 1e-15);
    CHECK(std::abs(sd.g[0](0, 0) - 1.0) < 1e-15);
    CHECK(std::abs(sd.B[0](0, 0) - 1.0) < 1e-15);
    const cplx lam(0.3, 1.1);
    CHECK(std::abs(weyl_function_finite(F, lam)(0, 0) + 1.0 / (lam - beta)) < 1e-15);
    CHECK(std::abs(sd.weyl(lam)(0, 0) + 1.0 / (lam - beta)) < 1e-15);
}

TEST_CASE("spectral data of the free 2-site matrix", "[inverse]") {
    const FiniteJacobi F{1, 2, {scalar(1.0)}, {scalar(0.0), scalar(0.0)}};
    const SpectralData sd = spectral_data_forward(F);
    REQUIRE(sd.m == 2);
    CHECK(std::abs(sd.mu[0] + 1.0) < 1e-14);
    CHECK(std::abs(sd.mu[1] - 1.0) < 1e-14);
    // g = phi_1^2 + phi_2^2 with phi_1 = 1, phi_2 = mu
    CHECK(std::abs(sd.g[0](0, 0) - 2.0) < 1e-14);
    CHECK(std::abs(sd.g[1](0, 0) - 2.0) < 1e-14);
}

TEST_CASE("spectral data invariants and round trip", "[inverse][property]") {
    Rng g(52);
    for (int i = 0; i < 30; ++i) {
        const int d = 1 + i % 3, p = 1 + (i / 3) % 5;
        const FiniteJacobi F = random_finite_jacobi(d, p, g);
        const SpectralData sd = spectral_data_forward(F);
        int total = 0;
        for (int r : sd.rank) total += r;
        CHECK(total == d * p);
        CHECK(max_abs(sd.residue_sum() - identity(d)) < 1e-10);
        const cplx lam(uniform(g, -2, 2), uniform(g, 0.2, 2));
        const Mat M = sd.weyl(lam);
        CHECK(max_abs(M - sd.weyl(std::conj(lam)).adjoint()) < 1e-12);
        CHECK(max_abs(M - weyl_function_finite(F, lam)) < 1e-9 * std::max(1.0, max_abs(M)));
        Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(moment_matrix(sd, p)), Eigen::EigenvaluesOnly);
        CHECK(es.eigenvalues().minCoeff() > 0.0);

        const FiniteJacobi R = finite_inverse(sd);
        REQUIRE(R.p == p);
        // equal up to a unitary gauge: compare spectral data
        const SpectralData back = spectral_data_forward(R);
        REQUIRE(back.m == sd.m);
        for (int j = 0; j < sd.m; ++j) {
            CHECK(std::abs(back.mu[j] - sd.mu[j]) < 1e-9);
            CHECK(max_abs(back.B[j] - sd.B[j]) < 1e-8);
        }
    }
}

TEST_CASE("finite inverse rejects inconsistent data", "[inverse]") {
    SpectralData sd = spectral_data_forward(FiniteJacobi{1, 2, {scalar(1.0)}, {scalar(0.0), scalar(0.0)}});
    sd.B[0] *= 2.0;
    CHECK(kind_of([&] { finite_inverse(sd); }) == ErrorKind::MomentDegeneracy);
}

TEST_CASE("reconstruction of the odd example from four S samples", "[inverse]") {
    const Perturbation V = validate_perturbation(1, {scalar(1.0)}, {scalar(2.0)});
    const InverseResult r = reconstruct_from_smatrix(smatrix_samples(build_jost(V), 4), 1);
    REQUIRE(r.V.p == 1);
    CHECK(r.V.q == 1);
    CHECK(std::abs(r.V.b[0](0, 0) - 2.0) < 1e-8);
    CHECK(std::abs(r.V.a[0](0, 0) - 1.0) < 1e-8);
}

TEST_CASE("reconstruction keeps separated channels apart", "[inverse]") {
    const Perturbation V = validate_perturbation(2, {diag({1.3, 0.7}), identity(2)}, {diag({0.2, -0.4}), diag({0.9, -1.2})});
    const InverseResult r = reconstruct_from_smatrix(smatrix_samples(build_jost(V), 24), 2);
    CHECK(coefficient_distance(r.V, V) < 1e-8);
}

TEST_CASE("S-sample round trips", "[inverse][property]") {
    Rng g(53);
    for (int i = 0; i < 20; ++i) {
        const Perturbation V = random_selfadjoint(1 + i % 2, 1 + i % 3, i % 2 == 1, g);
        const JostData J = build_jost(V);
        const std::vector<SSample> samples = smatrix_samples(J, 32);
        const InverseResult r = reconstruct_from_smatrix(samples, V.d);
        CHECK(coefficient_distance(r.V, V) < 1e-6);
        CHECK(detail::max_sample_defect(r.V, samples) < 1e-8);
    }
}

TEST_CASE("reconstruction from Jost samples", "[inverse]") {
    // psi = 1 - 2k at k = 0, 1
    const InverseResult r1 = reconstruct_from_jost_samples({0.0, 1.0}, {scalar(1.0), scalar(-1.0)}, 1);
    CHECK(std::abs(r1.V.b[0](0, 0) - 2.0) < 1e-8);

    // psi = (1 - 3k^2) / 2 at three nodes
    const std::vector<cplx> nodes = circle_nodes(3, 0.8);
    std::vector<Mat> vals;
    for (cplx k : nodes) vals.push_back(scalar((1.0 - 3.0 * k * k) / 2.0));
    const InverseResult r2 = reconstruct_from_jost_samples(nodes, vals, 2);
    CHECK(std::abs(r2.V.a[0](0, 0) - 2.0) < 1e-8);
    CHECK(std::abs(r2.V.b[0](0, 0)) < 1e-8);
}

TEST_CASE("inverse preconditions", "[inverse]") {
    const JostData J = build_jost(validate_perturbation(1, {scalar(1.0)}, {scalar(2.0)}));
    const std::vector<SSample> few = smatrix_samples(J, 3);
    InverseOptions opt;
    opt.q = 2;
    CHECK(kind_of([&] { reconstruct_from_smatrix(few, 1, opt); }) == ErrorKind::InconsistentSamples);
    CHECK(kind_of([] { reconstruct_from_smatrix({}, 1); }) == ErrorKind::InconsistentSamples);
    CHECK(kind_of([] { reconstruct_from_jost_samples({0.0}, {scalar(1.0)}, 1); }) == ErrorKind::InconsistentSamples);
    std::vector<SSample> off = smatrix_samples(J, 4);
    off[0].k *= 1.1;
    CHECK(kind_of([&] { reconstruct_from_smatrix(off, 1); }) == ErrorKind::InvalidInput);
}

TEST_CASE("noisy S samples", "[inverse]") {
    Rng g(54);
    const Perturbation V = random_selfadjoint(1, 2, false, g);
    std::vector<SSample> samples = smatrix_samples(build_jost(V), 32);
    std::normal_distribution<double> n;
    const double sigma = 1e-3;
    for (SSample& s : samples) s.S(0, 0) += sigma * cplx(n(g), n(g));
    // default gates reject the data at the rational fit, before any round trip
    CHECK(kind_of([&] { reconstruct_from_smatrix(samples, 1); }) == ErrorKind::InconsistentSamples);
    // relaxed gates always return; the error stays at a few tens of sigma
    InverseOptions opt;
    opt.fit_tol = opt.tol_inv = opt.structure_tol = 50.0 * sigma;
    const InverseResult r = reconstruct_from_smatrix(samples, 1, opt);
    CHECK(coefficient_distance(r.V, V) < 20.0 * sigma);
}
