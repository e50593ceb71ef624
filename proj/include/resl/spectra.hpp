// Jost determinant, its roots and their classification, trace identities,
// bounds on the resonance set, norming matrices, and resolvent kernels.
#pragma once

#include "resl/jost.hpp"
#include "resl/linalg.hpp"
#include "resl/roots.hpp"

#include <optional>

namespace resl {

// C_V = (-1)^{dq} h det T_p, the leading coefficient of det psi.
inline cplx leading_constant(const JostData& J) {
    const int dq = J.V.d * J.V.q;
    return (dq % 2 == 0 ? 1.0 : -1.0) * J.st.h * J.st.T[J.V.p].determinant();
}

// Radius equilibrating |det psi(0)| against |C_V|.
inline double node_radius(const JostData& J) {
    const double h = std::abs(J.st.h);
    const int n = J.V.d * J.V.q;
    return std::max(1.0, std::pow(h, -1.0 / n));
}

// det psi(k) as a scalar polynomial of degree qd, interpolated on qd + 1 nodes.
inline Poly jost_determinant(const JostData& J, const Tolerances& tol = {}) {
    const int n = J.V.d * J.V.q;
    const std::vector<cplx> nodes = circle_nodes(n + 1, node_radius(J));
    std::vector<cplx> values;
    for (cplx z : nodes) values.push_back(J.psi().eval(z).determinant());
    Poly g = interpolate_poly(nodes, values, n, tol);
    const Poly t = g.trimmed(tol.coeff);
    if (t.degree() != n)
        throw Error(ErrorKind::DegreeMismatch, "det psi has degree " + std::to_string(t.degree()) + ", expected " + std::to_string(n));
    return g;
}

// Eigenvalues of the block companion matrix of psi; these are the roots of
// det psi with semisimple multiple roots resolved to working precision.
inline std::vector<cplx> block_companion_eigenvalues(const MatPoly& psi) {
    const int d = psi.dim();
    const int q = psi.degree();
    const auto lead = psi.coeff(q).partialPivLu();
    Mat C = Mat::Zero(q * d, q * d);
    for (int i = 0; i + 1 < q; ++i) C.block(i * d, (i + 1) * d, d, d) = identity(d);
    for (int i = 0; i < q; ++i) C.block((q - 1) * d, i * d, d, d) = -lead.solve(psi.coeff(i));
    Eigen::ComplexEigenSolver<Mat> es(C, false);
    std::vector<cplx> z(q * d);
    for (int i = 0; i < q * d; ++i) z[i] = es.eigenvalues()(i);
    return z;
}

inline std::vector<Root> jost_roots(const JostData& J, const Poly& g, const RootOptions& opt = {}) {
    return find_roots(g, block_companion_eigenvalues(J.psi()), opt);
}

enum class RootKind { eigenvalue, resonance, virtual_state };

inline const char* kind_name(RootKind k) {
    switch (k) {
    case RootKind::eigenvalue: return "eigenvalue";
    case RootKind::resonance: return "resonance";
    case RootKind::virtual_state: return "virtual";
    }
    return "resonance";
}

struct ClassifiedRoot {
    Root root;
    RootKind kind = RootKind::resonance;
    cplx lambda = 0.0;  // k + 1/k
};

struct TraceResiduals {
    double product = 0.0;      // |prod r - 1/h|
    double sum_inverse = 0.0;  // |sum 1/r - Tr B_p|
    double sum = 0.0;          // |sum r - A|
    cplx A = 0.0;
    double tolerance = 0.0;    // 1e-7 (1 + 1/|h|)
    bool ok() const { return product < tolerance && sum_inverse < tolerance && sum < tolerance; }
};

struct SpectrumReport {
    int d = 0, q = 0;
    std::vector<ClassifiedRoot> roots;
    cplx C_V = 0.0;
    cplx h = 0.0;
    Poly determinant;
    int nu_plus = 0, nu_minus = 0;  // distinct eigenvalue parameters in (0,1) and (-1,0)
    int eigen_count = 0;            // roots strictly inside the disc, with multiplicity
    std::vector<std::string> anomalies;
    TraceResiduals residuals;

    std::vector<cplx> all_roots() const {
        std::vector<cplx> out;
        for (const auto& r : roots)
            for (int m = 0; m < r.root.multiplicity; ++m) out.push_back(r.root.value);
        return out;
    }
    std::vector<double> eigen_parameters() const {
        std::vector<double> out;
        for (const auto& r : roots)
            if (r.kind == RootKind::eigenvalue) out.push_back(r.root.value.real());
        return out;
    }
};

// A = sum of the roots predicted from the structural coefficients.
inline cplx trace_sum_constant(const JostData& J) {
    const Perturbation& V = J.V;
    const int p = V.p;
    cplx A = 0.0;
    for (int j = 1; j <= p - 1; ++j) A += V.b_at(j).trace();
    if (V.q == 2 * p) {
        A += J.st.c[p].partialPivLu().solve(V.b_at(p)).trace();
    } else {
        A += V.b_at(p).partialPivLu().solve(J.st.ct[p - 1]).trace();
    }
    return A;
}

inline TraceResiduals trace_identities(const SpectrumReport& report, const JostData& J) {
    TraceResiduals t;
    cplx prod = 1.0, sum = 0.0, sum_inv = 0.0;
    for (cplx r : report.all_roots()) {
        prod *= r;
        sum += r;
        sum_inv += 1.0 / r;
    }
    t.A = trace_sum_constant(J);
    t.product = std::abs(prod - 1.0 / J.st.h);
    t.sum_inverse = std::abs(sum_inv - J.st.B[J.V.p].trace());
    t.sum = std::abs(sum - t.A);
    t.tolerance = 1e-7 * (1.0 + 1.0 / std::abs(J.st.h));
    return t;
}

struct ClassifyOptions {
    double band = 1e-8;
    double real_tol = 1e-7;  // imaginary part allowed for real roots, scaled by 1 + |r|
    bool throw_on_anomaly = true;
};

inline SpectrumReport classify_spectrum(const JostData& J, const Poly& g, const std::vector<Root>& roots,
                                        const ClassifyOptions& opt = {}) {
    SpectrumReport rep;
    rep.d = J.V.d;
    rep.q = J.V.q;
    rep.C_V = leading_constant(J);
    rep.h = J.st.h;
    rep.determinant = g;
    const bool sa = J.V.is_selfadjoint_operator();
    for (const Root& r : roots) {
        ClassifiedRoot c;
        c.root = r;
        const double m = std::abs(r.value);
        const bool real = std::abs(r.value.imag()) <= opt.real_tol * (1.0 + m);
        if (m < 1.0 - opt.band) {
            c.kind = RootKind::eigenvalue;
            if (sa && real) c.root.value = r.value.real();
            c.lambda = lambda_of_k(c.root.value);
            rep.eigen_count += r.multiplicity;
            if (sa && !real) rep.anomalies.push_back("non-real root inside the disc");
            if (c.root.value.real() > 0) ++rep.nu_plus;
            else ++rep.nu_minus;
        } else if (m > 1.0 + opt.band) {
            c.kind = RootKind::resonance;
        } else {
            c.kind = RootKind::virtual_state;
            if (sa && !(real && std::abs(std::abs(r.value.real()) - 1.0) <= opt.band * 10))
                rep.anomalies.push_back("virtual state away from +-1");
            if (sa && real) c.root.value = r.value.real() > 0 ? 1.0 : -1.0;
        }
        rep.roots.push_back(c);
    }
    if (sa) {
        for (const Root& r : roots) {
            bool found = false;
            for (const Root& s : roots)
                if (std::abs(std::conj(r.value) - s.value) <= opt.real_tol * (1.0 + std::abs(r.value)) &&
                    s.multiplicity == r.multiplicity)
                    found = true;
            if (!found) {
                rep.anomalies.push_back("root set not closed under conjugation");
                break;
            }
        }
    }
    rep.residuals = trace_identities(rep, J);
    if (opt.throw_on_anomaly && !rep.anomalies.empty())
        throw Error(ErrorKind::ClassificationAnomaly, rep.anomalies.front());
    return rep;
}

// Full pipeline: determinant, roots, classification.
inline SpectrumReport spectrum(const JostData& J, const ClassifyOptions& copt = {}, const RootOptions& ropt = {}) {
    const Poly g = jost_determinant(J);
    return classify_spectrum(J, g, jost_roots(J, g, ropt), copt);
}

struct BoundCheck {
    bool applicable = false;
    std::string reason;
    bool holds = false;
    bool tight = false;          // some inequality holds with equality, within the slack
    std::vector<double> values;  // quantities entering the inequalities, in order
};

struct ForbiddenDomain {
    BoundCheck annulus;       // 1 <= r_- <= |h|^{-1/qd} <= r_+ <= |h|^{-1}
    BoundCheck eigen_bound;   // r_-^m < 1/|h|
};

inline BoundCheck check_forbidden_annulus(const SpectrumReport& rep, double slack = 1e-9) {
    BoundCheck b;
    if (rep.q <= 2) throw Error(ErrorKind::NotApplicable, "annulus bound needs q > 2");
    if (rep.eigen_count > 0) throw Error(ErrorKind::NotApplicable, "annulus bound needs no eigenvalues");
    double rmin = 1e300, rmax = 0.0;
    for (cplx r : rep.all_roots()) {
        rmin = std::min(rmin, std::abs(r));
        rmax = std::max(rmax, std::abs(r));
    }
    const double h = std::abs(rep.h);
    const double mid = std::pow(h, -1.0 / (rep.q * rep.d));
    b.applicable = true;
    b.values = {1.0, rmin, mid, rmax, 1.0 / h};
    b.holds = true;
    for (std::size_t i = 0; i + 1 < b.values.size(); ++i) {
        if (b.values[i] > b.values[i + 1] * (1.0 + slack)) b.holds = false;
        if (std::abs(b.values[i] - b.values[i + 1]) <= slack * b.values[i + 1]) b.tight = true;
    }
    return b;
}

// Non-strict: r_-^m equals 1 / |h| whenever no root lies outside the closed disc
// (for instance psi = 1 - b k with |b| > 1).
inline BoundCheck check_eigenvalue_bound(const SpectrumReport& rep, double slack = 1e-9) {
    BoundCheck b;
    const double h = std::abs(rep.h);
    // |h| = 1 up to rounding counts as 1
    if (h <= 1.0 + 1e-12) throw Error(ErrorKind::NotApplicable, "eigenvalue bound needs |h| > 1");
    double rmin = 1e300;
    for (cplx r : rep.all_roots()) rmin = std::min(rmin, std::abs(r));
    b.applicable = true;
    const double lhs = std::pow(rmin, rep.eigen_count);
    b.values = {lhs, 1.0 / h};
    b.holds = lhs <= (1.0 + slack) / h;
    b.tight = std::abs(lhs - 1.0 / h) <= slack / h;
    return b;
}

inline ForbiddenDomain forbidden_domain(const SpectrumReport& rep) {
    ForbiddenDomain f;
    try {
        f.annulus = check_forbidden_annulus(rep);
    } catch (const Error& e) {
        f.annulus.reason = e.what();
    }
    try {
        f.eigen_bound = check_eigenvalue_bound(rep);
    } catch (const Error& e) {
        f.eigen_bound.reason = e.what();
    }
    return f;
}

struct NormingData {
    double k = 0.0;
    Mat E, E_dual;      // orthonormal bases of Ker psi(k) and Ker psi(k)^*
    int dj = 0;
    Mat K;              // series form
    Mat K_derivative;   // derivative form
    Mat PKP;            // P K P as a d x d matrix
    double C = 0.0;     // k^{2p+2} / (1 - k^2)
    double bound_margin = 0.0;   // min eigenvalue of K - C
    double nm3_residual = 0.0;   // E^* K E vs (1/lambda') u'^* v
    double nm4_residual = 0.0;   // f_1(k) E outside span E_dual
    double p3_residual = 0.0;    // u' u(1/k)^* - u(1/k) u'^*
    Mat X;              // residue of S at k
};

namespace detail {

inline void require_eigen_parameter(const JostData& J, cplx kj) {
    if (!J.V.is_selfadjoint_operator())
        throw Error(ErrorKind::InvalidInput, "norming data need a self-adjoint perturbation");
    if (std::abs(kj.imag()) > 1e-8 || std::abs(kj.real()) >= 1.0 || kj.real() == 0.0)
        throw Error(ErrorKind::NotAnEigenvalue, "k_j must be real with 0 < |k_j| < 1");
}

inline Kernels eigen_kernels(const JostData& J, double k, double rank_tol) {
    // Cut relative to the size of the terms summed in psi(k).
    double scale = 0.0;
    const MatPoly& psi = J.psi();
    for (int n = psi.lo(); n <= psi.hi(); ++n) scale += max_abs(psi.coeff(n)) * std::pow(std::abs(k), n);
    const Kernels ker = kernels(psi.eval(k), rank_tol, -1, scale);
    if (ker.right.cols() == 0) throw Error(ErrorKind::NotAnEigenvalue, "psi(k_j) is invertible");
    if (ker.ambiguous) throw Error(ErrorKind::DegenerateKernel, "numerical rank of psi(k_j) is ambiguous");
    return ker;
}

inline Mat residue_from_kernels(const JostData& J, double k, const Kernels& ker) {
    const Mat udot = ker.left.adjoint() * J.psi().derivative().eval(k) * ker.right;
    const auto lu = udot.fullPivLu();
    if (!lu.isInvertible() || std::abs(udot.determinant()) <= 1e-13 * std::pow(std::max(1.0, max_abs(udot)), udot.rows()))
        throw Error(ErrorKind::SingularDerivativeBlock, "P psi'(k_j) P is not invertible");
    return ker.right * lu.solve(ker.left.adjoint() * J.psi().eval(1.0 / k));
}

} // namespace detail

inline NormingData norming_matrix(const JostData& J, cplx kj, const Tolerances& tol = {}) {
    detail::require_eigen_parameter(J, kj);
    const double k = kj.real();
    const int p = J.V.p;
    const int d = J.V.d;
    const Kernels ker = detail::eigen_kernels(J, k, tol.rank);
    NormingData n;
    n.k = k;
    n.E = ker.right;
    n.E_dual = ker.left;
    n.dj = static_cast<int>(ker.right.cols());
    n.C = std::pow(k, 2 * p + 2) / (1.0 - k * k);

    n.K = n.C * identity(d);
    for (int x = 1; x <= p; ++x) {
        const Mat fx = J.f_at(x, k);
        n.K += fx.adjoint() * fx;
    }
    n.K = hermitian_part(n.K);

    const double ldot = 1.0 - 1.0 / (k * k);
    const Mat f0 = J.psi().eval(k), f1 = J.f1().eval(k);
    const Mat df0 = J.psi().derivative().eval(k), df1 = J.f1().derivative().eval(k);
    n.K_derivative = (df0.adjoint() * f1 - df1.adjoint() * f0) / ldot;

    n.bound_margin = min_hermitian_eigenvalue(n.K - n.C * identity(d));
    n.PKP = n.E * (n.E.adjoint() * n.K * n.E) * n.E.adjoint();

    const Mat udot = n.E_dual.adjoint() * df0 * n.E;
    const Mat v = n.E_dual.adjoint() * f1 * n.E;
    n.nm3_residual = max_abs(n.E.adjoint() * n.K * n.E - udot.adjoint() * v / ldot);
    n.nm4_residual = max_abs((identity(d) - n.E_dual * n.E_dual.adjoint()) * f1 * n.E);
    const Mat u_inv = n.E_dual.adjoint() * J.psi().eval(1.0 / k) * n.E;
    n.p3_residual = max_abs(udot * u_inv.adjoint() - u_inv * udot.adjoint());
    n.X = detail::residue_from_kernels(J, k, ker);
    return n;
}

// Residue X_j of S(k) = psi(k)^{-1} psi(1/k) at the eigenvalue parameter k_j.
inline Mat s_residue(const JostData& J, cplx kj, const Tolerances& tol = {}) {
    detail::require_eigen_parameter(J, kj);
    const double k = kj.real();
    return detail::residue_from_kernels(J, k, detail::eigen_kernels(J, k, tol.rank));
}

// Smallest eigenvalue of E^* X E (Hermitian part).
inline double residue_min_eigenvalue(const Mat& X, const Mat& E) { return min_hermitian_eigenvalue(E.adjoint() * X * E); }

// Free resolvent kernel in its polynomial form
// -k^{1+|x-x'|} (1 + k^2 + ... + k^{2(w-1)}), w = min(x, x').
inline cplx free_resolvent_kernel(int x, int xp, cplx k) {
    if (x < 1 || xp < 1) throw Error(ErrorKind::InvalidInput, "sites start at 1");
    const int w = std::min(x, xp);
    cplx s = 0.0, kk = 1.0;
    for (int i = 0; i < w; ++i) {
        s += kk;
        kk *= k * k;
    }
    return -ipow(k, 1 + std::abs(x - xp)) * s;
}

enum class Assembly { weyl, jost };

// Kernel of (H - lambda(k))^{-1}: -F_x phi~_t for t <= x and -phi_x F~_t for t > x,
// where F = theta + phi m_+ = f psi^{-1} and y~(k) = y(conj k)^*. The default
// evaluates F as f psi^{-1}; the theta + phi m_+ sum cancels badly for small |k|.
inline Mat resolvent_kernel(const JostData& J, int x, int t, cplx k, Assembly how = Assembly::jost) {
    const Perturbation& V = J.V;
    const Mat psi = J.psi().eval(k);
    if (std::abs(psi.determinant()) <= 1e-13 * std::pow(std::max(1.0, max_abs(psi)), V.d))
        throw Error(ErrorKind::AtPole, "det psi(k) vanishes");
    const auto weyl = [&](int y, cplx kk) -> Mat {
        if (how == Assembly::jost) return J.f_at(y, kk) * J.psi().eval(kk).inverse();
        const RegularPair r = regular_solutions(V, lambda_of_k(kk), y + 1);
        return r.theta[y] + r.phi[y] * J.m_plus(kk);
    };
    const auto phi = [&](int y, cplx kk) -> Mat { return regular_solutions(V, lambda_of_k(kk), y + 1).phi[y]; };
    const cplx kb = std::conj(k);
    if (t <= x) return -weyl(x, k) * phi(t, kb).adjoint();
    return -phi(x, k) * weyl(t, kb).adjoint();
}

} // namespace resl
