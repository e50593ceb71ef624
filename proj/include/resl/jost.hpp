// Jost solutions as exact matrix polynomials in k, regular solutions in
// lambda, structural coefficients of the Jost matrix, and Wronskians.
#pragma once

#include "resl/matpoly.hpp"

#include <functional>

namespace resl {

// All sequences are indexed by the site x = 0..p.
struct Structural {
    std::vector<Mat> tau;  // a_x^{-1}, tau_0 = 1
    std::vector<Mat> T;    // tau_1 ... tau_x
    std::vector<Mat> T1;   // sum_j T_{j-1} b_j tau_j ... tau_x
    std::vector<Mat> B;    // b_1 + ... + b_x
    std::vector<Mat> c;    // 1 - s_x a_x; c_0 = 1 (see README, conventions)
    std::vector<Mat> ct;   // 1 - a_x s_x; ct_0 = 1
    Mat C0, C0o, C01;
    cplx h = 0.0;          // det c_p for even q, det b_p for odd q
};

struct JostData {
    Perturbation V;
    std::vector<MatPoly> f;  // f_0 .. f_{p+1}
    Structural st;
    double structure_residual = 0.0;

    const MatPoly& psi() const { return f[0]; }
    const MatPoly& f1() const { return f[1]; }

    Mat f_at(int x, cplx k) const {
        if (x <= V.p + 1) return f[x].eval(k);
        return ipow(k, x) * identity(V.d);
    }

    // m_+ = f_1 f_0^{-1}
    Mat m_plus(cplx k) const {
        const Mat f0 = f[0].eval(k);
        return f[1].eval(k) * f0.inverse();
    }

    // Coefficients of psi at k^q and k^(q-1) predicted from the structural data.
    Mat predicted_leading() const {
        const int p = V.p;
        if (V.q == 2 * p) return st.C0;
        return -st.T[p - 1] * V.b_at(p);
    }
    Mat predicted_subleading() const { return V.q == 2 * V.p ? Mat(-st.C0o) : st.C01; }
};

inline Structural structural_coefficients(const Perturbation& V) {
    const int p = V.p;
    const int d = V.d;
    Structural st;
    st.tau.push_back(identity(d));
    st.T.push_back(identity(d));
    st.T1.push_back(zeros(d));
    st.B.push_back(zeros(d));
    st.c.push_back(identity(d));
    st.ct.push_back(identity(d));
    for (int x = 1; x <= p; ++x) {
        const Mat tau = V.a_at(x).inverse();
        st.tau.push_back(tau);
        st.T1.push_back(st.T1[x - 1] * tau + st.T[x - 1] * V.b_at(x) * tau);
        st.T.push_back(st.T[x - 1] * tau);
        st.B.push_back(st.B[x - 1] + V.b_at(x));
        st.c.push_back(identity(d) - V.s_at(x) * V.a_at(x));
        st.ct.push_back(identity(d) - V.a_at(x) * V.s_at(x));
    }
    const Mat& bp = V.b_at(p);
    st.C0 = st.T[p - 1] * st.c[p] * st.tau[p];
    st.C0o = st.T[p - 1] * bp * st.tau[p] + st.T1[p - 1] * st.c[p] * st.tau[p];
    st.C01 = st.T1[p - 1] * bp + st.T[p - 1] * st.ct[p - 1];
    st.h = V.q == 2 * p ? st.c[p].determinant() : bp.determinant();
    return st;
}

// Backward recursion a_{x-1} f_{x-1} = (k + 1/k - b_x) f_x - s_x f_{x+1} from
// f_{p+1} = k^{p+1}, f_{p+2} = k^{p+2}, carried out on Laurent polynomials.
inline JostData build_jost(const Perturbation& V, const Tolerances& tol = {}) {
    const int p = V.p;
    const int q = V.q;
    const int d = V.d;
    const Mat I = identity(d);
    std::vector<MatPoly> f(p + 3, MatPoly(d));
    f[p + 1] = MatPoly::monomial(I, p + 1);
    f[p + 2] = MatPoly::monomial(I, p + 2);
    for (int x = p + 1; x >= 1; --x) {
        const MatPoly rhs = f[x].shifted(1) + f[x].shifted(-1) - V.b_at(x) * f[x] - V.s_at(x) * f[x + 1];
        const MatPoly next = V.a_at(x - 1).inverse() * rhs;
        const int y = x - 1;
        // f_y = k^y F_y with deg F_y = q - 2y for y < p, and f_p = tau_p k^p.
        const int lo = y;
        const int hi = (y == p) ? p : q - y;
        const double scale = std::max(1.0, next.max_norm());
        for (int n = next.lo(); n <= next.hi(); ++n) {
            if (n >= lo && n <= hi) continue;
            if (next.coeff(n).cwiseAbs().maxCoeff() > tol.coeff * scale)
                throw Error(ErrorKind::StructureViolation,
                            "f_" + std::to_string(y) + " has a nonzero coefficient at k^" + std::to_string(n));
        }
        f[y] = next.window(lo, hi);
    }
    f.pop_back();

    JostData J;
    J.V = V;
    J.f = std::move(f);
    J.st = structural_coefficients(V);

    const MatPoly& psi = J.f[0];
    const double scale = std::max(1.0, psi.max_norm());
    if (psi.coeff(q).cwiseAbs().maxCoeff() <= tol.coeff * scale)
        throw Error(ErrorKind::StructureViolation, "Jost matrix degree is below q");

    const auto rel = [&](const Mat& x, const Mat& y) { return (x - y).cwiseAbs().maxCoeff() / scale; };
    double r = rel(psi.coeff(0), J.st.T[p]);
    r = std::max(r, rel(psi.coeff(1), -J.st.T1[p]));
    r = std::max(r, rel(psi.coeff(q), J.predicted_leading()));
    r = std::max(r, rel(psi.coeff(q - 1), J.predicted_subleading()));
    J.structure_residual = r;
    if (r > 1e-8) throw Error(ErrorKind::StructureViolation, "structural coefficients disagree with the recursion");
    return J;
}

struct RegularPair {
    std::vector<Mat> phi;    // phi_0 .. phi_n
    std::vector<Mat> theta;  // theta_0 .. theta_n
};

// Forward recursion y_{x+1} = s_x^{-1}((lambda - b_x) y_x - a_{x-1} y_{x-1}).
inline RegularPair regular_solutions(const Perturbation& V, cplx lambda, int xmax = -1) {
    if (xmax < 0) xmax = V.p + 2;
    xmax = std::max(xmax, 1);
    const int d = V.d;
    RegularPair r;
    r.phi = {zeros(d), identity(d)};
    r.theta = {identity(d), zeros(d)};
    for (int x = 1; x < xmax; ++x) {
        const Mat L = lambda * identity(d) - V.b_at(x);
        const auto lu = V.s_at(x).partialPivLu();
        r.phi.push_back(lu.solve(L * r.phi[x] - V.a_at(x - 1) * r.phi[x - 1]));
        r.theta.push_back(lu.solve(L * r.theta[x] - V.a_at(x - 1) * r.theta[x - 1]));
    }
    return r;
}

// A solution family maps (x, k) to the d x d value y_x(k).
using Family = std::function<Mat(int, cplx)>;

// {y, z}_x = y~_x s_x z_{x+1} - y~_{x+1} a_x z_x with y~_x(k) = y_x(conj k)^*.
// For the positive class s_x = a_x; the s_x slot keeps the form x-independent
// for s_x = a_x^* as well.
inline Mat wronskian(const Perturbation& V, const Family& y, const Family& z, int x, cplx k) {
    const cplx kb = std::conj(k);
    return y(x, kb).adjoint() * V.s_at(x) * z(x + 1, k) - y(x + 1, kb).adjoint() * V.a_at(x) * z(x, k);
}

inline Family jost_family(const JostData& J) {
    return [&J](int x, cplx k) { return J.f_at(x, k); };
}

// f^(k) = f(1/k)
inline Family jost_reflected_family(const JostData& J) {
    return [&J](int x, cplx k) { return J.f_at(x, 1.0 / k); };
}

inline Family phi_family(const Perturbation& V) {
    return [&V](int x, cplx k) { return regular_solutions(V, lambda_of_k(k), x + 1).phi[x]; };
}

inline Family theta_family(const Perturbation& V) {
    return [&V](int x, cplx k) { return regular_solutions(V, lambda_of_k(k), x + 1).theta[x]; };
}

// F = theta + phi m_+
inline Family weyl_solution_family(const JostData& J) {
    return [&J](int x, cplx k) {
        const RegularPair r = regular_solutions(J.V, lambda_of_k(k), x + 1);
        return Mat(r.theta[x] + r.phi[x] * J.m_plus(k));
    };
}

} // namespace resl
