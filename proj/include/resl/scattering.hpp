// S-matrix, Weyl matrices at the edge of the support, Fredholm determinant
// on the support window, and the phase-shift derivative on the unit circle.
#pragma once

#include "resl/spectra.hpp"

namespace resl {

namespace detail {

inline void require_nonsingular(const Mat& m, ErrorKind kind, const char* what) {
    const double scale = std::max(1.0, max_abs(m));
    if (std::abs(m.determinant()) <= 1e-13 * std::pow(scale, m.rows())) throw Error(kind, what);
}

} // namespace detail

// S(k) = psi(k)^{-1} psi(1/k).
inline Mat s_matrix(const JostData& J, cplx k) {
    if (k == cplx(0.0)) throw Error(ErrorKind::DivisionAtZero, "S-matrix at k = 0");
    const Mat psi = J.psi().eval(k);
    detail::require_nonsingular(psi, ErrorKind::AtPole, "det psi(k) vanishes");
    return psi.partialPivLu().solve(J.psi().eval(1.0 / k));
}

// The same function written as psi~(1/k) psi~(k)^{-1}; equal to s_matrix when
// psi psi~(1/k) = psi(1/k) psi~ holds, which is the case for both self-adjoint classes.
inline Mat s_matrix_adjoint_form(const JostData& J, cplx k) {
    if (k == cplx(0.0)) throw Error(ErrorKind::DivisionAtZero, "S-matrix at k = 0");
    const MatPoly pt = J.psi().tilde();
    const Mat den = pt.eval(k);
    detail::require_nonsingular(den, ErrorKind::AtPole, "det psi~(k) vanishes");
    return den.transpose().partialPivLu().solve(pt.eval(1.0 / k).transpose()).transpose();
}

// (-1)^q times the leading coefficient of psi, so that S(k) ~ (-k)^{-q} C^{-1} T_p
// at infinity and S(k) ~ (-k)^{-q} T_p^{-1} C at zero.
inline Mat asymptotic_constant(const JostData& J) {
    const Mat lead = J.psi().coeff(J.V.q);
    return (J.V.q % 2 == 0 ? 1.0 : -1.0) * lead;
}

struct WeylPair {
    Mat Mp;   // phi_p phi_{p+1}^{-1}
    Mat Mp1;  // phi_{p+1} phi_{p+2}^{-1}
};

// Weyl matrices from a single S-matrix value:
//   M_p     = a_p^{-1} (k^{2p} S - 1) (k^{2p+1} S - 1/k)^{-1}
//   M_{p+1} =          (k^{2p+2} S - 1) (k^{2p+3} S - 1/k)^{-1}
inline WeylPair weyl_from_smatrix(const Mat& S, cplx k, const Mat& ap, int p) {
    const int d = static_cast<int>(S.rows());
    const Mat I = identity(d);
    const auto ratio = [&](int n) -> Mat {
        const Mat num = ipow(k, n) * S - I;
        const Mat den = ipow(k, n + 1) * S - I / k;
        detail::require_nonsingular(den, ErrorKind::SingularDenominator, "Weyl denominator is singular");
        return den.transpose().partialPivLu().solve(num.transpose()).transpose();
    };
    WeylPair w;
    w.Mp = ap.partialPivLu().solve(ratio(2 * p));
    w.Mp1 = ratio(2 * p + 2);
    return w;
}

inline WeylPair weyl_from_smatrix(const JostData& J, cplx k) {
    return weyl_from_smatrix(s_matrix(J, k), k, J.V.a_at(J.V.p), J.V.p);
}

// phi_x phi_{x+1}^{-1} from the regular solution.
inline Mat weyl_from_regular(const Perturbation& V, cplx lambda, int x) {
    const RegularPair r = regular_solutions(V, lambda, x + 2);
    detail::require_nonsingular(r.phi[x + 1], ErrorKind::SingularDenominator, "phi_{x+1} is singular");
    return r.phi[x + 1].transpose().partialPivLu().solve(r.phi[x].transpose()).transpose();
}

struct FredholmData {
    Poly D;                 // det(I + V R_0) as a polynomial of degree <= qd
    int window = 0;         // number of sites in the window
    double overflow = 0.0;  // largest coefficient above degree qd before truncation
    cplx F1 = 0.0, F2 = 0.0;                  // from the Taylor coefficients of D
    cplx F1_formula = 0.0, F2_formula = 0.0;  // Tr sum b, sum Tr(b^2 + 2(a s - 1))
};

// Perturbation V = H - H_0 restricted to sites 1..p+1.
inline Mat perturbation_window(const Perturbation& V) {
    const int d = V.d;
    const int n = V.p + 1;
    const Mat I = identity(d);
    Mat W = Mat::Zero(n * d, n * d);
    for (int x = 1; x <= n; ++x) {
        const int i = (x - 1) * d;
        W.block(i, i, d, d) = V.b_at(x);
        if (x > 1) W.block(i, i - d, d, d) = V.a_at(x - 1) - I;
        if (x < n) W.block(i, i + d, d, d) = V.s_at(x) - I;
    }
    return W;
}

inline Mat free_resolvent_window(int sites, int d, cplx k) {
    Mat R = Mat::Zero(sites * d, sites * d);
    for (int x = 1; x <= sites; ++x)
        for (int t = 1; t <= sites; ++t) {
            const cplx r = free_resolvent_kernel(x, t, k);
            for (int i = 0; i < d; ++i) R((x - 1) * d + i, (t - 1) * d + i) = r;
        }
    return R;
}

inline FredholmData fredholm_determinant(const Perturbation& V) {
    const int d = V.d;
    const int sites = V.p + 1;
    const int n = sites * d;
    const int qd = V.q * d;
    const Mat W = perturbation_window(V);
    const Mat I = Mat::Identity(n, n);

    // Entries of R_0 on the window have degree <= 2 sites - 1; each determinant term
    // multiplies at most n of them.
    const int bound = n * (2 * sites - 1);
    // Roots of unity, so the coefficients are a discrete Fourier transform.
    const int m = bound + 1;
    const std::vector<cplx> nodes = circle_nodes(m, 1.0, 0.0);
    std::vector<cplx> values;
    values.reserve(m);
    for (cplx z : nodes) values.push_back((I + W * free_resolvent_window(sites, d, z)).determinant());
    std::vector<cplx> coeffs(m, 0.0);
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < m; ++i) coeffs[j] += values[i] * std::conj(ipow(nodes[i], j));
        coeffs[j] /= static_cast<double>(m);
    }
    const Poly full(std::move(coeffs));

    FredholmData out;
    out.window = sites;
    const double scale = std::max(1.0, full.max_abs());
    for (int j = qd + 1; j <= full.degree(); ++j) out.overflow = std::max(out.overflow, std::abs(full.coeff(j)) / scale);
    if (out.overflow > 1e-9)
        throw Error(ErrorKind::DegreeOverflow, "Fredholm determinant has degree above qd");
    std::vector<cplx> c(qd + 1);
    for (int j = 0; j <= qd; ++j) c[j] = full.coeff(j);
    out.D = Poly(std::move(c));

    const cplx d1 = out.D.coeff(1), d2 = out.D.coeff(2);
    out.F1 = -d1;
    out.F2 = d1 * d1 - 2.0 * d2;
    for (int x = 1; x <= V.p; ++x) {
        const Mat b = V.b_at(x);
        out.F1_formula += b.trace();
        out.F2_formula += (b * b + 2.0 * (V.a_at(x) * V.s_at(x) - identity(d))).trace();
    }
    return out;
}

// max_n |f_n - det T_p D_n| / max_n |f_n|
inline double jost_fredholm_defect(const Poly& f, const FredholmData& F, cplx detT) {
    const int n = std::max(f.degree(), F.D.degree());
    double err = 0.0;
    for (int j = 0; j <= n; ++j) err = std::max(err, std::abs(f.coeff(j) - detT * F.D.coeff(j)));
    return err / std::max(f.max_abs(), 1e-300);
}

// Derivative in theta of xi = -arg det S(e^{i theta}) / 2, written through the
// zeros r_j of det psi. With real coefficients the two sums coincide.
inline double phase_shift_derivative(const std::vector<cplx>& roots, cplx k, double tol = 1e-9) {
    if (std::abs(std::abs(k) - 1.0) > tol) throw Error(ErrorKind::InvalidInput, "k must lie on the unit circle");
    const cplx kb = std::conj(k);
    double s = 0.0;
    for (cplx r : roots) {
        const double d1 = std::norm(k - r), d2 = std::norm(kb - r);
        if (d1 <= tol * tol || d2 <= tol * tol) throw Error(ErrorKind::OnRoot, "k is a zero of det psi");
        s += (1.0 - (kb * r).real()) / d1 + (1.0 - (k * r).real()) / d2;
    }
    return 0.5 * s;
}

// Central difference of -arg det S / 2 along the circle.
inline double phase_shift_derivative_numeric(const JostData& J, double theta, double h = 1e-5) {
    const auto phase = [&](double t) { return s_matrix(J, std::polar(1.0, t)).determinant(); };
    const cplx ratio = phase(theta + h) / phase(theta - h);
    return -0.5 * std::arg(ratio) / (2.0 * h);
}

} // namespace resl
