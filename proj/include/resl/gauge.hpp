// Site-wise unitary gauges U = diag(u_x): a_x -> u_{x+1}^* a_x u_x,
// s_x -> u_x^* s_x u_{x+1}, b_x -> u_x^* b_x u_x.
#pragma once

#include "resl/linalg.hpp"

#include <limits>

namespace resl {

struct GaugeResult {
    Perturbation V;
    std::vector<Mat> u;  // u_1 .. u_{p+1}; u_x = u_{p+1} for x > p
};

enum class GaugeKind { polar, triangular };

inline const char* gauge_name(GaugeKind g) { return g == GaugeKind::polar ? "polar" : "triangular"; }

namespace detail {

inline GaugeResult apply_gauge(const Perturbation& V, GaugeKind kind, const Mat& u1) {
    const int d = V.d;
    if (u1.rows() != d || u1.cols() != d || !near(u1.adjoint() * u1, identity(d), 1e-12))
        throw Error(ErrorKind::InvalidInput, "u_1 must be a d x d unitary matrix");
    GaugeResult g;
    g.u.push_back(u1);
    std::vector<Mat> a, s, b;
    for (int x = 1; x <= V.p; ++x) {
        const Mat& ux = g.u.back();
        if (std::abs(V.a_at(x).determinant()) <= 1e-12) throw Error(ErrorKind::SingularCoefficient, "a_x is singular");
        const Mat au = V.a_at(x) * ux;
        Mat next, ax;
        if (kind == GaugeKind::polar) {
            const Polar pf = polar(au);
            next = pf.unitary;
            ax = pf.positive;
        } else {
            const QR f = qr_positive(au);
            next = f.q;
            ax = f.r;
        }
        a.push_back(ax);
        s.push_back(ux.adjoint() * V.s_at(x) * next);
        b.push_back(ux.adjoint() * V.b_at(x) * ux);
        g.u.push_back(next);
    }
    // Exact identity tails keep the odd-order pattern.
    if (V.q == 2 * V.p - 1) {
        a.back() = identity(d);
        s.back() = identity(d);
    }
    g.V = validate_perturbation(d, a, s, b);
    return g;
}

} // namespace detail

// a_x u_x = u_{x+1} h_x with h_x > 0; the new coefficients are h_x.
inline GaugeResult polar_gauge(const Perturbation& V, const Mat& u1) { return detail::apply_gauge(V, GaugeKind::polar, u1); }
inline GaugeResult polar_gauge(const Perturbation& V) { return polar_gauge(V, identity(V.d)); }

// a_x u_x = u_{x+1} r_x with r_x upper triangular, positive diagonal.
inline GaugeResult triangular_gauge(const Perturbation& V, const Mat& u1) {
    return detail::apply_gauge(V, GaugeKind::triangular, u1);
}
inline GaugeResult triangular_gauge(const Perturbation& V) { return triangular_gauge(V, identity(V.d)); }

inline GaugeResult apply_gauge(const Perturbation& V, GaugeKind kind) {
    return kind == GaugeKind::polar ? polar_gauge(V) : triangular_gauge(V);
}

// a_x Hermitian positive definite and s_x = a_x on the support.
inline bool in_positive_class(const Perturbation& V, double tol = 1e-10) {
    for (int x = 1; x <= V.p; ++x)
        if (!detail::is_positive_definite(V.a_at(x), tol) || !detail::near(V.s_at(x), V.a_at(x), tol)) return false;
    return true;
}

// a_x upper triangular with positive diagonal and s_x = a_x^* on the support.
inline bool in_triangular_class(const Perturbation& V, double tol = 1e-10) {
    for (int x = 1; x <= V.p; ++x)
        if (!detail::is_upper_triangular_positive(V.a_at(x), tol) || !detail::near(V.s_at(x), V.a_at(x).adjoint(), tol))
            return false;
    return true;
}

// Largest coefficient difference between two perturbations of equal shape.
inline double coefficient_distance(const Perturbation& X, const Perturbation& Y) {
    if (X.d != Y.d || X.p != Y.p) return std::numeric_limits<double>::infinity();
    double e = 0.0;
    for (int x = 1; x <= X.p; ++x)
        e = std::max({e, max_abs(X.a_at(x) - Y.a_at(x)), max_abs(X.s_at(x) - Y.s_at(x)), max_abs(X.b_at(x) - Y.b_at(x))});
    return e;
}

} // namespace resl
