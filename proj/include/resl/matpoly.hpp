// Laurent polynomials in k with d x d complex matrix coefficients, scalar
// polynomials, and least-squares interpolation on arbitrary nodes.
#pragma once

#include "resl/core.hpp"

#include <algorithm>
#include <numbers>

namespace resl {

class MatPoly {
public:
    MatPoly() = default;
    explicit MatPoly(int d) : d_(d) {}
    MatPoly(int d, int lo, std::vector<Mat> coeffs) : d_(d), lo_(lo), c_(std::move(coeffs)) {}

    static MatPoly constant(const Mat& m) { return MatPoly(static_cast<int>(m.rows()), 0, {m}); }
    static MatPoly monomial(const Mat& m, int power) { return MatPoly(static_cast<int>(m.rows()), power, {m}); }

    int dim() const { return d_; }
    int lo() const { return lo_; }
    int hi() const { return lo_ + static_cast<int>(c_.size()) - 1; }
    int degree() const { return c_.empty() ? -1 : hi(); }
    bool is_zero() const { return c_.empty(); }
    const std::vector<Mat>& coeffs() const { return c_; }

    Mat coeff(int n) const {
        if (c_.empty() || n < lo_ || n > hi()) return zeros(d_);
        return c_[n - lo_];
    }

    double max_norm() const {
        double m = 0.0;
        for (const Mat& c : c_) m = std::max(m, c.cwiseAbs().maxCoeff());
        return m;
    }

    Mat eval(cplx k) const {
        if (c_.empty()) return zeros(d_);
        if (k == cplx(0.0)) {
            if (lo_ < 0) throw Error(ErrorKind::DivisionAtZero, "Laurent polynomial evaluated at k = 0");
            return coeff(0);
        }
        Mat acc = c_.back();
        for (int i = static_cast<int>(c_.size()) - 2; i >= 0; --i) acc = acc * k + c_[i];
        return acc * ipow(k, lo_);
    }

    MatPoly derivative() const {
        std::vector<Mat> out;
        int new_lo = lo_ - 1;
        for (std::size_t i = 0; i < c_.size(); ++i) out.push_back(c_[i] * static_cast<double>(lo_ + static_cast<int>(i)));
        if (lo_ == 0 && !out.empty()) {
            out.erase(out.begin());
            new_lo = 0;
        }
        return MatPoly(d_, new_lo, std::move(out)).trimmed(0.0);
    }

    // Multiplication by k^n.
    MatPoly shifted(int n) const { return MatPoly(d_, lo_ + n, c_); }

    // Coefficientwise conjugate transpose: the polynomial k -> P(conj k)^*.
    MatPoly tilde() const {
        std::vector<Mat> out;
        for (const Mat& c : c_) out.push_back(c.adjoint());
        return MatPoly(d_, lo_, std::move(out));
    }

    // Drops leading and trailing blocks whose max-entry is at most rel * max_norm().
    MatPoly trimmed(double rel) const {
        const double thr = rel * max_norm();
        std::size_t first = 0, last = c_.size();
        while (first < last && c_[first].cwiseAbs().maxCoeff() <= thr) ++first;
        while (last > first && c_[last - 1].cwiseAbs().maxCoeff() <= thr) --last;
        if (first == last) return MatPoly(d_);
        return MatPoly(d_, lo_ + static_cast<int>(first), std::vector<Mat>(c_.begin() + first, c_.begin() + last));
    }

    // Copy restricted to powers [from, to].
    MatPoly window(int from, int to) const {
        std::vector<Mat> out;
        for (int n = from; n <= to; ++n) out.push_back(coeff(n));
        return MatPoly(d_, from, std::move(out));
    }

    friend MatPoly operator+(const MatPoly& x, const MatPoly& y) { return combine(x, y, 1.0); }
    friend MatPoly operator-(const MatPoly& x, const MatPoly& y) { return combine(x, y, -1.0); }

    friend MatPoly operator*(const Mat& m, const MatPoly& x) {
        std::vector<Mat> out;
        for (const Mat& c : x.c_) out.push_back(m * c);
        return MatPoly(x.d_, x.lo_, std::move(out));
    }
    friend MatPoly operator*(const MatPoly& x, const Mat& m) {
        std::vector<Mat> out;
        for (const Mat& c : x.c_) out.push_back(c * m);
        return MatPoly(x.d_, x.lo_, std::move(out));
    }
    friend MatPoly operator*(cplx z, const MatPoly& x) {
        std::vector<Mat> out;
        for (const Mat& c : x.c_) out.push_back(z * c);
        return MatPoly(x.d_, x.lo_, std::move(out));
    }
    friend MatPoly operator*(const MatPoly& x, const MatPoly& y) {
        if (x.c_.empty() || y.c_.empty()) return MatPoly(x.d_);
        std::vector<Mat> out(x.c_.size() + y.c_.size() - 1, zeros(x.d_));
        for (std::size_t i = 0; i < x.c_.size(); ++i)
            for (std::size_t j = 0; j < y.c_.size(); ++j) out[i + j] += x.c_[i] * y.c_[j];
        return MatPoly(x.d_, x.lo_ + y.lo_, std::move(out));
    }

private:
    static MatPoly combine(const MatPoly& x, const MatPoly& y, double sign) {
        if (x.c_.empty()) return sign * y;
        if (y.c_.empty()) return x;
        const int lo = std::min(x.lo_, y.lo_);
        const int hi = std::max(x.hi(), y.hi());
        std::vector<Mat> out;
        for (int n = lo; n <= hi; ++n) out.push_back(x.coeff(n) + sign * y.coeff(n));
        return MatPoly(x.d_, lo, std::move(out));
    }
    friend MatPoly operator*(double z, const MatPoly& x) { return cplx(z) * x; }

    int d_ = 1;
    int lo_ = 0;
    std::vector<Mat> c_;
};

// Scalar polynomial with coefficients ordered from the constant term upward.
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<cplx> c) : c_(std::move(c)) {}

    static Poly from_roots(const std::vector<cplx>& roots, cplx lead = 1.0) {
        std::vector<cplx> c{lead};
        for (cplx r : roots) {
            std::vector<cplx> n(c.size() + 1, 0.0);
            for (std::size_t i = 0; i < c.size(); ++i) {
                n[i + 1] += c[i];
                n[i] -= r * c[i];
            }
            c = std::move(n);
        }
        return Poly(std::move(c));
    }

    const std::vector<cplx>& coeffs() const { return c_; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    cplx coeff(int n) const { return (n >= 0 && n < static_cast<int>(c_.size())) ? c_[n] : cplx(0.0); }
    cplx leading() const { return c_.empty() ? cplx(0.0) : c_.back(); }

    double max_abs() const {
        double m = 0.0;
        for (cplx z : c_) m = std::max(m, std::abs(z));
        return m;
    }

    cplx eval(cplx k) const {
        cplx acc = 0.0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * k + *it;
        return acc;
    }

    Poly derivative() const {
        if (c_.size() <= 1) return Poly({0.0});
        std::vector<cplx> out(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i) out[i - 1] = c_[i] * static_cast<double>(i);
        return Poly(std::move(out));
    }

    // Removes trailing coefficients below rel * max_abs().
    Poly trimmed(double rel) const {
        const double thr = rel * max_abs();
        std::vector<cplx> c = c_;
        while (c.size() > 1 && std::abs(c.back()) <= thr) c.pop_back();
        return Poly(std::move(c));
    }

    friend Poly operator*(const Poly& x, const Poly& y) {
        if (x.c_.empty() || y.c_.empty()) return Poly();
        std::vector<cplx> out(x.c_.size() + y.c_.size() - 1, 0.0);
        for (std::size_t i = 0; i < x.c_.size(); ++i)
            for (std::size_t j = 0; j < y.c_.size(); ++j) out[i + j] += x.c_[i] * y.c_[j];
        return Poly(std::move(out));
    }
    friend Poly operator-(const Poly& x, const Poly& y) {
        std::vector<cplx> out(std::max(x.c_.size(), y.c_.size()), 0.0);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = x.coeff(static_cast<int>(i)) - y.coeff(static_cast<int>(i));
        return Poly(std::move(out));
    }
    friend Poly operator*(cplx z, const Poly& x) {
        std::vector<cplx> out = x.c_;
        for (cplx& v : out) v *= z;
        return Poly(std::move(out));
    }

private:
    std::vector<cplx> c_;
};

// n points rho * exp(2 pi i (j + offset) / n).
inline std::vector<cplx> circle_nodes(int n, double rho = 1.0, double offset = 0.5) {
    std::vector<cplx> z;
    z.reserve(n);
    for (int j = 0; j < n; ++j) z.push_back(std::polar(rho, 2.0 * std::numbers::pi * (j + offset) / n));
    return z;
}

namespace detail {

inline void check_distinct(const std::vector<cplx>& nodes) {
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (std::size_t j = i + 1; j < nodes.size(); ++j)
            if (std::abs(nodes[i] - nodes[j]) <= 1e-14 * (1.0 + std::abs(nodes[i])))
                throw Error(ErrorKind::DuplicateNodes, "interpolation nodes coincide");
}

// Least-squares fit of polynomial coefficients (columns of Y are independent
// right-hand sides); returns (degree_bound + 1) x cols coefficient matrix.
inline Mat fit_coefficients(const std::vector<cplx>& nodes, const Mat& Y, int degree_bound, double tol_interp) {
    const int n = static_cast<int>(nodes.size());
    if (n < degree_bound + 1)
        throw Error(ErrorKind::InconsistentSamples, "need at least degree_bound + 1 nodes");
    check_distinct(nodes);
    double rho = 0.0;
    for (cplx z : nodes) rho = std::max(rho, std::abs(z));
    if (rho == 0.0) rho = 1.0;
    Mat A(n, degree_bound + 1);
    for (int i = 0; i < n; ++i) {
        cplx w = 1.0;
        for (int j = 0; j <= degree_bound; ++j) {
            A(i, j) = w;
            w *= nodes[i] / rho;
        }
    }
    Mat C = A.colPivHouseholderQr().solve(Y);
    const double resid = (A * C - Y).cwiseAbs().maxCoeff();
    if (resid > tol_interp * (1.0 + Y.cwiseAbs().maxCoeff()))
        throw Error(ErrorKind::InconsistentSamples, "interpolation residual " + std::to_string(resid) + " exceeds tolerance");
    for (int j = 0; j <= degree_bound; ++j) C.row(j) /= std::pow(rho, j);
    return C;
}

} // namespace detail

// Entrywise polynomial interpolation of degree <= degree_bound. Extra nodes
// enter a least-squares fit whose residual is checked against tol.interp.
inline MatPoly interpolate_matpoly(const std::vector<cplx>& nodes, const std::vector<Mat>& values, int degree_bound,
                                   const Tolerances& tol = {}) {
    if (nodes.size() != values.size() || values.empty())
        throw Error(ErrorKind::InvalidInput, "nodes and values must have equal nonzero length");
    const int d = static_cast<int>(values[0].rows());
    Mat Y(static_cast<int>(nodes.size()), d * d);
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) Y(static_cast<int>(i), r * d + c) = values[i](r, c);
    const Mat C = detail::fit_coefficients(nodes, Y, degree_bound, tol.interp);
    std::vector<Mat> coeffs;
    for (int j = 0; j <= degree_bound; ++j) {
        Mat m(d, d);
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) m(r, c) = C(j, r * d + c);
        coeffs.push_back(m);
    }
    return MatPoly(d, 0, std::move(coeffs)).trimmed(tol.coeff);
}

inline Poly interpolate_poly(const std::vector<cplx>& nodes, const std::vector<cplx>& values, int degree_bound,
                             const Tolerances& tol = {}) {
    if (nodes.size() != values.size() || values.empty())
        throw Error(ErrorKind::InvalidInput, "nodes and values must have equal nonzero length");
    Mat Y(static_cast<int>(values.size()), 1);
    for (std::size_t i = 0; i < values.size(); ++i) Y(static_cast<int>(i), 0) = values[i];
    const Mat C = detail::fit_coefficients(nodes, Y, degree_bound, tol.interp);
    std::vector<cplx> c(C.rows());
    for (int j = 0; j < C.rows(); ++j) c[j] = C(j, 0);
    return Poly(std::move(c));
}

} // namespace resl
