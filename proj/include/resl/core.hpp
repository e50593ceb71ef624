// Core types for half-lattice block Jacobi operators with finitely supported
// perturbations: error kinds, tolerances, the perturbation triple (a, s, b),
// and the spectral variable maps k <-> lambda.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace resl {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

enum class ErrorKind {
    SingularCoefficient,
    AmbiguousOrder,
    EmptySupport,
    DivisionAtZero,
    OnCut,
    DuplicateNodes,
    InconsistentSamples,
    StructureViolation,
    DegreeMismatch,
    NonConvergence,
    ClassificationAnomaly,
    NotApplicable,
    NotAnEigenvalue,
    DegenerateKernel,
    SingularDerivativeBlock,
    AtPole,
    SingularDenominator,
    DegreeOverflow,
    OnRoot,
    MomentDegeneracy,
    RoundTripFailure,
    DegenerateClustering,
    AtEigenvalue,
    TrackingLoss,
    InvalidInput,
};

inline const char* error_name(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::SingularCoefficient: return "SingularCoefficient";
    case ErrorKind::AmbiguousOrder: return "AmbiguousOrder";
    case ErrorKind::EmptySupport: return "EmptySupport";
    case ErrorKind::DivisionAtZero: return "DivisionAtZero";
    case ErrorKind::OnCut: return "OnCut";
    case ErrorKind::DuplicateNodes: return "DuplicateNodes";
    case ErrorKind::InconsistentSamples: return "InconsistentSamples";
    case ErrorKind::StructureViolation: return "StructureViolation";
    case ErrorKind::DegreeMismatch: return "DegreeMismatch";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::ClassificationAnomaly: return "ClassificationAnomaly";
    case ErrorKind::NotApplicable: return "NotApplicable";
    case ErrorKind::NotAnEigenvalue: return "NotAnEigenvalue";
    case ErrorKind::DegenerateKernel: return "DegenerateKernel";
    case ErrorKind::SingularDerivativeBlock: return "SingularDerivativeBlock";
    case ErrorKind::AtPole: return "AtPole";
    case ErrorKind::SingularDenominator: return "SingularDenominator";
    case ErrorKind::DegreeOverflow: return "DegreeOverflow";
    case ErrorKind::OnRoot: return "OnRoot";
    case ErrorKind::MomentDegeneracy: return "MomentDegeneracy";
    case ErrorKind::RoundTripFailure: return "RoundTripFailure";
    case ErrorKind::DegenerateClustering: return "DegenerateClustering";
    case ErrorKind::AtEigenvalue: return "AtEigenvalue";
    case ErrorKind::TrackingLoss: return "TrackingLoss";
    case ErrorKind::InvalidInput: return "InvalidInput";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& detail)
        : std::runtime_error(std::string(error_name(kind)) + ": " + detail), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

struct Tolerances {
    double det = 1e-12;      // singularity threshold on |det|
    double coeff = 1e-12;    // relative trimming of polynomial coefficients
    double interp = 1e-9;    // interpolation residual
    double cluster = 1e-6;   // root clustering radius, scaled by 1 + |r|
    double band = 1e-8;      // virtual-state band around the unit circle
    double rank = 1e-8;      // numerical rank, relative to the largest singular value
    double inv = 1e-6;       // inverse-problem round trip
};

inline Mat identity(int d) { return Mat::Identity(d, d); }
inline Mat zeros(int d) { return Mat::Zero(d, d); }

inline cplx ipow(cplx z, int n) {
    if (n < 0) return 1.0 / ipow(z, -n);
    cplx r = 1.0;
    cplx b = z;
    while (n > 0) {
        if (n & 1) r *= b;
        b *= b;
        n >>= 1;
    }
    return r;
}

// lambda = k + 1/k
inline cplx lambda_of_k(cplx k) {
    if (k == cplx(0.0)) throw Error(ErrorKind::DivisionAtZero, "lambda_of_k at k = 0");
    return k + 1.0 / k;
}

// Branch of the inverse map with |k| < 1; k ~ 1/lambda at infinity.
inline cplx k_of_lambda(cplx lambda, double tol = 1e-12) {
    if (std::abs(lambda.imag()) <= tol && std::abs(lambda.real()) <= 2.0 + tol)
        throw Error(ErrorKind::OnCut, "lambda lies on [-2, 2]");
    const cplx root = std::sqrt(lambda * lambda / 4.0 - 1.0);
    const cplx k1 = lambda / 2.0 - root;
    const cplx k2 = lambda / 2.0 + root;
    // k1 * k2 = 1; take the smaller one, and use the product to avoid cancellation.
    return std::abs(k1) < std::abs(k2) ? 1.0 / k2 : 1.0 / k1;
}

enum class ClassTag { complex, selfadjoint, triangular };

inline const char* class_name(ClassTag t) {
    switch (t) {
    case ClassTag::complex: return "complex";
    case ClassTag::selfadjoint: return "selfadjoint";
    case ClassTag::triangular: return "triangular";
    }
    return "complex";
}

// Coefficients are stored for sites 1..p at vector index x - 1.
struct Perturbation {
    int d = 0;
    int p = 0;
    int q = 0;
    std::vector<Mat> a, s, b;
    ClassTag tag = ClassTag::complex;

    // a_0 = s_0 = 1 and a_x = s_x = 1, b_x = 0 beyond the support.
    Mat a_at(int x) const { return (x >= 1 && x <= p) ? a[x - 1] : identity(d); }
    Mat s_at(int x) const { return (x >= 1 && x <= p) ? s[x - 1] : identity(d); }
    Mat b_at(int x) const { return (x >= 1 && x <= p) ? b[x - 1] : zeros(d); }
    bool is_selfadjoint_operator() const { return tag != ClassTag::complex; }
};

namespace detail {

inline double scale_of(const Mat& m) { return std::max(1.0, m.cwiseAbs().maxCoeff()); }

inline bool near(const Mat& x, const Mat& y, double tol) {
    return (x - y).cwiseAbs().maxCoeff() <= tol * std::max({1.0, scale_of(x), scale_of(y)});
}

inline bool is_hermitian(const Mat& m, double tol) { return near(m, m.adjoint(), tol); }

inline bool is_positive_definite(const Mat& m, double tol) {
    if (!is_hermitian(m, tol)) return false;
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() > tol * scale_of(m);
}

inline bool is_upper_triangular_positive(const Mat& m, double tol) {
    const double sc = scale_of(m);
    for (int i = 0; i < m.rows(); ++i) {
        if (std::abs(m(i, i).imag()) > tol * sc || m(i, i).real() <= tol * sc) return false;
        for (int j = 0; j < i; ++j)
            if (std::abs(m(i, j)) > tol * sc) return false;
    }
    return true;
}

} // namespace detail

// Infers q and the class tag; rejects singular or ambiguous inputs.
inline Perturbation validate_perturbation(int d, std::vector<Mat> a, std::vector<Mat> s, std::vector<Mat> b,
                                          const Tolerances& tol = {}) {
    if (a.empty() || b.empty()) throw Error(ErrorKind::EmptySupport, "coefficient sequences are empty");
    if (s.empty()) s = a;
    const std::size_t p = a.size();
    if (s.size() != p || b.size() != p)
        throw Error(ErrorKind::InvalidInput, "sequences a, s, b must have equal length");
    if (d < 1) throw Error(ErrorKind::InvalidInput, "dimension must be positive");
    for (const auto* seq : {&a, &s, &b})
        for (const Mat& m : *seq)
            if (m.rows() != d || m.cols() != d)
                throw Error(ErrorKind::InvalidInput, "coefficient is not " + std::to_string(d) + "x" + std::to_string(d));

    for (std::size_t x = 0; x < p; ++x) {
        if (std::abs(a[x].determinant()) <= tol.det)
            throw Error(ErrorKind::SingularCoefficient, "a_" + std::to_string(x + 1) + " is singular");
        if (std::abs(s[x].determinant()) <= tol.det)
            throw Error(ErrorKind::SingularCoefficient, "s_" + std::to_string(x + 1) + " is singular");
    }

    Perturbation V;
    V.d = d;
    V.p = static_cast<int>(p);
    const Mat I = identity(d);
    const Mat& ap = a.back();
    const Mat& sp = s.back();
    const Mat& bp = b.back();
    const bool unit_tail = (ap - I).cwiseAbs().maxCoeff() <= tol.coeff && (sp - I).cwiseAbs().maxCoeff() <= tol.coeff;
    if (unit_tail && std::abs(bp.determinant()) > tol.det) {
        V.q = 2 * V.p - 1;
    } else if (std::abs((I - sp * ap).determinant()) > tol.det) {
        V.q = 2 * V.p;
    } else {
        throw Error(ErrorKind::AmbiguousOrder, "neither det b_p != 0 with a_p = s_p = 1 nor det(1 - s_p a_p) != 0 holds");
    }
    // The exact identity tail is part of the odd-order pattern.
    if (V.q == 2 * V.p - 1) {
        a.back() = I;
        s.back() = I;
    }

    const double ctol = 1e-12;
    bool sa = true, tri = true;
    for (std::size_t x = 0; x < p; ++x) {
        const bool bh = detail::is_hermitian(b[x], ctol);
        sa = sa && bh && detail::near(s[x], a[x], ctol) && detail::is_positive_definite(a[x], ctol);
        tri = tri && bh && detail::near(s[x], a[x].adjoint(), ctol) && detail::is_upper_triangular_positive(a[x], ctol);
    }
    V.tag = sa ? ClassTag::selfadjoint : (tri ? ClassTag::triangular : ClassTag::complex);
    V.a = std::move(a);
    V.s = std::move(s);
    V.b = std::move(b);
    return V;
}

inline Perturbation validate_perturbation(int d, std::vector<Mat> a, std::vector<Mat> b, const Tolerances& tol = {}) {
    return validate_perturbation(d, std::move(a), {}, std::move(b), tol);
}

} // namespace resl
