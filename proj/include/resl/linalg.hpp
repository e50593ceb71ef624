// Small dense factorizations used across modules.
#pragma once

#include "resl/core.hpp"

namespace resl {

struct Polar {
    Mat unitary;   // W in M = W H
    Mat positive;  // H = (M^* M)^{1/2}
};

// Left polar factorization via the SVD M = U S V^*: W = U V^*, H = V S V^*.
inline Polar polar(const Mat& m) {
    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Mat& U = svd.matrixU();
    const Mat& V = svd.matrixV();
    Mat H = V * svd.singularValues().cast<cplx>().asDiagonal() * V.adjoint();
    return {U * V.adjoint(), 0.5 * (H + H.adjoint())};
}

struct QR {
    Mat q;
    Mat r;  // upper triangular with positive diagonal
};

inline QR qr_positive(const Mat& m) {
    Eigen::HouseholderQR<Mat> hqr(m);
    const int n = static_cast<int>(m.cols());
    Mat Q = hqr.householderQ() * Mat::Identity(m.rows(), n);
    Mat R = hqr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
    for (int i = 0; i < n; ++i) {
        const double a = std::abs(R(i, i));
        const cplx phase = a > 0.0 ? R(i, i) / a : cplx(1.0);
        R.row(i) *= std::conj(phase);
        Q.col(i) *= phase;
    }
    return {Q, R};
}

struct Kernels {
    Mat right;                 // orthonormal basis of Ker M
    Mat left;                  // orthonormal basis of Ker M^*
    Eigen::VectorXd singular;  // descending
    bool ambiguous = false;    // a singular value sits between the rank cut and 1e3 times it
};

// Numerical kernels with cut rel * max(sigma_max, scale). The scale floor
// matters when every singular value is small, e.g. a 1x1 matrix at a root.
// When dim > 0 the smallest dim singular directions are returned regardless
// of the cut.
inline Kernels kernels(const Mat& m, double rel, int dim = -1, double scale = 0.0) {
    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::VectorXd sv = svd.singularValues();
    const int n = static_cast<int>(sv.size());
    const double smax = std::max(n > 0 ? sv(0) : 0.0, scale);
    Kernels out;
    out.singular = sv;
    int r = dim;
    if (r < 0) {
        r = 0;
        for (int i = 0; i < n; ++i)
            if (sv(i) <= rel * smax) ++r;
        for (int i = 0; i < n; ++i)
            if (sv(i) > rel * smax && sv(i) <= 1e3 * rel * smax) out.ambiguous = true;
    }
    out.right = svd.matrixV().rightCols(r);
    out.left = svd.matrixU().rightCols(r);
    return out;
}

inline Mat hermitian_part(const Mat& m) { return 0.5 * (m + m.adjoint()); }

inline double min_hermitian_eigenvalue(const Mat& m) {
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(m), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

inline double max_abs(const Mat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

} // namespace resl
