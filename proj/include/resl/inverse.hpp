// Inverse problems: admissibility of scalar resonance vectors, the finite
// block Jacobi spectral-data map and its inverse by block Lanczos, and the
// reconstruction of a perturbation from S-matrix or Jost-matrix samples.
#pragma once

#include "resl/scattering.hpp"

namespace resl {

// ---------------------------------------------------------------------------
// Scalar resonance vectors

struct ResonanceVerdict {
    bool ordering = false;        // modulus/argument order and real F
    bool disc_roots = false;      // zeros in the closed disc real, simple, F(1/k_j) != 0
    bool interlacing = false;     // parity counts on the reflected intervals
    bool constant_term = false;   // F(0) outside [0, 1] when q is even
    std::vector<std::string> notes;
    bool admissible() const { return ordering && disc_roots && interlacing && constant_term; }
};

namespace detail {

// Number of zeros of F (given through its roots) that are real and lie in (lo, hi).
inline int real_zeros_in(const std::vector<cplx>& r, double lo, double hi, double tol) {
    int n = 0;
    for (cplx z : r)
        if (std::abs(z.imag()) <= tol * (1.0 + std::abs(z)) && z.real() > lo && z.real() < hi) ++n;
    return n;
}

} // namespace detail

// The reflected intervals run between 1/k_j and 1/k_{j-1} for consecutive
// eigenvalue parameters on the same side of zero; (1, 1/k_max) and
// (1/k_min, -1) must carry an even number of zeros.
inline ResonanceVerdict validate_resonance_vector(const std::vector<cplx>& r, double tol = 1e-8) {
    ResonanceVerdict v;
    const int q = static_cast<int>(r.size());
    if (q == 0) {
        v.notes.push_back("empty vector");
        return v;
    }

    v.ordering = true;
    for (cplx z : r)
        if (z == cplx(0.0)) v.ordering = false;
    for (int j = 0; j + 1 < q && v.ordering; ++j) {
        const double m0 = std::abs(r[j]), m1 = std::abs(r[j + 1]);
        if (m0 > m1 + tol * (1.0 + m1)) v.ordering = false;
        else if (std::abs(m0 - m1) <= tol * (1.0 + m1) && detail::arg_2pi(r[j]) > detail::arg_2pi(r[j + 1]) + tol)
            v.ordering = false;
    }
    const Poly F = Poly::from_roots(r);
    for (cplx c : F.coeffs())
        if (std::abs(c.imag()) > tol * (1.0 + F.max_abs())) v.ordering = false;
    if (!v.ordering) v.notes.push_back("ordering or reality of F fails");

    // Disc zeros.
    std::vector<double> kpos, kneg;
    v.disc_roots = true;
    for (int j = 0; j < q; ++j) {
        if (std::abs(r[j]) > 1.0 + tol) continue;
        if (std::abs(r[j].imag()) > tol * (1.0 + std::abs(r[j]))) {
            v.disc_roots = false;
            v.notes.push_back("non-real zero in the closed disc");
            continue;
        }
        for (int i = 0; i < q; ++i)
            if (i != j && std::abs(r[i] - r[j]) <= tol * (1.0 + std::abs(r[j]))) {
                v.disc_roots = false;
                v.notes.push_back("multiple zero in the closed disc");
            }
        const double k = r[j].real();
        if (std::abs(std::abs(k) - 1.0) <= tol) continue;  // virtual state
        if (std::abs(F.eval(1.0 / k)) <= tol * std::max(1.0, F.max_abs())) {
            v.disc_roots = false;
            v.notes.push_back("F(1/k_j) = 0");
        }
        (k > 0 ? kpos : kneg).push_back(k);
    }
    std::sort(kpos.begin(), kpos.end());
    std::sort(kneg.begin(), kneg.end(), std::greater<>());

    // Interlacing.
    v.interlacing = true;
    const auto odd_between = [&](double lo, double hi) {
        const int n = detail::real_zeros_in(r, lo, hi, tol);
        return n % 2 == 1;
    };
    const auto even_between = [&](double lo, double hi) {
        const int n = detail::real_zeros_in(r, lo, hi, tol);
        return n % 2 == 0;
    };
    for (std::size_t j = 1; j < kpos.size(); ++j)
        if (!odd_between(1.0 / kpos[j], 1.0 / kpos[j - 1])) v.interlacing = false;
    for (std::size_t j = 1; j < kneg.size(); ++j)
        if (!odd_between(1.0 / kneg[j - 1], 1.0 / kneg[j])) v.interlacing = false;
    if (!kpos.empty() && !even_between(1.0, 1.0 / kpos.back())) v.interlacing = false;
    if (!kneg.empty() && !even_between(1.0 / kneg.back(), -1.0)) v.interlacing = false;
    if (!v.interlacing) v.notes.push_back("interlacing counts fail");

    v.constant_term = true;
    if (q % 2 == 0) {
        const cplx f0 = F.coeff(0);
        if (std::abs(f0.imag()) > tol || (f0.real() >= -tol && f0.real() <= 1.0 + tol)) {
            v.constant_term = false;
            v.notes.push_back("F(0) lies in [0, 1]");
        }
    }
    return v;
}

// ---------------------------------------------------------------------------
// Finite block Jacobi matrices

// Sites 1..p with Hermitian b_x and positive couplings a_1..a_{p-1}; a_0 = a_p = 1.
struct FiniteJacobi {
    int d = 0;
    int p = 0;
    std::vector<Mat> a;  // a_1 .. a_{p-1}
    std::vector<Mat> b;  // b_1 .. b_p

    Mat a_at(int x) const { return (x >= 1 && x < p) ? a[x - 1] : identity(d); }

    Mat dense() const {
        Mat H = Mat::Zero(p * d, p * d);
        for (int x = 1; x <= p; ++x) {
            const int i = (x - 1) * d;
            H.block(i, i, d, d) = b[x - 1];
            if (x < p) {
                H.block(i + d, i, d, d) = a[x - 1];
                H.block(i, i + d, d, d) = a[x - 1].adjoint();
            }
        }
        return H;
    }

    // Sites reversed: a'_x = a_{p-x}, b'_x = b_{p+1-x}.
    FiniteJacobi reflected() const {
        FiniteJacobi r{d, p, {}, {}};
        for (int x = 1; x < p; ++x) r.a.push_back(a[p - x - 1]);
        for (int x = 1; x <= p; ++x) r.b.push_back(b[p - x]);
        return r;
    }
};

// phi_0 = 0, phi_1 = 1, a_x phi_{x+1} = (lambda - b_x) phi_x - a_{x-1} phi_{x-1}.
inline std::vector<Mat> finite_phi(const FiniteJacobi& Jp, cplx lambda) {
    const int d = Jp.d;
    std::vector<Mat> phi{zeros(d), identity(d)};
    for (int x = 1; x <= Jp.p; ++x) {
        const Mat rhs = (lambda * identity(d) - Jp.b[x - 1]) * phi[x] - Jp.a_at(x - 1) * phi[x - 1];
        phi.push_back(Jp.a_at(x).partialPivLu().solve(rhs));
    }
    return phi;
}

// chi_{p+1} = 0, chi_p = 1, a_{x-1} chi_{x-1} = (lambda - b_x) chi_x - a_x chi_{x+1}.
inline std::vector<Mat> finite_chi(const FiniteJacobi& Jp, cplx lambda) {
    const int d = Jp.d;
    const int p = Jp.p;
    std::vector<Mat> chi(p + 2, zeros(d));
    chi[p] = identity(d);
    for (int x = p; x >= 1; --x) {
        const Mat rhs = (lambda * identity(d) - Jp.b[x - 1]) * chi[x] - Jp.a_at(x) * chi[x + 1];
        chi[x - 1] = Jp.a_at(x - 1).partialPivLu().solve(rhs);
    }
    return chi;
}

// M(lambda) = -chi_1 chi_0^{-1}, the (1,1) block of (J - lambda)^{-1}.
inline Mat weyl_function_finite(const FiniteJacobi& Jp, cplx lambda) {
    const std::vector<Mat> chi = finite_chi(Jp, lambda);
    detail::require_nonsingular(chi[0], ErrorKind::AtEigenvalue, "lambda is an eigenvalue");
    return -chi[0].transpose().partialPivLu().solve(chi[1].transpose()).transpose();
}

struct SpectralData {
    int d = 0;
    int m = 0;
    std::vector<double> mu;  // increasing
    std::vector<int> rank;   // d_j
    std::vector<Mat> E;      // d x d_j orthonormal basis of Ker phi_{p+1}(mu_j)
    std::vector<Mat> P;      // E E^*
    std::vector<Mat> g;      // d_j x d_j, in the basis E
    std::vector<Mat> B;      // E g^{-1} E^*

    Mat weyl(cplx lambda) const {
        Mat M = zeros(d);
        for (int j = 0; j < m; ++j) M -= B[j] / (lambda - mu[j]);
        return M;
    }
    Mat residue_sum() const {
        Mat s = zeros(d);
        for (const Mat& x : B) s += x;
        return s;
    }
};

namespace detail {

struct Cluster {
    double center;
    std::vector<int> members;
};

// Groups sorted real values; gaps in the band (tight, loose] are ambiguous.
inline std::vector<Cluster> cluster_sorted(const std::vector<double>& v, double tight, double loose) {
    std::vector<Cluster> out;
    for (int i = 0; i < static_cast<int>(v.size()); ++i) {
        const double scale = 1.0 + std::abs(v[i]);
        if (!out.empty()) {
            const double gap = v[i] - v[out.back().members.back()];
            if (gap <= tight * scale) {
                out.back().members.push_back(i);
                continue;
            }
            if (gap <= loose * scale)
                throw Error(ErrorKind::DegenerateClustering, "eigenvalue gap " + std::to_string(gap) + " is ambiguous");
        }
        out.push_back({v[i], {i}});
    }
    for (Cluster& c : out) {
        double s = 0.0;
        for (int i : c.members) s += v[i];
        c.center = s / static_cast<double>(c.members.size());
    }
    return out;
}

} // namespace detail

inline SpectralData spectral_data_forward(const FiniteJacobi& Jp, double tight = 1e-10, double loose = 1e-7) {
    const int d = Jp.d;
    const Mat H = Jp.dense();
    if (!detail::is_hermitian(H, 1e-12)) throw Error(ErrorKind::InvalidInput, "finite Jacobi matrix is not Hermitian");
    for (const Mat& a : Jp.a)
        if (!detail::is_positive_definite(a, 1e-12)) throw Error(ErrorKind::InvalidInput, "a_x must be positive definite");
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(H));
    std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    const auto clusters = detail::cluster_sorted(ev, tight, loose);

    SpectralData sd;
    sd.d = d;
    for (const auto& c : clusters) {
        const int mj = static_cast<int>(c.members.size());
        Mat first(d, mj);
        for (int i = 0; i < mj; ++i) first.col(i) = es.eigenvectors().col(c.members[i]).head(d);
        if (mj > d) throw Error(ErrorKind::DegenerateClustering, "eigenvalue multiplicity exceeds d");
        Eigen::JacobiSVD<Mat> svd(first, Eigen::ComputeThinU);
        const Mat E = svd.matrixU().leftCols(mj);
        const std::vector<Mat> phi = finite_phi(Jp, c.center);
        Mat G = zeros(d);
        for (int x = 1; x <= Jp.p; ++x) G += phi[x].adjoint() * phi[x];
        const Mat g = hermitian_part(E.adjoint() * G * E);
        sd.mu.push_back(c.center);
        sd.rank.push_back(mj);
        sd.E.push_back(E);
        sd.P.push_back(E * E.adjoint());
        sd.g.push_back(g);
        sd.B.push_back(E * g.inverse() * E.adjoint());
    }
    sd.m = static_cast<int>(sd.mu.size());
    return sd;
}

// Block Hankel matrix [sum_j mu_j^{i+l} P_j], i, l = 0..p-1.
inline Mat moment_matrix(const SpectralData& sd, int p) {
    const int d = sd.d;
    Mat T = Mat::Zero(p * d, p * d);
    for (int i = 0; i < p; ++i)
        for (int l = 0; l < p; ++l)
            for (int j = 0; j < sd.m; ++j) T.block(i * d, l * d, d, d) += std::pow(sd.mu[j], i + l) * sd.P[j];
    return T;
}

struct LanczosResult {
    std::vector<Mat> diag;  // b_1 .. b_n
    std::vector<Mat> off;   // a_1 .. a_{n-1}, positive definite
};

// Block Lanczos on diag(values) started from the orthonormal block X1, with full
// reorthogonalization and polar normalization of each new block.
inline LanczosResult block_lanczos(const Eigen::VectorXd& values, const Mat& X1, int blocks, double breakdown = 1e-10) {
    const int n = static_cast<int>(values.size());
    const int d = static_cast<int>(X1.cols());
    if (n != blocks * d) throw Error(ErrorKind::MomentDegeneracy, "measure support does not match the block count");
    const auto D = values.cast<cplx>().asDiagonal();
    Mat Q = Mat::Zero(n, blocks * d);
    Q.leftCols(d) = X1;
    LanczosResult out;
    for (int i = 0; i < blocks; ++i) {
        const Mat Qi = Q.middleCols(i * d, d);
        Mat R = D * Qi;
        const Mat A = Qi.adjoint() * R;
        out.diag.push_back(hermitian_part(A));
        if (i + 1 == blocks) break;
        for (int pass = 0; pass < 2; ++pass) R -= Q.leftCols((i + 1) * d) * (Q.leftCols((i + 1) * d).adjoint() * R);
        Eigen::JacobiSVD<Mat> svd(R, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const Eigen::VectorXd s = svd.singularValues();
        if (s.minCoeff() < breakdown * std::max(1.0, values.cwiseAbs().maxCoeff()))
            throw Error(ErrorKind::MomentDegeneracy, "block orthogonalization breaks down");
        const Mat W = svd.matrixV();
        Q.middleCols((i + 1) * d, d) = svd.matrixU() * W.adjoint();
        out.off.push_back(hermitian_part(W * s.cast<cplx>().asDiagonal() * W.adjoint()));
    }
    return out;
}

namespace detail {

// Rank-m factor L with L L^* = B for Hermitian positive semidefinite B.
inline Mat psd_factor(const Mat& B, int m) {
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(B));
    const Eigen::VectorXd ev = es.eigenvalues().tail(m);
    if (ev.minCoeff() <= 0.0) throw Error(ErrorKind::MomentDegeneracy, "residue is not positive on its range");
    return es.eigenvectors().rightCols(m) * ev.cwiseSqrt().cast<cplx>().asDiagonal();
}

inline LanczosResult lanczos_from_measure(const std::vector<double>& nodes, const std::vector<Mat>& weights,
                                          const std::vector<int>& ranks, int d, int blocks) {
    int n = 0;
    for (int r : ranks) n += r;
    Eigen::VectorXd D(n);
    Mat X1(n, d);
    int row = 0;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        const Mat L = psd_factor(weights[j], ranks[j]);
        for (int i = 0; i < ranks[j]; ++i) {
            D(row + i) = nodes[j];
        }
        X1.middleRows(row, ranks[j]) = L.adjoint();
        row += ranks[j];
    }
    return block_lanczos(D, X1, blocks);
}

} // namespace detail

// Recovers the finite Jacobi matrix from its spectral data.
inline FiniteJacobi finite_inverse(const SpectralData& sd) {
    int total = 0;
    for (int r : sd.rank) total += r;
    if (total % sd.d != 0) throw Error(ErrorKind::MomentDegeneracy, "sum of ranks is not a multiple of d");
    const Mat defect = sd.residue_sum() - identity(sd.d);
    if (max_abs(defect) > 1e-8) throw Error(ErrorKind::MomentDegeneracy, "residues do not sum to the identity");
    const int p = total / sd.d;
    const LanczosResult L = detail::lanczos_from_measure(sd.mu, sd.B, sd.rank, sd.d, p);
    return FiniteJacobi{sd.d, p, L.off, L.diag};
}

// ---------------------------------------------------------------------------
// Reconstruction from S-matrix samples

struct SSample {
    cplx k;
    Mat S;
};

// n samples on the lower half circle, angles -pi (j + 1/2) / n; the values of
// lambda are pairwise distinct.
inline std::vector<SSample> smatrix_samples(const JostData& J, int n) {
    std::vector<SSample> out;
    for (int j = 0; j < n; ++j) {
        const cplx k = std::polar(1.0, -std::numbers::pi * (j + 0.5) / n);
        out.push_back({k, s_matrix(J, k)});
    }
    return out;
}

struct InverseOptions {
    int q = 0;              // 0: infer from the samples
    double fit_tol = 1e-7;  // relative residual of the rational fit
    double tol_inv = 1e-6;  // round trip on the samples
    double structure_tol = 1e-6;  // real poles, residue sum, vanishing b beyond the support
    int max_p = 12;
};

struct InverseResult {
    Perturbation V;
    double fit_residual = 0.0;
    double round_trip = 0.0;  // max |S_V(k_i) - S_i|
    std::vector<double> poles;  // eigenvalues of the reflected finite matrix
};

namespace detail {

struct RationalFit {
    std::vector<Mat> Qc;  // Q(mu) = mu^N + sum_{n<N} Qc[n] mu^n
    std::vector<Mat> Pc;  // P(mu) = sum_{n<N} Pc[n] mu^n
    double residual = 0.0;

    Mat Q(cplx mu) const {
        const int d = static_cast<int>(Qc[0].rows());
        Mat acc = identity(d);
        for (int n = static_cast<int>(Qc.size()) - 1; n >= 0; --n) acc = acc * mu + Qc[n];
        return acc;
    }
    Mat dQ(cplx mu) const {
        const int N = static_cast<int>(Qc.size());
        const int d = static_cast<int>(Qc[0].rows());
        Mat acc = static_cast<double>(N) * identity(d);
        for (int n = N - 1; n >= 1; --n) acc = acc * mu + static_cast<double>(n) * Qc[n];
        return acc;
    }
    Mat P(cplx mu) const {
        const int d = static_cast<int>(Pc[0].rows());
        Mat acc = zeros(d);
        for (int n = static_cast<int>(Pc.size()) - 1; n >= 0; --n) acc = acc * mu + Pc[n];
        return acc;
    }
};

// Fits M(mu) Q(mu) = P(mu) in the least-squares sense, mu = lambda / 2.
inline RationalFit fit_weyl(const std::vector<cplx>& mus, const std::vector<Mat>& Ms, int N) {
    const int d = static_cast<int>(Ms[0].rows());
    const int n = static_cast<int>(mus.size());
    Mat A = Mat::Zero(n * d, 2 * N * d);
    Mat R = Mat::Zero(n * d, d);
    for (int i = 0; i < n; ++i) {
        const double w = 1.0 / std::max(1.0, max_abs(Ms[i]));
        cplx pw = 1.0;
        for (int k = 0; k < N; ++k) {
            A.block(i * d, k * d, d, d) = w * pw * Ms[i];
            A.block(i * d, (N + k) * d, d, d) = -w * pw * identity(d);
            pw *= mus[i];
        }
        R.middleRows(i * d, d) = -w * pw * Ms[i];
    }
    const Mat X = A.colPivHouseholderQr().solve(R);
    RationalFit f;
    f.residual = max_abs(A * X - R) / std::max(1.0, max_abs(R));
    for (int k = 0; k < N; ++k) {
        f.Qc.push_back(X.middleRows(k * d, d));
        f.Pc.push_back(X.middleRows((N + k) * d, d));
    }
    return f;
}

inline std::vector<cplx> fit_poles(const RationalFit& f) {
    const int N = static_cast<int>(f.Qc.size());
    const int d = static_cast<int>(f.Qc[0].rows());
    Mat C = Mat::Zero(N * d, N * d);
    for (int i = 0; i + 1 < N; ++i) C.block(i * d, (i + 1) * d, d, d) = identity(d);
    for (int i = 0; i < N; ++i) C.block((N - 1) * d, i * d, d, d) = -f.Qc[i];
    Eigen::ComplexEigenSolver<Mat> es(C, false);
    return std::vector<cplx>(es.eigenvalues().data(), es.eigenvalues().data() + N * d);
}

inline double max_sample_defect(const Perturbation& V, const std::vector<SSample>& samples) {
    const JostData J = build_jost(V);
    double err = 0.0;
    for (const SSample& s : samples) err = std::max(err, max_abs(s_matrix(J, s.k) - s.S));
    return err;
}

inline InverseResult reconstruct_with_p(const std::vector<SSample>& samples, int d, int p, int q_expected,
                                        const InverseOptions& opt) {
    const int N = p + 1;
    std::vector<cplx> mus;
    std::vector<Mat> Ms;
    for (const SSample& s : samples) {
        if (s.S.rows() != d || s.S.cols() != d) throw Error(ErrorKind::InvalidInput, "sample matrix has the wrong size");
        Ms.push_back(weyl_from_smatrix(s.S, s.k, identity(d), p).Mp1);
        mus.push_back(0.5 * lambda_of_k(s.k));
    }
    int distinct = 0;
    for (std::size_t i = 0; i < mus.size(); ++i) {
        bool fresh = true;
        for (std::size_t j = 0; j < i; ++j)
            if (std::abs(mus[i] - mus[j]) <= 1e-10) fresh = false;
        distinct += fresh;
    }
    if (distinct < 2 * N) throw Error(ErrorKind::InconsistentSamples, "too few distinct values of lambda");

    const RationalFit fit = fit_weyl(mus, Ms, N);
    if (fit.residual > opt.fit_tol)
        throw Error(ErrorKind::InconsistentSamples, "rational fit residual " + std::to_string(fit.residual));

    std::vector<cplx> raw = fit_poles(fit);
    for (cplx z : raw)
        if (std::abs(z.imag()) > opt.structure_tol * (1.0 + std::abs(z)))
            throw Error(ErrorKind::InconsistentSamples, "Weyl function has a non-real pole");
    std::vector<double> re;
    for (cplx z : raw) re.push_back(z.real());
    std::sort(re.begin(), re.end());
    const auto clusters = cluster_sorted(re, 1e-7, 0.0);

    std::vector<double> nodes;
    std::vector<Mat> weights;
    std::vector<int> ranks;
    Mat total = zeros(d);
    for (const auto& c : clusters) {
        const int m = static_cast<int>(c.members.size());
        if (m > d) throw Error(ErrorKind::MomentDegeneracy, "pole multiplicity exceeds d");
        const Kernels ker = kernels(fit.Q(c.center), 0.0, m);
        const Mat u = ker.left.adjoint() * fit.dQ(c.center) * ker.right;
        const Mat B = hermitian_part(2.0 * fit.P(c.center) * ker.right * u.inverse() * ker.left.adjoint());
        nodes.push_back(2.0 * c.center);
        weights.push_back(B);
        ranks.push_back(m);
        total += B;
    }
    if (max_abs(total - identity(d)) > opt.structure_tol)
        throw Error(ErrorKind::InconsistentSamples, "residues of the Weyl function do not sum to the identity");

    const LanczosResult L = lanczos_from_measure(nodes, weights, ranks, d, N);
    // Reflected matrix: b'_1 = b_{p+1} = 0, a'_i = a_{N-i}, b'_i = b_{N+1-i}.
    if (max_abs(L.diag[0]) > opt.structure_tol)
        throw Error(ErrorKind::InconsistentSamples, "recovered coefficient beyond the support does not vanish");
    std::vector<Mat> a(p), b(p);
    for (int x = 1; x <= p; ++x) {
        a[x - 1] = L.off[N - x - 1];
        b[x - 1] = L.diag[N - x];
    }
    if (max_abs(a[p - 1] - identity(d)) <= opt.structure_tol && std::abs(b[p - 1].determinant()) > 1e-6) a[p - 1] = identity(d);

    InverseResult res;
    res.V = validate_perturbation(d, a, b);
    if (q_expected > 0 && res.V.q != q_expected)
        throw Error(ErrorKind::InconsistentSamples, "recovered order " + std::to_string(res.V.q) + " differs from " +
                                                        std::to_string(q_expected));
    res.fit_residual = fit.residual;
    res.poles = nodes;
    res.round_trip = max_sample_defect(res.V, samples);
    if (res.round_trip > opt.tol_inv)
        throw Error(ErrorKind::RoundTripFailure, "S-matrix round trip defect " + std::to_string(res.round_trip));
    return res;
}

} // namespace detail

inline InverseResult reconstruct_from_smatrix(const std::vector<SSample>& samples, int d, const InverseOptions& opt = {}) {
    if (samples.empty()) throw Error(ErrorKind::InconsistentSamples, "no samples");
    for (const SSample& s : samples)
        if (std::abs(std::abs(s.k) - 1.0) > 1e-9) throw Error(ErrorKind::InvalidInput, "sample points must lie on the unit circle");
    if (opt.q > 0) {
        if (static_cast<int>(samples.size()) < 2 * opt.q + 2)
            throw Error(ErrorKind::InconsistentSamples, "need at least 2q + 2 samples");
        return detail::reconstruct_with_p(samples, d, (opt.q + 1) / 2, opt.q, opt);
    }
    for (int p = 1; p <= opt.max_p && 2 * (p + 1) <= static_cast<int>(samples.size()); ++p) {
        try {
            return detail::reconstruct_with_p(samples, d, p, 0, opt);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::InconsistentSamples && e.kind() != ErrorKind::MomentDegeneracy) throw;
        }
    }
    throw Error(ErrorKind::InconsistentSamples, "no support length is consistent with the samples");
}

// Interpolates psi from q + 1 or more values, samples S on the lower half circle,
// and reconstructs from those.
inline InverseResult reconstruct_from_jost_samples(const std::vector<cplx>& nodes, const std::vector<Mat>& values, int q,
                                                   const InverseOptions& opt = {}) {
    if (q < 1) throw Error(ErrorKind::InvalidInput, "q must be positive");
    if (static_cast<int>(nodes.size()) < q + 1) throw Error(ErrorKind::InconsistentSamples, "need q + 1 Jost samples");
    const MatPoly psi = interpolate_matpoly(nodes, values, q);
    if (psi.degree() != q) throw Error(ErrorKind::InconsistentSamples, "interpolated Jost matrix has the wrong degree");
    const int n = 2 * q + 4;
    std::vector<SSample> samples;
    for (int j = 0; j < n; ++j) {
        const cplx k = std::polar(1.0, -std::numbers::pi * (j + 0.5) / n);
        const Mat f = psi.eval(k);
        detail::require_nonsingular(f, ErrorKind::InconsistentSamples, "interpolated Jost matrix is singular on the circle");
        samples.push_back({k, f.partialPivLu().solve(psi.eval(1.0 / k))});
    }
    InverseOptions o = opt;
    o.q = q;
    InverseResult res = reconstruct_from_smatrix(samples, psi.dim(), o);
    const JostData J = build_jost(res.V);
    double err = 0.0, scale = 1.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        err = std::max(err, max_abs(J.psi().eval(nodes[i]) - values[i]));
        scale = std::max(scale, max_abs(values[i]));
    }
    res.round_trip = std::max(res.round_trip, err / scale);
    if (res.round_trip > opt.tol_inv)
        throw Error(ErrorKind::RoundTripFailure, "Jost samples are not reproduced: " + std::to_string(err / scale));
    return res;
}

} // namespace resl
