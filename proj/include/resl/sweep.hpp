// Escaping roots under a small-parameter family: a_p = 1 + eps a' (even order)
// or b_p = eps b' (odd order). The d largest zeros behave like tau / eps.
#pragma once

#include "resl/spectra.hpp"

#include <future>

namespace resl {

struct SweepSetup {
    Perturbation base;  // self-adjoint; a_p (and b_p for odd order) are overwritten, s = a
    Mat prime;          // a' or b'
    bool even = true;   // q = 2p with a_p = 1 + eps a', else q = 2p - 1 with b_p = eps b'
};

struct SweepResult {
    std::vector<double> eps;
    std::vector<std::vector<cplx>> k;     // [eps index][root index], tracked
    std::vector<cplx> t;                  // zeros of the limiting determinant
    std::vector<cplx> tau;                // 1 / t
    std::vector<std::vector<double>> err; // [root][eps] |eps k - tau|
    std::vector<cplx> tau_hat;            // extrapolated limits
    std::vector<double> slope;            // log-log slope of err against eps; inf when exact
};

inline Perturbation sweep_member(const SweepSetup& s, double eps) {
    const int d = s.base.d;
    const int p = s.base.p;
    std::vector<Mat> a = s.base.a, b = s.base.b;
    if (s.even) {
        a[p - 1] = identity(d) + eps * s.prime;
    } else {
        a[p - 1] = identity(d);
        b[p - 1] = eps * s.prime;
    }
    return validate_perturbation(d, a, b);
}

// Zeros t of det(2a' + t b_p) (even order) or det(-b' + t (1 - a_{p-1} s_{p-1})) (odd order),
// as eigenvalues of the pencil.
inline std::vector<cplx> sweep_targets(const SweepSetup& s) {
    const Perturbation& V = s.base;
    const int d = V.d;
    const int p = V.p;
    Mat A, B;
    if (s.even) {
        A = 2.0 * s.prime;
        B = V.b_at(p);
    } else {
        A = -s.prime;
        B = p >= 2 ? Mat(identity(d) - V.a_at(p - 1) * V.s_at(p - 1)) : identity(d);
    }
    // A + t B = 0  <=>  B^{-1} A x = -t x
    if (std::abs(B.determinant()) <= 1e-12) throw Error(ErrorKind::NotApplicable, "limiting pencil is singular");
    Eigen::ComplexEigenSolver<Mat> es(B.partialPivLu().solve(A), false);
    std::vector<cplx> t;
    for (int i = 0; i < d; ++i) t.push_back(-es.eigenvalues()(i));
    std::sort(t.begin(), t.end(), [](cplx x, cplx y) { return x.real() < y.real(); });
    return t;
}

namespace detail {

inline std::vector<cplx> largest_roots(const Perturbation& V, int n) {
    const JostData J = build_jost(V);
    const Poly g = jost_determinant(J);
    std::vector<cplx> z = expand_roots(jost_roots(J, g));
    std::sort(z.begin(), z.end(), [](cplx x, cplx y) { return std::abs(x) > std::abs(y); });
    z.resize(n);
    return z;
}

// Assigns each of prev to a distinct element of cur by nearest distance in the
// chart t = 1 / (eps k); the nearest match must be clearly separated.
inline std::vector<cplx> match(const std::vector<cplx>& prev, double eps_prev, const std::vector<cplx>& cur, double eps_cur) {
    const int n = static_cast<int>(prev.size());
    std::vector<cplx> out(n);
    std::vector<bool> used(n, false);
    for (int i = 0; i < n; ++i) {
        const cplx t0 = 1.0 / (eps_prev * prev[i]);
        int best = -1;
        double d1 = 1e300, d2 = 1e300;
        for (int j = 0; j < n; ++j) {
            if (used[j]) continue;
            const double dist = std::abs(1.0 / (eps_cur * cur[j]) - t0);
            if (dist < d1) {
                d2 = d1;
                d1 = dist;
                best = j;
            } else if (dist < d2) {
                d2 = dist;
            }
        }
        if (best < 0 || (d2 < 1e300 && d2 < 2.0 * d1 && d2 > 1e-9 * (1.0 + std::abs(t0))))
            throw Error(ErrorKind::TrackingLoss, "root correspondence is ambiguous between consecutive eps");
        used[best] = true;
        out[i] = cur[best];
    }
    return out;
}

inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(y[i] > 0.0)) continue;
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 2) return std::numeric_limits<double>::infinity();
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace detail

inline SweepResult run_sweep(const SweepSetup& setup, const std::vector<double>& eps) {
    if (eps.size() < 2) throw Error(ErrorKind::InvalidInput, "need at least two values of eps");
    for (std::size_t i = 0; i < eps.size(); ++i)
        if (!(eps[i] > 0.0) || (i > 0 && !(eps[i] < eps[i - 1])))
            throw Error(ErrorKind::InvalidInput, "eps list must be positive and strictly decreasing");
    const int d = setup.base.d;
    SweepResult r;
    r.eps = eps;
    r.t = sweep_targets(setup);
    for (cplx t : r.t) r.tau.push_back(1.0 / t);

    // Roots per eps are independent; matching runs afterwards in eps order.
    std::vector<std::future<std::vector<cplx>>> jobs;
    for (double e : eps)
        jobs.push_back(std::async(std::launch::async, [&setup, e, d] { return detail::largest_roots(sweep_member(setup, e), d); }));
    std::vector<std::vector<cplx>> raw;
    for (auto& j : jobs) raw.push_back(j.get());
    std::vector<cplx> cur = raw[0];
    r.k.push_back(cur);
    for (std::size_t i = 1; i < eps.size(); ++i) {
        cur = detail::match(cur, eps[i - 1], raw[i], eps[i]);
        r.k.push_back(cur);
    }

    // Tracked roots are labelled by the nearest target at the smallest eps.
    const std::size_t last = eps.size() - 1;
    std::vector<int> order(d, -1);
    std::vector<bool> taken(d, false);
    for (int n = 0; n < d; ++n) {
        int best = -1;
        double bd = 1e300;
        for (int j = 0; j < d; ++j) {
            if (taken[j]) continue;
            const double dist = std::abs(eps[last] * r.k[last][n] - r.tau[j]);
            if (dist < bd) {
                bd = dist;
                best = j;
            }
        }
        taken[best] = true;
        order[best] = n;
    }
    for (auto& row : r.k) {
        std::vector<cplx> sorted(d);
        for (int j = 0; j < d; ++j) sorted[j] = row[order[j]];
        row = sorted;
    }

    for (int j = 0; j < d; ++j) {
        std::vector<double> e, diffs, de;
        for (std::size_t i = 0; i < eps.size(); ++i) e.push_back(std::abs(eps[i] * r.k[i][j] - r.tau[j]));
        r.err.push_back(e);
        // Exact limits (errors at rounding level) carry no rate information.
        const bool exact = *std::max_element(e.begin(), e.end()) <= 1e-12 * (1.0 + std::abs(r.tau[j]));
        r.slope.push_back(exact ? std::numeric_limits<double>::infinity() : detail::loglog_slope(eps, e));

        // Richardson step on the two smallest eps with the observed convergence order.
        for (std::size_t i = 0; i + 1 < eps.size(); ++i) {
            diffs.push_back(std::abs(eps[i] * r.k[i][j] - eps[i + 1] * r.k[i + 1][j]));
            de.push_back(eps[i]);
        }
        const double alpha = detail::loglog_slope(de, diffs);
        const cplx v1 = eps[last - 1] * r.k[last - 1][j], v2 = eps[last] * r.k[last][j];
        if (std::isfinite(alpha) && alpha > 0.05) {
            const double w1 = std::pow(eps[last - 1], alpha), w2 = std::pow(eps[last], alpha);
            r.tau_hat.push_back((v2 * w1 - v1 * w2) / (w1 - w2));
        } else {
            r.tau_hat.push_back(v2);
        }
    }
    return r;
}

} // namespace resl
