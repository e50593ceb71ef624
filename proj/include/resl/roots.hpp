// Polynomial roots: companion or block-companion initial guesses, polished by
// Aberth-Ehrlich iteration, then clustered into multiplicities.
#pragma once

#include "resl/matpoly.hpp"

#include <functional>
#include <numeric>

namespace resl {

struct Root {
    cplx value;
    int multiplicity = 1;
    double diameter = 0.0;  // spread of the raw approximations merged into this root
};

struct RootOptions {
    int max_iterations = 200;
    double step_tol = 1e-13;   // stop when every correction < step_tol (1 + |r|)
    double cluster = 1e-6;     // clustering radius, scaled by 1 + |r|
    double backward_tol = 1e-8;
};

namespace detail {

inline double arg_2pi(cplx z) {
    double a = std::arg(z);
    if (a < 0.0) a += 2.0 * std::numbers::pi;
    // Values a hair below 2 pi come from roots on the positive real axis.
    if (a > 2.0 * std::numbers::pi - 1e-12) a = 0.0;
    return a;
}

// Newton ratio p/p' evaluated stably on either side of the unit circle.
inline cplx newton_ratio(const std::vector<cplx>& c, cplx z) {
    const int n = static_cast<int>(c.size()) - 1;
    if (std::abs(z) <= 1.0) {
        cplx p = c[n], dp = 0.0;
        for (int i = n - 1; i >= 0; --i) {
            dp = dp * z + p;
            p = p * z + c[i];
        }
        if (dp == cplx(0.0)) return p == cplx(0.0) ? cplx(0.0) : cplx(1e300);
        return p / dp;
    }
    const cplx w = 1.0 / z;
    cplx r = c[0], dr = 0.0;
    for (int i = 1; i <= n; ++i) {
        dr = dr * w + r;
        r = r * w + c[i];
    }
    // p(z) = z^n rev(w), so p/p' = z / (n - w rev'(w) / rev(w)).
    if (r == cplx(0.0)) return 0.0;
    const cplx den = static_cast<double>(n) - w * dr / r;
    if (den == cplx(0.0)) return cplx(1e300);
    return z / den;
}

inline double backward_error(const std::vector<cplx>& c, cplx z) {
    cplx p = 0.0;
    double s = 0.0;
    const double az = std::abs(z);
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        p = p * z + *it;
        s = s * az + std::abs(*it);
    }
    return s > 0.0 ? std::abs(p) / s : 0.0;
}

inline std::vector<cplx> companion_eigenvalues(const std::vector<cplx>& c) {
    const int n = static_cast<int>(c.size()) - 1;
    Mat C = Mat::Zero(n, n);
    for (int i = 1; i < n; ++i) C(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) C(i, n - 1) = -c[i] / c[n];
    Eigen::ComplexEigenSolver<Mat> es(C, false);
    std::vector<cplx> z(n);
    for (int i = 0; i < n; ++i) z[i] = es.eigenvalues()(i);
    return z;
}

// Groups points whose distance is below radius (1 + |z|), transitively.
inline std::vector<std::vector<int>> cluster_points(const std::vector<cplx>& z, double radius) {
    const int n = static_cast<int>(z.size());
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int i) { return parent[i] == i ? i : parent[i] = find(parent[i]); };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(z[i] - z[j]) <= radius * (1.0 + std::max(std::abs(z[i]), std::abs(z[j]))))
                parent[find(i)] = find(j);
    std::vector<std::vector<int>> groups;
    std::vector<int> index(n, -1);
    for (int i = 0; i < n; ++i) {
        const int r = find(i);
        if (index[r] < 0) {
            index[r] = static_cast<int>(groups.size());
            groups.emplace_back();
        }
        groups[index[r]].push_back(i);
    }
    return groups;
}

inline std::vector<Root> merge_clusters(const std::vector<cplx>& z, double radius) {
    std::vector<Root> out;
    for (const auto& g : cluster_points(z, radius)) {
        cplx sum = 0.0;
        for (int i : g) sum += z[i];
        const cplx center = sum / static_cast<double>(g.size());
        double diam = 0.0;
        for (int i : g)
            for (int j : g) diam = std::max(diam, std::abs(z[i] - z[j]));
        out.push_back({center, static_cast<int>(g.size()), diam});
    }
    return out;
}

} // namespace detail

// Orders by modulus, ties (relative 1e-9) broken by argument in [0, 2 pi).
inline void sort_roots(std::vector<Root>& roots) {
    std::sort(roots.begin(), roots.end(), [](const Root& x, const Root& y) { return std::abs(x.value) < std::abs(y.value); });
    std::size_t i = 0;
    while (i < roots.size()) {
        std::size_t j = i + 1;
        while (j < roots.size() &&
               std::abs(roots[j].value) - std::abs(roots[i].value) <= 1e-9 * (1.0 + std::abs(roots[i].value)))
            ++j;
        std::stable_sort(roots.begin() + i, roots.begin() + j, [](const Root& x, const Root& y) {
            return detail::arg_2pi(x.value) < detail::arg_2pi(y.value);
        });
        i = j;
    }
}

inline std::vector<cplx> expand_roots(const std::vector<Root>& roots) {
    std::vector<cplx> out;
    for (const Root& r : roots)
        for (int m = 0; m < r.multiplicity; ++m) out.push_back(r.value);
    return out;
}

// Roots of poly starting from the given approximations (one per root).
inline std::vector<Root> find_roots(const Poly& poly, std::vector<cplx> z, const RootOptions& opt = {}) {
    const Poly P = poly.trimmed(1e-14);
    const int n = P.degree();
    if (n < 1) throw Error(ErrorKind::InvalidInput, "find_roots needs degree >= 1");
    if (static_cast<int>(z.size()) != n) throw Error(ErrorKind::InvalidInput, "one initial guess per root required");
    const std::vector<cplx>& c = P.coeffs();

    // Tight clusters in the initial guesses are kept at their centroid; Aberth
    // steps would only spread them to the eps^(1/m) scale.
    std::vector<bool> active(n, true);
    for (const auto& g : detail::cluster_points(z, opt.cluster)) {
        if (g.size() < 2) continue;
        cplx sum = 0.0;
        for (int i : g) sum += z[i];
        for (int i : g) {
            z[i] = sum / static_cast<double>(g.size());
            active[i] = false;
        }
    }

    bool converged = false;
    for (int it = 0; it < opt.max_iterations && !converged; ++it) {
        converged = true;
        for (int i = 0; i < n; ++i) {
            if (!active[i]) continue;
            const cplx ratio = detail::newton_ratio(c, z[i]);
            if (ratio == cplx(0.0)) continue;
            cplx sum = 0.0;
            for (int j = 0; j < n; ++j)
                if (j != i && z[j] != z[i]) sum += 1.0 / (z[i] - z[j]);
            const cplx w = ratio / (1.0 - ratio * sum);
            if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) continue;
            z[i] -= w;
            if (std::abs(w) >= opt.step_tol * (1.0 + std::abs(z[i]))) converged = false;
        }
    }
    if (!converged) {
        // Stagnation near multiple roots is acceptable when the backward error is small.
        for (int i = 0; i < n; ++i)
            if (!std::isfinite(std::abs(z[i])) || detail::backward_error(c, z[i]) > opt.backward_tol)
                throw Error(ErrorKind::NonConvergence, "Aberth iteration did not converge");
    }
    std::vector<Root> roots = detail::merge_clusters(z, opt.cluster);
    sort_roots(roots);
    return roots;
}

inline std::vector<Root> find_roots(const Poly& poly, const RootOptions& opt = {}) {
    const Poly P = poly.trimmed(1e-14);
    if (P.degree() < 1) throw Error(ErrorKind::InvalidInput, "find_roots needs degree >= 1");
    if (std::abs(P.leading()) == 0.0) throw Error(ErrorKind::InvalidInput, "vanishing leading coefficient");
    // Roots at the origin are split off exactly.
    const std::vector<cplx>& c = P.coeffs();
    std::size_t zeros_at_origin = 0;
    while (zeros_at_origin < c.size() && c[zeros_at_origin] == cplx(0.0)) ++zeros_at_origin;
    std::vector<Root> roots;
    if (zeros_at_origin > 0) {
        roots.push_back({0.0, static_cast<int>(zeros_at_origin), 0.0});
        const Poly rest(std::vector<cplx>(c.begin() + zeros_at_origin, c.end()));
        if (rest.degree() >= 1) {
            auto more = find_roots(rest, detail::companion_eigenvalues(rest.coeffs()), opt);
            roots.insert(roots.end(), more.begin(), more.end());
        }
        sort_roots(roots);
        return roots;
    }
    return find_roots(P, detail::companion_eigenvalues(c), opt);
}

} // namespace resl
