// Command implementations for the resl front end. Each command reads its input
// file, writes its output (a file, or stdout for "-") and returns an exit code.
#pragma once

#include "resl/resl.hpp"

#include <iostream>
#include <random>

namespace resl::cli {

using io::json;

enum Exit { ok = 0, failure = 1, anomaly = 2, invert_failure = 3 };

struct RunConfig {
    std::string command;
    std::string in;
    std::string out = "-";
    std::string csv;                // optional secondary CSV output
    std::string table;              // sweep: fitted-limit table (JSON)
    int grid = 64;                  // circle points
    double radius = 1.0;            // radius for Jost samples
    bool psi = false;               // smatrix: emit Jost samples instead of S
    std::vector<double> eps;        // sweep values, strictly decreasing
    double tol_band = 1e-8;         // virtual-state band
    std::uint64_t seed = 0;
    double noise = 0.0;             // invert: Gaussian noise added to the samples
    int q = 0;                      // invert: order, 0 to infer
    std::string kind = "polar";     // gauge kind
    std::string u1;                 // gauge: JSON file holding u_1 (default: the input's "u1", else 1)
};

inline void validate_config(const RunConfig& c) {
    if (c.grid < 8) throw Error(ErrorKind::InvalidInput, "grid size must be at least 8");
    for (std::size_t i = 0; i < c.eps.size(); ++i)
        if (!(c.eps[i] > 0.0) || (i > 0 && !(c.eps[i] < c.eps[i - 1])))
            throw Error(ErrorKind::InvalidInput, "eps list must be positive and strictly decreasing");
    if (!(c.radius > 0.0)) throw Error(ErrorKind::InvalidInput, "radius must be positive");
    if (!(c.tol_band > 0.0)) throw Error(ErrorKind::InvalidInput, "band tolerance must be positive");
    if (c.noise < 0.0) throw Error(ErrorKind::InvalidInput, "noise level must be non-negative");
    if (c.kind != "polar" && c.kind != "triangular") throw Error(ErrorKind::InvalidInput, "gauge kind must be polar or triangular");
}

inline void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") std::cout << text;
    else io::write_text_file(path, text);
}

inline int cmd_validate(const RunConfig& c, std::ostream& log) {
    const Perturbation V = io::perturbation_from_json(io::read_json_file(c.in));
    emit(c.out, io::dump(io::to_json(V)));
    log << "valid: d=" << V.d << " p=" << V.p << " q=" << V.q << " class=" << class_name(V.tag) << "\n";
    return ok;
}

inline int cmd_spectrum(const RunConfig& c, std::ostream& log) {
    const Perturbation V = io::perturbation_from_json(io::read_json_file(c.in));
    const JostData J = build_jost(V);
    ClassifyOptions opt;
    opt.band = c.tol_band;
    opt.throw_on_anomaly = false;
    const SpectrumReport rep = spectrum(J, opt);
    const ForbiddenDomain fd = forbidden_domain(rep);
    emit(c.out, io::dump(io::to_json(rep, &fd)));
    if (!c.csv.empty()) {
        std::string text = "re,im,modulus,multiplicity,kind\n";
        for (const ClassifiedRoot& r : rep.roots)
            text += io::num(r.root.value.real()) + "," + io::num(r.root.value.imag()) + "," + io::num(std::abs(r.root.value)) + "," +
                    std::to_string(r.root.multiplicity) + "," + kind_name(r.kind) + "\n";
        io::write_text_file(c.csv, text);
    }
    if (!rep.anomalies.empty()) {
        log << error_name(ErrorKind::ClassificationAnomaly) << ": " << rep.anomalies.front() << "\n";
        return anomaly;
    }
    return ok;
}

// S samples on the lower half circle (the inversion input) or Jost samples on a
// circle of the given radius; the CSV adds det S phase and the phase-shift derivative.
inline int cmd_smatrix(const RunConfig& c, std::ostream& log) {
    const Perturbation V = io::perturbation_from_json(io::read_json_file(c.in));
    const JostData J = build_jost(V);
    json out;
    out["d"] = V.d;
    out["q"] = V.q;
    if (c.psi) {
        json list = json::array();
        for (cplx k : circle_nodes(c.grid, c.radius)) list.push_back({{"k", io::to_json(k)}, {"psi", io::to_json(J.psi().eval(k))}});
        out["samples"] = list;
        emit(c.out, io::dump(out));
        return ok;
    }
    const std::vector<SSample> samples = smatrix_samples(J, c.grid);
    out["samples"] = io::to_json(samples);
    emit(c.out, io::dump(out));
    if (!c.csv.empty()) {
        const std::vector<cplx> roots = expand_roots(jost_roots(J, jost_determinant(J)));
        std::string text = "k_re,k_im";
        for (int r = 0; r < V.d; ++r)
            for (int s = 0; s < V.d; ++s) text += ",S" + std::to_string(r + 1) + std::to_string(s + 1) + "_re,S" + std::to_string(r + 1) + std::to_string(s + 1) + "_im";
        text += ",detS_phase,xi_prime\n";
        for (const SSample& s : samples) {
            text += io::num(s.k.real()) + "," + io::num(s.k.imag());
            for (int r = 0; r < V.d; ++r)
                for (int t = 0; t < V.d; ++t) text += "," + io::num(s.S(r, t).real()) + "," + io::num(s.S(r, t).imag());
            text += "," + io::num(std::arg(s.S.determinant())) + "," + io::num(phase_shift_derivative(roots, s.k)) + "\n";
        }
        io::write_text_file(c.csv, text);
    }
    log << "wrote " << samples.size() << " S-matrix samples\n";
    return ok;
}

inline int cmd_fredholm(const RunConfig& c, std::ostream& log) {
    const Perturbation V = io::perturbation_from_json(io::read_json_file(c.in));
    const JostData J = build_jost(V);
    const FredholmData F = fredholm_determinant(V);
    const Poly f = jost_determinant(J);
    const cplx detT = J.st.T.back().determinant();
    json out;
    out["window"] = F.window;
    json coeffs = json::array();
    for (cplx z : F.D.coeffs()) coeffs.push_back(io::to_json(z));
    out["D"] = coeffs;
    out["overflow"] = F.overflow;
    out["det_T"] = io::to_json(detT);
    out["jost_defect"] = jost_fredholm_defect(f, F, detT);
    out["F1"] = io::to_json(F.F1);
    out["F1_formula"] = io::to_json(F.F1_formula);
    out["F2"] = io::to_json(F.F2);
    out["F2_formula"] = io::to_json(F.F2_formula);
    emit(c.out, io::dump(out));
    log << "jost/fredholm defect " << io::num(out["jost_defect"].get<double>()) << "\n";
    return ok;
}

inline void add_noise(std::vector<Mat>& values, double sigma, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, sigma);
    for (Mat& m : values)
        for (int r = 0; r < m.rows(); ++r)
            for (int s = 0; s < m.cols(); ++s) m(r, s) += cplx(n(rng), n(rng));
}

// Errors from the reconstruction map to exit 3; with noise the report records
// the failure as a degradation result.
inline int cmd_invert(const RunConfig& c, std::ostream& log) {
    const json in = io::read_json_file(c.in);
    io::SampleFile f = io::samples_from_json(in);
    InverseOptions opt;
    opt.q = c.q > 0 ? c.q : f.q;
    // Declared noise relaxes the fit and round-trip gates to the noise scale.
    if (c.noise > 0.0) {
        opt.fit_tol = std::max(opt.fit_tol, 50.0 * c.noise);
        opt.tol_inv = std::max(opt.tol_inv, 50.0 * c.noise);
        opt.structure_tol = std::max(opt.structure_tol, 50.0 * c.noise);
    }
    json out;
    try {
        InverseResult res;
        if (!f.smatrix.empty()) {
            if (c.noise > 0.0) {
                std::vector<Mat> S;
                for (const SSample& s : f.smatrix) S.push_back(s.S);
                add_noise(S, c.noise, c.seed);
                for (std::size_t i = 0; i < S.size(); ++i) f.smatrix[i].S = S[i];
            }
            res = reconstruct_from_smatrix(f.smatrix, f.d, opt);
        } else {
            if (opt.q <= 0) throw Error(ErrorKind::InvalidInput, "Jost samples need the order q (field \"q\" or --q)");
            if (c.noise > 0.0) add_noise(f.jost_values, c.noise, c.seed);
            res = reconstruct_from_jost_samples(f.jost_nodes, f.jost_values, opt.q, opt);
        }
        out = io::to_json(res.V);
        out["fit_residual"] = res.fit_residual;
        out["round_trip"] = res.round_trip;
        if (c.noise > 0.0) out["noise"] = c.noise;
        emit(c.out, io::dump(out));
        log << "round-trip residual " << io::num(res.round_trip) << "\n";
        return ok;
    } catch (const Error& e) {
        if (c.noise > 0.0) {
            out["noise"] = c.noise;
            out["seed"] = c.seed;
            out["status"] = "failed";
            out["error"] = error_name(e.kind());
            out["message"] = e.what();
            emit(c.out, io::dump(out));
        }
        log << e.what() << "\n";
        return invert_failure;
    }
}

inline std::vector<double> default_eps() { return {1e-1, 5e-2, 2e-2, 1e-2, 5e-3, 2e-3, 1e-3, 5e-4, 2e-4, 1e-4}; }

// CSV of tracked roots per eps; the table lists t (zeros of the limiting
// determinant), tau = 1 / t, the extrapolated limit and the fitted slope.
inline int cmd_sweep(const RunConfig& c, std::ostream& log) {
    const io::SweepFile f = io::sweep_from_json(io::read_json_file(c.in));
    std::vector<double> eps = !c.eps.empty() ? c.eps : (!f.eps.empty() ? f.eps : default_eps());
    if (eps.size() < 2 || eps.front() / eps.back() < 100.0 * (1.0 - 1e-12))
        throw Error(ErrorKind::InvalidInput, "eps list must span at least two decades");
    const SweepResult r = run_sweep(f.setup, eps);
    std::string text = "eps,root,k_re,k_im\n";
    for (std::size_t i = 0; i < r.eps.size(); ++i)
        for (std::size_t n = 0; n < r.k[i].size(); ++n)
            text += io::num(r.eps[i]) + "," + std::to_string(n) + "," + io::num(r.k[i][n].real()) + "," + io::num(r.k[i][n].imag()) + "\n";
    emit(c.out, text);
    json table = json::array();
    for (std::size_t n = 0; n < r.tau.size(); ++n) {
        json row;
        row["root"] = n;
        row["t"] = io::to_json(r.t[n]);
        row["tau"] = io::to_json(r.tau[n]);
        row["tau_hat"] = io::to_json(r.tau_hat[n]);
        row["error"] = std::abs(r.tau_hat[n] - r.tau[n]);
        row["last_error"] = r.err[n].back();
        // JSON has no infinity; exact limits are reported as null.
        row["slope"] = std::isfinite(r.slope[n]) ? json(r.slope[n]) : json(nullptr);
        table.push_back(row);
        log << "root " << n << ": tau=(" << io::num(r.tau[n].real()) << ", " << io::num(r.tau[n].imag())
            << ") |tau_hat - tau|=" << io::num(row["error"].get<double>()) << "\n";
    }
    if (!c.table.empty()) io::write_text_file(c.table, io::dump(table));
    return ok;
}

inline int cmd_gauge(const RunConfig& c, std::ostream& log) {
    const json in = io::read_json_file(c.in);
    const Perturbation V = io::perturbation_from_json(in);
    const GaugeKind kind = c.kind == "polar" ? GaugeKind::polar : GaugeKind::triangular;
    Mat u1 = identity(V.d);
    if (!c.u1.empty()) u1 = io::matrix_from_json(io::read_json_file(c.u1), V.d);
    else if (in.contains("u1")) u1 = io::matrix_from_json(in.at("u1"), V.d);
    const GaugeResult g = kind == GaugeKind::polar ? polar_gauge(V, u1) : triangular_gauge(V, u1);
    json out = io::to_json(g.V);
    out["gauge"] = gauge_name(kind);
    out["u"] = io::to_json(g.u);
    emit(c.out, io::dump(out));
    log << gauge_name(kind) << " gauge applied\n";
    return ok;
}

// A finite Jacobi matrix ("b" present) maps to its spectral data; spectral data
// ("mu" present) maps back to the finite Jacobi matrix.
inline int cmd_finite_inverse(const RunConfig& c, std::ostream& log) {
    const json in = io::read_json_file(c.in);
    if (in.contains("mu")) {
        const SpectralData sd = io::spectral_data_from_json(in);
        const FiniteJacobi F = finite_inverse(sd);
        emit(c.out, io::dump(io::to_json(F)));
        log << "reconstructed p=" << F.p << "\n";
        return ok;
    }
    const FiniteJacobi F = io::finite_jacobi_from_json(in);
    const SpectralData sd = spectral_data_forward(F);
    emit(c.out, io::dump(io::to_json(sd)));
    log << sd.m << " distinct eigenvalues\n";
    return ok;
}

inline int run(const RunConfig& c, std::ostream& log = std::cerr) {
    try {
        validate_config(c);
        if (c.command == "validate") return cmd_validate(c, log);
        if (c.command == "spectrum") return cmd_spectrum(c, log);
        if (c.command == "smatrix") return cmd_smatrix(c, log);
        if (c.command == "fredholm") return cmd_fredholm(c, log);
        if (c.command == "invert") return cmd_invert(c, log);
        if (c.command == "sweep") return cmd_sweep(c, log);
        if (c.command == "gauge") return cmd_gauge(c, log);
        if (c.command == "finite-inverse") return cmd_finite_inverse(c, log);
        log << "unknown command " << c.command << "\n";
        return failure;
    } catch (const Error& e) {
        const int code = c.command == "invert" ? invert_failure : e.kind() == ErrorKind::ClassificationAnomaly ? anomaly : failure;
        log << e.what() << "\n";
        return code;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return failure;
    }
}

} // namespace resl::cli
