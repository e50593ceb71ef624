// JSON and CSV serialization. Matrices are row-major lists of [re, im] pairs;
// readers also accept nested rows and plain real entries.
#pragma once

#include "resl/gauge.hpp"
#include "resl/inverse.hpp"
#include "resl/sweep.hpp"

#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <sstream>

namespace resl::io {

using json = nlohmann::ordered_json;

inline json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline cplx complex_from_json(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) return {j[0].get<double>(), j[1].get<double>()};
    throw Error(ErrorKind::InvalidInput, "expected a number or an [re, im] pair, got " + j.dump());
}

inline json to_json(const Mat& m) {
    json out = json::array();
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c) out.push_back(to_json(m(r, c)));
    return out;
}

// Nested rows when the first entry is a list of the same length as the outer
// list; otherwise a flat row-major list of d * d entries.
inline bool is_nested_matrix(const json& j) { return !j.empty() && j[0].is_array() && j[0].size() == j.size(); }

inline int matrix_dim(const json& j) {
    if (j.is_number()) return 1;
    if (!j.is_array() || j.empty()) throw Error(ErrorKind::InvalidInput, "matrix must be a non-empty list");
    if (is_nested_matrix(j)) return static_cast<int>(j.size());
    const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(j.size()))));
    if (d * d != static_cast<int>(j.size())) throw Error(ErrorKind::InvalidInput, "matrix entry count is not a square");
    return d;
}

inline Mat matrix_from_json(const json& j, int d) {
    if (matrix_dim(j) != d) throw Error(ErrorKind::InvalidInput, "matrix is not " + std::to_string(d) + " x " + std::to_string(d));
    if (j.is_number()) return Mat::Constant(1, 1, j.get<double>());
    Mat m(d, d);
    const bool nested = is_nested_matrix(j);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) m(r, c) = complex_from_json(nested ? j[r][c] : j[r * d + c]);
    return m;
}

inline json to_json(const std::vector<Mat>& seq) {
    json out = json::array();
    for (const Mat& m : seq) out.push_back(to_json(m));
    return out;
}

inline std::vector<Mat> sequence_from_json(const json& j, int d) {
    if (!j.is_array()) throw Error(ErrorKind::InvalidInput, "coefficient sequence must be a list");
    std::vector<Mat> out;
    for (const json& m : j) out.push_back(matrix_from_json(m, d));
    return out;
}

inline json to_json(const Perturbation& V) {
    json j;
    j["d"] = V.d;
    j["p"] = V.p;
    j["q"] = V.q;
    j["class"] = class_name(V.tag);
    j["a"] = to_json(V.a);
    j["s"] = to_json(V.s);
    j["b"] = to_json(V.b);
    return j;
}

inline int get_int(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number_integer()) throw Error(ErrorKind::InvalidInput, std::string("missing integer field '") + key + "'");
    return j[key].get<int>();
}

// Fields d, a, b (and optionally p, s); s omitted means s = a.
inline Perturbation perturbation_from_json(const json& j, const Tolerances& tol = {}) {
    if (!j.is_object()) throw Error(ErrorKind::InvalidInput, "perturbation must be a JSON object");
    const int d = get_int(j, "d");
    if (d < 1) throw Error(ErrorKind::InvalidInput, "dimension must be positive");
    if (!j.contains("a") || !j.contains("b")) throw Error(ErrorKind::InvalidInput, "perturbation needs 'a' and 'b'");
    std::vector<Mat> a = sequence_from_json(j["a"], d);
    std::vector<Mat> b = sequence_from_json(j["b"], d);
    std::vector<Mat> s = j.contains("s") ? sequence_from_json(j["s"], d) : std::vector<Mat>{};
    if (j.contains("p") && get_int(j, "p") != static_cast<int>(a.size()))
        throw Error(ErrorKind::InvalidInput, "field 'p' disagrees with the length of 'a'");
    return validate_perturbation(d, std::move(a), std::move(s), std::move(b), tol);
}

inline json to_json(const SpectrumReport& r, const ForbiddenDomain* bounds = nullptr) {
    json j;
    j["d"] = r.d;
    j["q"] = r.q;
    json roots = json::array();
    for (const ClassifiedRoot& c : r.roots)
        roots.push_back(json::array({c.root.value.real(), c.root.value.imag(), c.root.multiplicity, kind_name(c.kind)}));
    j["roots"] = roots;
    json energies = json::array();
    for (const ClassifiedRoot& c : r.roots)
        if (c.kind == RootKind::eigenvalue) energies.push_back(to_json(c.lambda));
    j["eigenvalues"] = energies;
    j["nu_plus"] = r.nu_plus;
    j["nu_minus"] = r.nu_minus;
    j["eigen_count"] = r.eigen_count;
    j["C_V"] = to_json(r.C_V);
    j["h"] = to_json(r.h);
    j["residuals"] = {{"product", r.residuals.product},
                      {"sum_inverse", r.residuals.sum_inverse},
                      {"sum", r.residuals.sum},
                      {"A", to_json(r.residuals.A)},
                      {"tolerance", r.residuals.tolerance}};
    json coeffs = json::array();
    for (cplx c : r.determinant.coeffs()) coeffs.push_back(to_json(c));
    j["determinant"] = coeffs;
    if (bounds) {
        const auto bound = [](const BoundCheck& b) {
            json o;
            o["applicable"] = b.applicable;
            if (b.applicable) {
                o["holds"] = b.holds;
                o["tight"] = b.tight;
                o["values"] = b.values;
            } else {
                o["reason"] = b.reason;
            }
            return o;
        };
        j["annulus_bound"] = bound(bounds->annulus);
        j["eigenvalue_bound"] = bound(bounds->eigen_bound);
    }
    j["anomalies"] = r.anomalies;
    return j;
}

// Roots back from a report: [re, im, multiplicity, class] rows.
inline std::vector<Root> roots_from_report(const json& j) {
    std::vector<Root> out;
    for (const json& r : j.at("roots")) out.push_back({{r.at(0).get<double>(), r.at(1).get<double>()}, r.at(2).get<int>(), 0.0});
    return out;
}

inline json to_json(const std::vector<SSample>& samples) {
    json out = json::array();
    for (const SSample& s : samples) out.push_back({{"k", to_json(s.k)}, {"S", to_json(s.S)}});
    return out;
}

struct SampleFile {
    int d = 0;
    int q = 0;                          // 0 when not stated
    std::vector<SSample> smatrix;       // entries with "S"
    std::vector<cplx> jost_nodes;       // entries with "psi"
    std::vector<Mat> jost_values;
};

// A list of {"k", "S"} or {"k", "psi"} entries, or an object {"q"?, "samples": [...]}.
inline SampleFile samples_from_json(const json& j) {
    SampleFile f;
    const json* list = &j;
    if (j.is_object()) {
        if (!j.contains("samples")) throw Error(ErrorKind::InvalidInput, "sample object needs a 'samples' list");
        if (j.contains("q")) f.q = get_int(j, "q");
        list = &j["samples"];
    }
    if (!list->is_array()) throw Error(ErrorKind::InvalidInput, "samples must be a list");
    for (const json& e : *list) {
        if (!e.is_object() || !e.contains("k")) throw Error(ErrorKind::InvalidInput, "sample entry needs 'k'");
        const bool is_s = e.contains("S");
        if (!is_s && !e.contains("psi")) throw Error(ErrorKind::InvalidInput, "sample entry needs 'S' or 'psi'");
        const json& m = is_s ? e["S"] : e["psi"];
        const int d = matrix_dim(m);
        if (f.d == 0) f.d = d;
        if (d != f.d) throw Error(ErrorKind::InvalidInput, "samples have inconsistent dimensions");
        const cplx k = complex_from_json(e["k"]);
        if (is_s) f.smatrix.push_back({k, matrix_from_json(m, d)});
        else {
            f.jost_nodes.push_back(k);
            f.jost_values.push_back(matrix_from_json(m, d));
        }
    }
    if (!f.smatrix.empty() && !f.jost_nodes.empty()) throw Error(ErrorKind::InvalidInput, "cannot mix S and psi samples");
    if (f.smatrix.empty() && f.jost_nodes.empty()) throw Error(ErrorKind::InconsistentSamples, "no samples");
    return f;
}

inline json to_json(const FiniteJacobi& F) {
    json j;
    j["d"] = F.d;
    j["p"] = F.p;
    j["a"] = to_json(F.a);
    j["b"] = to_json(F.b);
    return j;
}

inline FiniteJacobi finite_jacobi_from_json(const json& j) {
    FiniteJacobi F;
    F.d = get_int(j, "d");
    if (F.d < 1) throw Error(ErrorKind::InvalidInput, "dimension must be positive");
    F.b = sequence_from_json(j.at("b"), F.d);
    F.a = j.contains("a") ? sequence_from_json(j["a"], F.d) : std::vector<Mat>{};
    F.p = static_cast<int>(F.b.size());
    if (F.p < 1 || static_cast<int>(F.a.size()) != F.p - 1)
        throw Error(ErrorKind::InvalidInput, "finite Jacobi matrix needs p diagonal and p - 1 off-diagonal blocks");
    return F;
}

inline json to_json(const SpectralData& sd) {
    json j;
    j["d"] = sd.d;
    j["m"] = sd.m;
    j["mu"] = sd.mu;
    j["rank"] = sd.rank;
    j["B"] = to_json(sd.B);
    json g = json::array();
    for (const Mat& x : sd.g) {
        json rows = json::array();
        for (int r = 0; r < x.rows(); ++r) {
            json row = json::array();
            for (int c = 0; c < x.cols(); ++c) row.push_back(to_json(x(r, c)));
            rows.push_back(row);
        }
        g.push_back(rows);
    }
    j["g"] = g;
    j["P"] = to_json(sd.P);
    return j;
}

// Spectral data from mu, rank and B; E, P and g are rebuilt from B.
inline SpectralData spectral_data_from_json(const json& j) {
    SpectralData sd;
    sd.d = get_int(j, "d");
    sd.mu = j.at("mu").get<std::vector<double>>();
    sd.rank = j.at("rank").get<std::vector<int>>();
    sd.B = sequence_from_json(j.at("B"), sd.d);
    sd.m = static_cast<int>(sd.mu.size());
    if (static_cast<int>(sd.rank.size()) != sd.m || static_cast<int>(sd.B.size()) != sd.m)
        throw Error(ErrorKind::InvalidInput, "mu, rank and B must have equal length");
    for (int i = 0; i < sd.m; ++i) {
        Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(sd.B[i]));
        const Mat E = es.eigenvectors().rightCols(sd.rank[i]);
        const Mat ginv = E.adjoint() * sd.B[i] * E;
        sd.E.push_back(E);
        sd.P.push_back(E * E.adjoint());
        sd.g.push_back(hermitian_part(ginv).inverse());
    }
    return sd;
}

struct SweepFile {
    SweepSetup setup;
    std::vector<double> eps;  // empty when not given
};

// A perturbation object with an extra "sweep" object {"scaled": "a_p" | "b_p",
// "prime": matrix, "eps": [...]}.
inline SweepFile sweep_from_json(const json& j) {
    if (!j.contains("sweep")) throw Error(ErrorKind::InvalidInput, "sweep configuration needs a 'sweep' object");
    const json& s = j["sweep"];
    SweepFile f;
    const std::string scaled = s.value("scaled", "a_p");
    if (scaled != "a_p" && scaled != "b_p") throw Error(ErrorKind::InvalidInput, "'scaled' must be a_p or b_p");
    f.setup.even = scaled == "a_p";
    const int d = get_int(j, "d");
    f.setup.prime = matrix_from_json(s.at("prime"), d);
    if (s.contains("eps")) f.eps = s["eps"].get<std::vector<double>>();
    // The scaled coefficient given in the file is ignored; the base carries its
    // value at eps = 0.1.
    json base = j;
    base.erase("sweep");
    std::vector<Mat> a = sequence_from_json(base.at("a"), d), b = sequence_from_json(base.at("b"), d);
    if (a.empty() || b.empty() || a.size() != b.size()) throw Error(ErrorKind::EmptySupport, "sweep base needs equal-length a and b");
    if (f.setup.even) a.back() = identity(d) + 0.1 * f.setup.prime;
    else {
        a.back() = identity(d);
        b.back() = 0.1 * f.setup.prime;
    }
    f.setup.base = validate_perturbation(d, a, b);
    if (!f.setup.base.is_selfadjoint_operator()) throw Error(ErrorKind::InvalidInput, "sweep base must be self-adjoint");
    return f;
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::runtime_error("parse error in " + path + ": " + e.what());
    }
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

// Full precision for CSV fields.
inline std::string num(double x) {
    std::ostringstream s;
    s << std::setprecision(17) << x;
    return s.str();
}

// CSV with one header line; cells are returned as text.
inline std::vector<std::vector<std::string>> parse_csv_cells(const std::string& text, std::vector<std::string>* header = nullptr) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::vector<std::string>> rows;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (first) {
            first = false;
            if (header) *header = cells;
            continue;
        }
        rows.push_back(std::move(cells));
    }
    return rows;
}

// Numeric CSV; every cell must parse as a double.
inline std::vector<std::vector<double>> parse_csv(const std::string& text, std::vector<std::string>* header = nullptr) {
    std::vector<std::vector<double>> rows;
    for (const auto& cells : parse_csv_cells(text, header)) {
        std::vector<double> row;
        for (const auto& c : cells) row.push_back(std::stod(c));
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace resl::io
