#include "commands.hpp"

#include <CLI11.hpp>

int main(int argc, char** argv) {
    resl::cli::RunConfig c;
    CLI::App app{"Jost matrices, resonances, S-matrices and inverse problems for block Jacobi operators"};
    app.require_subcommand(1);
    const std::vector<std::string> names = {"validate", "spectrum", "smatrix", "fredholm", "invert", "sweep", "gauge", "finite-inverse"};
    for (const std::string& name : names) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--in", c.in, "input JSON file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", c.out, "output file, - for stdout");
        sub->add_option("--grid", c.grid, "number of circle points");
        sub->add_option("--tol-band", c.tol_band, "virtual-state band around the unit circle");
        sub->add_option("--seed", c.seed, "seed for randomized steps");
        if (name == "spectrum" || name == "smatrix") sub->add_option("--csv", c.csv, "root table or sample table as CSV");
        if (name == "smatrix") {
            sub->add_flag("--psi", c.psi, "emit Jost-matrix samples instead of S");
            sub->add_option("--radius", c.radius, "circle radius for Jost samples");
        }
        if (name == "sweep") {
            sub->add_option("--eps", c.eps, "decreasing eps values")->delimiter(',');
            sub->add_option("--table", c.table, "fitted limits as JSON");
        }
        if (name == "invert") {
            sub->add_option("--q", c.q, "order of the perturbation, 0 to infer");
            sub->add_option("--noise", c.noise, "standard deviation of Gaussian noise added to the samples");
        }
        if (name == "gauge") {
            sub->add_option("--kind", c.kind, "polar or triangular")->check(CLI::IsMember({"polar", "triangular"}));
            sub->add_option("--u1", c.u1, "JSON file with the unitary u_1")->check(CLI::ExistingFile);
        }
        sub->callback([&c, name] { c.command = name; });
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : resl::cli::failure;
    }
    return resl::cli::run(c);
}
