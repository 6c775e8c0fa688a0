// Command-line front-end: mesh analysis, Delaunay triangulation, lattice
// patch generation, interpolation and FEM error measurements, and the
// verification suite. Exit codes: 0 success, 1 failed check, 2 usage/IO.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "promesh/verify.hpp"

using namespace promesh;

namespace {

MeshFormat format_for(const std::string& path) {
    return path.size() >= 5 && path.substr(path.size() - 5) == ".json" ? MeshFormat::json
                                                                       : MeshFormat::text;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

std::string g17(double v) { return detail::fmt17(v); }

// human summary lines: 15 significant digits, absorbs last-ulp noise
std::string g15(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

int cmd_analyze(const std::string& mesh_path, const std::string& json_out,
                const std::string& csv_out) {
    const SimplicialMesh m = load_mesh(slurp(mesh_path), format_for(mesh_path));
    const QualityReport q = quality_report(m);
    std::cout << "h=" << g15(q.h) << " C_Delta=" << g15(q.c_delta) << " C_Xi=" << g15(q.c_xi)
              << " C_sigma=" << g15(q.c_sigma) << " C_Upsilon=" << g15(q.c_upsilon)
              << " Theta=" << g15(q.theta) << " R_max=" << g15(q.r_max) << " card=" << q.card
              << "\n";
    if (!json_out.empty()) {
        std::ostringstream ss;
        write_quality_json(q, ss);
        spit(json_out, ss.str());
    }
    if (!csv_out.empty()) {
        std::ostringstream ss;
        write_quality_csv(q, ss);
        spit(csv_out, ss.str());
    }
    return 0;
}

int cmd_delaunay(const std::string& points_path, bool protection, const std::string& out_path) {
    std::istringstream pin(slurp(points_path));
    const PointSet ps = load_points(pin);
    const SimplicialMesh m = delaunay_triangulate(ps);
    if (protection) {
        const ProtectionReport pr = protection_report(m);
        std::cout << "delta=" << g17(pr.delta) << "\n";
    }
    std::ostringstream ss;
    save_mesh(m, ss, out_path.empty() ? MeshFormat::text : format_for(out_path));
    if (out_path.empty())
        std::cout << ss.str();
    else
        spit(out_path, ss.str());
    std::cout << "cells=" << m.cells.size() << "\n";
    return 0;
}

int cmd_coxeter(std::size_t dim, double scale, double lo, double hi,
                const std::string& out_path) {
    CoxeterSpec spec;
    spec.dim = dim;
    spec.scale = scale;
    spec.box.assign(dim, {lo, hi});
    const SimplicialMesh m = generate_coxeter(spec);
    const ProtectionReport pr = protection_report(m);
    std::cout << "cells=" << m.cells.size() << " delta=" << g17(pr.delta) << "\n";
    if (!out_path.empty()) {
        std::ostringstream ss;
        save_mesh(m, ss, format_for(out_path));
        spit(out_path, ss.str());
    }
    return 0;
}

int cmd_interp(const std::string& mesh_path, const std::string& field, std::size_t degree,
               double lambda) {
    const SimplicialMesh m = load_mesh(slurp(mesh_path), format_for(mesh_path));
    const ScalarField v = scalar_field(field, m.dim());
    const QuadratureRule rule = quadrature_rule(m.dim(), 6);
    const double err = vector_interp_error(gradient_field(v), m, degree, lambda, rule);
    std::cout << "grad_interp_error=" << g17(err) << "\n";
    return 0;
}

int cmd_fem(const std::string& mesh_path, const std::string& mms_case) {
    const SimplicialMesh m = load_mesh(slurp(mesh_path), format_for(mesh_path));
    PoissonProblem p = mms_problem(mms_case, m);
    const AssembledSystem sys = assemble(p);
    const DiscreteSolution sol = solve(p, sys);
    const QuadratureRule rule = quadrature_rule(m.dim(), 6);
    std::cout << "h1_error=" << g17(gradient_error(p, sol.nodal, rule))
              << " residual=" << g17(sol.residual) << " iterations=" << sol.iterations << "\n";
    return 0;
}

int cmd_verify(const std::string& config_path, std::optional<std::uint64_t> seed,
               const std::string& json_out, const std::string& csv_out) {
    ExperimentConfig cfg = parse_experiment_config(slurp(config_path));
    if (seed) cfg.seed = *seed;
    const SuiteReport rep = run_full_suite(cfg);
    std::size_t failed = 0;
    for (const BoundCheckResult& r : rep.checks)
        if (!r.pass) ++failed;
    std::cout << "checks=" << rep.checks.size() << " failed=" << failed
              << " c_int=" << g17(rep.calibration.c_int_used)
              << " pass=" << (rep.pass ? "true" : "false") << "\n";
    if (!json_out.empty()) {
        std::ostringstream ss;
        write_suite_json(rep, ss);
        spit(json_out, ss.str());
    }
    if (!csv_out.empty()) {
        std::ostringstream ss;
        write_suite_csv(rep, ss);
        spit(csv_out, ss.str());
    }
    return rep.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"simplicial mesh quality, Delaunay protection and interpolation toolkit"};
    app.require_subcommand(1);

    std::string mesh_path, points_path, out_path, json_out, csv_out;
    std::string field = "sine-product", mms_case = "sine-product", config_path;
    std::size_t dim = 2, degree = 1;
    double scale = 0.5, box_lo = 0.0, box_hi = 2.0, lambda = 2.0;
    bool protection = false;
    std::optional<std::uint64_t> seed;

    CLI::App* analyze = app.add_subcommand("analyze", "quality report for a mesh file");
    analyze->add_option("mesh", mesh_path)->required();
    analyze->add_option("--json", json_out);
    analyze->add_option("--csv", csv_out);

    CLI::App* delaunay = app.add_subcommand("delaunay", "triangulate a point set");
    delaunay->add_option("points", points_path)->required();
    delaunay->add_flag("--protection", protection);
    delaunay->add_option("--out", out_path);

    CLI::App* coxeter = app.add_subcommand("coxeter", "lattice triangulation patch");
    coxeter->add_option("--dim", dim)->required();
    coxeter->add_option("--scale", scale);
    coxeter->add_option("--box-lo", box_lo);
    coxeter->add_option("--box-hi", box_hi);
    coxeter->add_option("--out", out_path);

    CLI::App* interp = app.add_subcommand("interp", "gradient interpolation error");
    interp->add_option("mesh", mesh_path)->required();
    interp->add_option("--field", field);
    interp->add_option("--degree", degree);
    interp->add_option("--lambda", lambda);

    CLI::App* fem = app.add_subcommand("fem", "manufactured Poisson solve");
    fem->add_option("mesh", mesh_path)->required();
    fem->add_option("--case", mms_case);

    CLI::App* verify = app.add_subcommand("verify", "run the verification suite");
    verify->add_option("config", config_path)->required();
    verify->add_option("--seed", seed);
    verify->add_option("--json", json_out);
    verify->add_option("--csv", csv_out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    try {
        if (*analyze) return cmd_analyze(mesh_path, json_out, csv_out);
        if (*delaunay) return cmd_delaunay(points_path, protection, out_path);
        if (*coxeter) return cmd_coxeter(dim, scale, box_lo, box_hi, out_path);
        if (*interp) return cmd_interp(mesh_path, field, degree, lambda);
        if (*fem) return cmd_fem(mesh_path, mms_case);
        if (*verify) return cmd_verify(config_path, seed, json_out, csv_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
