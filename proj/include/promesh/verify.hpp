#pragma once

// Experiment harness: seeded inequality sweeps, interpolation-constant
// calibration with a held-out split, convergence studies, 2D flip-based
// optimality comparisons and the protection-vs-thickness checks.

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "promesh/coxeter.hpp"
#include "promesh/fem.hpp"

namespace promesh {

struct ExperimentConfig {
    std::uint64_t seed = 1;
    std::vector<std::size_t> dims = {2, 3};
    std::string mesh_family = "random-delaunay";  // | coxeter | structured-grid
    std::vector<std::size_t> levels = {12, 16, 20};
    std::vector<std::string> fields = {"sine-product", "gaussian-bump", "quadratic-bubble"};
    std::vector<double> lambdas = {1.0, 2.0, std::numeric_limits<double>::infinity()};
    std::vector<double> rhos = {2.0, std::numeric_limits<double>::infinity()};
    std::vector<std::size_t> degrees = {1, 2};
    std::optional<double> c_int_override;  // skip calibration, force a constant
};

inline ExperimentConfig parse_experiment_config(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
    ExperimentConfig c;
    try {
        if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("dims")) c.dims = j["dims"].get<std::vector<std::size_t>>();
        if (j.contains("mesh_family")) c.mesh_family = j["mesh_family"].get<std::string>();
        if (j.contains("levels")) c.levels = j["levels"].get<std::vector<std::size_t>>();
        if (j.contains("fields")) c.fields = j["fields"].get<std::vector<std::string>>();
        auto exponents = [&](const char* key, std::vector<double>& out) {
            if (!j.contains(key)) return;
            out.clear();
            for (const auto& e : j[key]) {
                if (e.is_string()) {
                    if (e.get<std::string>() != "inf")
                        throw ParseError(std::string("config: bad exponent in ") + key);
                    out.push_back(std::numeric_limits<double>::infinity());
                } else {
                    out.push_back(e.get<double>());
                }
            }
        };
        exponents("lambdas", c.lambdas);
        exponents("rhos", c.rhos);
        if (j.contains("degrees")) c.degrees = j["degrees"].get<std::vector<std::size_t>>();
        if (j.contains("c_int")) c.c_int_override = j["c_int"].get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
    for (std::size_t d : c.dims)
        if (d < 2 || d > 5) throw ParseError("config: dims must lie in 2..5");
    if (c.mesh_family != "random-delaunay" && c.mesh_family != "coxeter" &&
        c.mesh_family != "structured-grid")
        throw ParseError("config: unknown mesh_family " + c.mesh_family);
    for (std::size_t k : c.degrees)
        if (k < 1 || k > kMaxLagrangeDegree) throw ParseError("config: degrees must lie in 1..6");
    return c;
}

struct CalibrationRecord {
    double c_int_empirical = 0.0;
    double safety_factor = 2.0;
    double c_int_used = 0.0;
    double held_out_pass_rate = 0.0;
    std::size_t n_calibration = 0;
    std::size_t n_held_out = 0;
};

namespace detail {

// Total degree of the named field when it is polynomial, else -1.
inline int field_poly_degree(const std::string& name, std::size_t d) {
    if (name == "affine") return 1;
    if (name == "paraboloid") return 2;
    if (name == "quadratic-bubble") return static_cast<int>(2 * d);
    return -1;
}

inline SimplicialMesh family_mesh(const std::string& family, std::size_t d, std::size_t level,
                                  std::uint64_t seed) {
    if (family == "structured-grid") return structured_grid(d, level);
    if (family == "coxeter") {
        CoxeterSpec spec;
        spec.dim = d;
        spec.scale = 1.0 / static_cast<double>(level);
        spec.box.assign(d, {0.0, 1.0});
        return generate_coxeter(spec);
    }
    return random_delaunay_mesh(d, level, seed);
}

// Worst ratio LHS / RHS(c_int = 1) over the section-4 checks for one pair.
inline double interp_ratio(const ScalarField& v, const SimplicialMesh& m,
                           const QualityReport& q, std::size_t k,
                           const std::vector<double>& rhos, const std::vector<double>& lambdas,
                           const QuadratureRule& rule) {
    double worst = 0.0;
    for (double rho : rhos) {
        const BoundCheckResult r = interp_bound_l2(v, m, q, k, rho, 1.0, rule);
        if (r.rhs > 0.0) worst = std::max(worst, r.lhs / r.rhs);
    }
    for (double lambda : lambdas) {
        const BoundCheckResult r = interp_bound_llambda(v, m, q, k, lambda, 1.0, rule);
        if (r.rhs > 0.0) worst = std::max(worst, r.lhs / r.rhs);
    }
    return worst;
}

}  // namespace detail

// Empirical interpolation constant: max LHS/RHS over a calibration split,
// inflated by the safety factor and verified on the disjoint held-out split.
inline CalibrationRecord calibrate_c_int(const ExperimentConfig& cfg,
                                         std::size_t pairs_per_case = 6) {
    CalibrationRecord rec;
    std::vector<double> calibration, held_out;
    for (std::size_t d : cfg.dims) {
        if (d > 3) continue;  // desk-scale sweep dimensions
        const QuadratureRule rule = quadrature_rule(d, 6);
        for (std::size_t k : cfg.degrees) {
            for (const std::string& name : cfg.fields) {
                // gradients of low-degree polynomials are reproduced exactly
                const int deg = detail::field_poly_degree(name, d);
                if (deg >= 0 && static_cast<std::size_t>(deg) <= k + 1) continue;
                const ScalarField v = scalar_field(name, d);
                for (std::size_t i = 0; i < pairs_per_case; ++i) {
                    const std::size_t level = cfg.levels[i % cfg.levels.size()];
                    const std::uint64_t seed = cfg.seed + 7919 * i + 131 * d + 17 * k;
                    const SimplicialMesh m =
                        detail::family_mesh(cfg.mesh_family, d, level, seed);
                    const QualityReport q = quality_report(m);
                    const double ratio =
                        detail::interp_ratio(v, m, q, k, cfg.rhos, cfg.lambdas, rule);
                    (i % 2 == 0 ? calibration : held_out).push_back(ratio);
                }
            }
        }
    }
    if (calibration.empty()) throw std::invalid_argument("calibrate_c_int: empty split");
    for (double r : calibration) rec.c_int_empirical = std::max(rec.c_int_empirical, r);
    rec.c_int_used = rec.safety_factor * rec.c_int_empirical;
    rec.n_calibration = calibration.size();
    rec.n_held_out = held_out.size();
    std::size_t passed = 0;
    for (double r : held_out)
        if (r <= rec.c_int_used * (1.0 + 1e-9)) ++passed;
    rec.held_out_pass_rate =
        held_out.empty() ? 1.0 : static_cast<double>(passed) / static_cast<double>(held_out.size());
    return rec;
}

// Remark pair on a protected mesh: C_Xi >= delta^2/(8 d eps^2) and
// C_sigma <= 4(d+1) eps^2/delta^2. Vacuous pass when delta is 0 or infinite.
inline std::pair<BoundCheckResult, BoundCheckResult> protection_thickness_check(
    const SimplicialMesh& m) {
    const std::size_t d = m.dim();
    const ProtectionReport pr = protection_report(m);
    if (!(pr.delta > 0.0) || std::isinf(pr.delta)) {
        BoundCheckResult a = make_check("protection_thickness", 0.0, 0.0,
                                        {{"delta", pr.delta}, {"vacuous", 1.0}});
        BoundCheckResult b =
            make_check("protection_sigma", 0.0, 0.0, {{"delta", pr.delta}, {"vacuous", 1.0}});
        a.pass = b.pass = true;
        return {a, b};
    }
    const NetParameters np = net_parameters(m.points, m);
    const QualityReport q = quality_report(m);
    const double dd = static_cast<double>(d);
    BoundCheckResult a = make_check(
        "protection_thickness", pr.delta * pr.delta / (8.0 * dd * np.epsilon * np.epsilon),
        q.c_xi, {{"delta", pr.delta}, {"epsilon", np.epsilon}, {"c_xi", q.c_xi}});
    BoundCheckResult b = make_check(
        "protection_sigma", q.c_sigma,
        4.0 * (dd + 1.0) * np.epsilon * np.epsilon / (pr.delta * pr.delta),
        {{"delta", pr.delta}, {"epsilon", np.epsilon}, {"c_sigma", q.c_sigma}});
    return {a, b};
}

struct SuiteReport {
    CalibrationRecord calibration;
    std::vector<BoundCheckResult> checks;
    bool pass = true;
};

// Every inequality family evaluated over the configured dimensions, meshes
// and fields; the suite passes iff every individual check passes.
inline std::vector<BoundCheckResult> run_inequality_suite(const ExperimentConfig& cfg,
                                                          double c_int) {
    std::vector<BoundCheckResult> out;
    auto tag = [](BoundCheckResult r, std::size_t d, const std::string& extra) {
        r.name += "/d" + std::to_string(d);
        if (!extra.empty()) r.name += "/" + extra;
        return r;
    };
    for (std::size_t d : cfg.dims) {
        if (d > 3) continue;
        const QuadratureRule rule = quadrature_rule(d, 6);
        const std::size_t level = cfg.levels.empty() ? 12 : cfg.levels.front();
        const SimplicialMesh m = detail::family_mesh(cfg.mesh_family, d, level, cfg.seed);
        const QualityReport q = quality_report(m);

        out.push_back(tag(make_check("theta_upper", q.theta, theta_upper_bound(q, d),
                                     {{"r_max", q.r_max}, {"card", double(q.card)}}),
                          d, ""));

        for (const std::string& name : cfg.fields) {
            const ScalarField v = scalar_field(name, d);
            auto [lower, upper] = equivalence_bounds(v, m, q, rule);
            out.push_back(tag(lower, d, name));
            out.push_back(tag(upper, d, name));
            for (double rho : cfg.rhos) {
                std::ostringstream label;
                label << name << "/rho" << rho;
                out.push_back(tag(lemma2_bound(v, m, q, rho, rule), d, label.str()));
            }
            for (std::size_t k : cfg.degrees) {
                for (double rho : cfg.rhos) {
                    std::ostringstream label;
                    label << name << "/k" << k << "/rho" << rho;
                    out.push_back(
                        tag(interp_bound_l2(v, m, q, k, rho, c_int, rule), d, label.str()));
                    out.push_back(tag(vector_bound_l2(gradient_field(v), m, q, k, rho, c_int,
                                                      rule),
                                      d, label.str()));
                }
                for (double lambda : cfg.lambdas) {
                    std::ostringstream label;
                    label << name << "/k" << k << "/lambda" << lambda;
                    out.push_back(
                        tag(interp_bound_llambda(v, m, q, k, lambda, c_int, rule), d,
                            label.str()));
                    out.push_back(tag(vector_bound_llambda(gradient_field(v), m, q, k, lambda,
                                                           c_int, rule),
                                      d, label.str()));
                }
            }
        }

        // discrete Poisson chain on a structured grid with boundary data
        {
            const std::size_t n = (d == 2) ? 8 : 4;
            const SimplicialMesh grid = structured_grid(d, n);
            PoissonProblem p = mms_problem("sine-product", grid);
            const AssembledSystem sys = assemble(p);
            const DiscreteSolution sol = solve(p, sys);
            const QualityReport gq = quality_report(grid);
            const ApproximationChecks ac = approximation_bounds(p, sol, gq, c_int, rule);
            out.push_back(tag(ac.cea, d, "sine-product"));
            out.push_back(tag(ac.theorem_a, d, "sine-product"));
            out.push_back(tag(ac.theorem_b, d, "sine-product"));
        }

        // protection remarks on a lattice patch
        if (d <= 4) {
            CoxeterSpec spec;
            spec.dim = d;
            spec.scale = 0.5;
            spec.box.assign(d, {0.0, 2.0});
            const SimplicialMesh patch = generate_coxeter(spec);
            auto [r1, r2] = protection_thickness_check(patch);
            out.push_back(tag(r1, d, "coxeter"));
            out.push_back(tag(r2, d, "coxeter"));
        }
    }
    return out;
}

inline SuiteReport run_full_suite(const ExperimentConfig& cfg) {
    SuiteReport rep;
    if (cfg.fields.empty()) return rep;
    if (cfg.c_int_override) {
        rep.calibration.c_int_empirical = *cfg.c_int_override;
        rep.calibration.safety_factor = 1.0;
        rep.calibration.c_int_used = *cfg.c_int_override;
        rep.calibration.held_out_pass_rate = 1.0;
    } else {
        rep.calibration = calibrate_c_int(cfg);
        if (rep.calibration.held_out_pass_rate < 1.0) rep.pass = false;
    }
    rep.checks = run_inequality_suite(cfg, rep.calibration.c_int_used);
    for (const BoundCheckResult& r : rep.checks)
        if (!r.pass) rep.pass = false;
    return rep;
}

inline void write_suite_json(const SuiteReport& rep, std::ostream& out) {
    using detail::fmt17;
    out << "{\"calibration\":{\"c_int_empirical\":" << fmt17(rep.calibration.c_int_empirical)
        << ",\"safety_factor\":" << fmt17(rep.calibration.safety_factor)
        << ",\"c_int_used\":" << fmt17(rep.calibration.c_int_used)
        << ",\"held_out_pass_rate\":" << fmt17(rep.calibration.held_out_pass_rate)
        << ",\"n_calibration\":" << rep.calibration.n_calibration
        << ",\"n_held_out\":" << rep.calibration.n_held_out << "},\"checks\":[";
    for (std::size_t i = 0; i < rep.checks.size(); ++i) {
        if (i) out << ',';
        write_bound_check_json(rep.checks[i], out);
    }
    out << "],\"pass\":" << (rep.pass ? "true" : "false") << "}\n";
}

inline void write_suite_csv(const SuiteReport& rep, std::ostream& out) {
    using detail::fmt17;
    out << "name,lhs,rhs,slack,pass\n";
    for (const BoundCheckResult& r : rep.checks)
        out << r.name << ',' << fmt17(r.lhs) << ',' << fmt17(r.rhs) << ',' << fmt17(r.slack)
            << ',' << (r.pass ? "true" : "false") << '\n';
}

struct OptimalityRow {
    std::size_t point_set = 0;
    std::size_t alternative = 0;
    std::size_t flips = 0;
    double theta_delaunay = 0.0, theta_alt = 0.0;
    double r_max_delaunay = 0.0, r_max_alt = 0.0;
    bool theta_ok = false, r_ok = false;
};

struct OptimalityTable {
    std::vector<OptimalityRow> rows;
    std::size_t violations = 0;
};

namespace detail {

// One random legal edge flip in a 2D triangulation; false when none applies.
inline bool random_edge_flip(const SimplicialMesh& m, std::vector<std::vector<int>>& cells,
                             std::mt19937_64& rng) {
    std::map<std::pair<int, int>, std::vector<std::size_t>> edge_cells;
    for (std::size_t c = 0; c < cells.size(); ++c)
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < i; ++j)
                edge_cells[{std::min(cells[c][i], cells[c][j]),
                            std::max(cells[c][i], cells[c][j])}]
                    .push_back(c);
    std::vector<std::pair<std::pair<int, int>, std::pair<std::size_t, std::size_t>>> interior;
    for (const auto& [e, inc] : edge_cells)
        if (inc.size() == 2) interior.push_back({e, {inc[0], inc[1]}});

    auto pt = [&](int v) { return m.points.points[static_cast<std::size_t>(v)]; };
    std::vector<std::size_t> order(interior.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t idx : order) {
        const auto& [edge, pair] = interior[idx];
        const auto [a, b] = edge;
        int c = -1, d2 = -1;
        for (int v : cells[pair.first])
            if (v != a && v != b) c = v;
        for (int v : cells[pair.second])
            if (v != a && v != b) d2 = v;
        // the quad a-c-b-d must be strictly convex for the flip to be legal
        const int s1 = orientation({pt(a), pt(b), pt(c)});
        const int s2 = orientation({pt(a), pt(b), pt(d2)});
        const int s3 = orientation({pt(c), pt(d2), pt(a)});
        const int s4 = orientation({pt(c), pt(d2), pt(b)});
        if (s1 == 0 || s2 == 0 || s3 == 0 || s4 == 0) continue;
        if (s1 == s2 || s3 == s4) continue;
        cells[pair.first] = {std::min({a, c, d2}), 0, std::max({a, c, d2})};
        cells[pair.first][1] = a + c + d2 - cells[pair.first][0] - cells[pair.first][2];
        cells[pair.second] = {std::min({b, c, d2}), 0, std::max({b, c, d2})};
        cells[pair.second][1] = b + c + d2 - cells[pair.second][0] - cells[pair.second][2];
        return true;
    }
    return false;
}

}  // namespace detail

// Theta and R_max minimality of the 2D Delaunay triangulation against
// flip-generated alternative triangulations of the same point set.
inline OptimalityTable delaunay_optimality_2d(std::uint64_t seed, std::size_t n_points,
                                              std::size_t n_alternatives) {
    if (n_points < 4) throw std::invalid_argument("delaunay_optimality_2d: need >= 4 points");
    const SimplicialMesh del = random_delaunay_mesh(2, n_points, seed);
    const QualityReport dq = quality_report(del);
    OptimalityTable table;
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    for (std::size_t alt = 0; alt < n_alternatives; ++alt) {
        std::vector<std::vector<int>> cells = del.cells;
        const std::size_t target = 1 + rng() % 10;
        std::size_t done = 0;
        for (std::size_t f = 0; f < target; ++f)
            if (detail::random_edge_flip(del, cells, rng)) ++done;
        SimplicialMesh m;
        m.points = del.points;
        m.cells = cells;
        std::sort(m.cells.begin(), m.cells.end());
        m.build_adjacency();
        const QualityReport q = quality_report(m);
        OptimalityRow row;
        row.point_set = static_cast<std::size_t>(seed);
        row.alternative = alt;
        row.flips = done;
        row.theta_delaunay = dq.theta;
        row.theta_alt = q.theta;
        row.r_max_delaunay = dq.r_max;
        row.r_max_alt = q.r_max;
        row.theta_ok = dq.theta <= q.theta * (1.0 + 1e-9) + 1e-12;
        row.r_ok = dq.r_max <= q.r_max * (1.0 + 1e-9) + 1e-12;
        if (!row.theta_ok || !row.r_ok) ++table.violations;
        table.rows.push_back(row);
    }
    return table;
}

struct ConvergenceRow {
    std::string quantity;
    std::size_t dim = 0;
    std::size_t degree = 0;
    std::vector<double> errors;
    double slope = 0.0;
    double r_squared = 0.0;
    bool exact = false;  // all errors at the rounding floor
};

namespace detail {

inline void fit_loglog(const std::vector<double>& h, ConvergenceRow& row) {
    bool all_tiny = true;
    for (double e : row.errors)
        if (e > 1e-12) all_tiny = false;
    if (all_tiny) {
        row.exact = true;
        row.slope = 0.0;
        row.r_squared = 1.0;
        return;
    }
    const std::size_t n = h.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = std::log(h[i]);
        const double y = std::log(row.errors[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    const double nn = static_cast<double>(n);
    row.slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
    const double denom = (nn * sxx - sx * sx) * (nn * syy - sy * sy);
    row.r_squared = denom > 0.0 ? (nn * sxy - sx * sy) * (nn * sxy - sx * sy) / denom : 1.0;
}

}  // namespace detail

// Log-log decay rates on uniformly refined structured grids: the gradient
// interpolation error for every (field, k, d), and the discrete H1 error.
inline std::vector<ConvergenceRow> convergence_study(const ExperimentConfig& cfg) {
    if (cfg.levels.size() < 3)
        throw std::invalid_argument("convergence_study: need >= 3 refinement levels");
    std::vector<ConvergenceRow> out;
    for (std::size_t d : cfg.dims) {
        if (d > 3) continue;
        const QuadratureRule rule = quadrature_rule(d, 6);
        // 3D meshes grow like n^3; halve the grid sizes there
        std::vector<std::size_t> ns;
        for (std::size_t lv : cfg.levels) ns.push_back(d == 3 ? std::max<std::size_t>(2, lv / 2) : lv);
        std::vector<double> hs;
        std::vector<SimplicialMesh> grids;
        for (std::size_t n : ns) {
            grids.push_back(structured_grid(d, n));
            hs.push_back(1.0 / static_cast<double>(n));
        }
        for (const std::string& name : cfg.fields) {
            const ScalarField v = scalar_field(name, d);
            const VectorField g = gradient_field(v);
            for (std::size_t k : cfg.degrees) {
                ConvergenceRow row;
                row.quantity = "grad_interp_l2/" + name;
                row.dim = d;
                row.degree = k;
                for (const SimplicialMesh& m : grids)
                    row.errors.push_back(vector_interp_error(g, m, k, 2.0, rule));
                detail::fit_loglog(hs, row);
                out.push_back(row);
            }
        }
        {
            ConvergenceRow row;
            row.quantity = "fem_h1/sine-product";
            row.dim = d;
            row.degree = 1;
            for (const SimplicialMesh& m : grids) {
                PoissonProblem p = mms_problem("sine-product", m);
                const AssembledSystem sys = assemble(p);
                const DiscreteSolution sol = solve(p, sys);
                row.errors.push_back(gradient_error(p, sol.nodal, rule));
            }
            detail::fit_loglog(hs, row);
            out.push_back(row);
        }
    }
    return out;
}

inline void write_convergence_csv(const std::vector<ConvergenceRow>& rows, std::ostream& out) {
    using detail::fmt17;
    out << "quantity,dim,degree,slope,r_squared,exact\n";
    for (const ConvergenceRow& r : rows)
        out << r.quantity << ',' << r.dim << ',' << r.degree << ',' << fmt17(r.slope) << ','
            << fmt17(r.r_squared) << ',' << (r.exact ? "true" : "false") << '\n';
}

}  // namespace promesh
