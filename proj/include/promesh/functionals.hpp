#pragma once

// The edge/roughness functional, integral norms of gradients and Hessians,
// the dimensional constants of the equivalence and upper-bound lemmas, and
// evaluators producing pass/fail records for every inequality the toolkit
// checks.

#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "promesh/fields.hpp"
#include "promesh/interp.hpp"
#include "promesh/quality.hpp"

namespace promesh {

inline double c_d_constant(std::size_t d) {
    return std::sqrt(static_cast<double>(d) * static_cast<double>(d + 1) / 2.0);
}

// sqrt(d * (2(d+1))^(1/rho)); decreases to sqrt(d) as rho -> infinity.
inline double c_rho_constant(std::size_t d, double rho) {
    if (rho <= 1.0) throw std::invalid_argument("c_rho_constant: rho must be > 1");
    const double inv = std::isinf(rho) ? 0.0 : 1.0 / rho;
    return std::sqrt(static_cast<double>(d) *
                     std::pow(2.0 * static_cast<double>(d + 1), inv));
}

struct BoundCheckResult {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    std::vector<std::pair<std::string, double>> constants;
    double slack = 0.0;
    bool pass = false;
};

inline BoundCheckResult make_check(std::string name, double lhs, double rhs,
                                   std::vector<std::pair<std::string, double>> constants) {
    BoundCheckResult r;
    r.name = std::move(name);
    r.lhs = lhs;
    r.rhs = rhs;
    r.constants = std::move(constants);
    r.slack = rhs - lhs;
    // relative slack 1e-9, plus an absolute floor so that analytically-zero
    // sides are not failed on quadrature roundoff
    r.pass = lhs <= rhs * (1.0 + 1e-9) + 1e-12;
    return r;
}

inline void write_bound_check_json(const BoundCheckResult& r, std::ostream& out) {
    using detail::fmt17;
    out << "{\"name\":\"" << r.name << "\",\"lhs\":" << fmt17(r.lhs)
        << ",\"rhs\":" << fmt17(r.rhs) << ",\"constants\":{";
    for (std::size_t i = 0; i < r.constants.size(); ++i) {
        if (i) out << ',';
        out << '\"' << r.constants[i].first << "\":" << fmt17(r.constants[i].second);
    }
    out << "},\"slack\":" << fmt17(r.slack) << ",\"pass\":" << (r.pass ? "true" : "false")
        << '}';
}

// Psi(w)^2 = sum_K (1/Delta(K)^2) int_K sum_{i>j} (|w| . |p_ij|)^2 dV,
// with |.| taken component-wise on both the field value and the edge.
inline double roughness(const std::function<Point(const Point&)>& w, const SimplicialMesh& m,
                        const QuadratureRule& rule) {
    if (rule.dim != m.dim()) throw std::invalid_argument("roughness: rule dimension mismatch");
    const std::size_t d = m.dim();
    double total = 0.0;
    for (std::size_t c = 0; c < m.cells.size(); ++c) {
        const Simplex s = m.cell_simplex(c);
        const AffineMap map = affine_map(s);
        std::vector<Point> edges;
        for (std::size_t i = 0; i <= d; ++i)
            for (std::size_t j = 0; j < i; ++j) {
                Point e = sub(s.vertices[i], s.vertices[j]);
                for (double& x : e) x = std::fabs(x);
                edges.push_back(std::move(e));
            }
        const double delta = diameter(s);
        double cell = 0.0;
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const Point x = map.map(rule.nodes[q]);
            Point wv = w(x);
            if (wv.size() != d) throw std::invalid_argument("roughness: field dimension mismatch");
            for (double& v : wv) v = std::fabs(v);
            double sum = 0.0;
            for (const Point& e : edges) {
                const double t = dot(wv, e);
                sum += t * t;
            }
            cell += rule.weights[q] * sum;
        }
        total += std::fabs(map.det_a) * cell / (delta * delta);
    }
    return std::sqrt(total);
}

inline double gradient_norm(const ScalarField& v, const SimplicialMesh& m, double rho,
                            const QuadratureRule& rule) {
    return lp_norm(m, rule, rho,
                   [&](std::size_t, const Point& x) { return norm2(v.grad(x)); });
}

// Entry-wise (Frobenius) norm of the Hessian.
inline double hessian_norm(const ScalarField& v, const SimplicialMesh& m, double rho,
                           const QuadratureRule& rule) {
    return lp_norm(m, rule, rho, [&](std::size_t, const Point& x) {
        const Mat h = v.hess(x);
        double s = 0.0;
        for (double e : h.a) s += e * e;
        return std::sqrt(s);
    });
}

inline double jacobian_norm(const VectorField& f, const SimplicialMesh& m, double rho,
                            const QuadratureRule& rule) {
    return lp_norm(m, rule, rho, [&](std::size_t, const Point& x) {
        const Mat j = f.jacobian(x);
        double s = 0.0;
        for (double e : j.a) s += e * e;
        return std::sqrt(s);
    });
}

// Sandwich: C_d * C_Xi * ||grad v|| <= Psi(grad v) <= C_Upsilon * ||grad v||.
inline std::pair<BoundCheckResult, BoundCheckResult> equivalence_bounds(
    const ScalarField& v, const SimplicialMesh& m, const QualityReport& q,
    const QuadratureRule& rule) {
    const double psi = roughness(v.grad, m, rule);
    const double gn = gradient_norm(v, m, 2.0, rule);
    const double cd = c_d_constant(m.dim());
    BoundCheckResult lower = make_check(
        "equivalence_lower", cd * q.c_xi * gn, psi,
        {{"c_d", cd}, {"c_xi", q.c_xi}, {"grad_norm_l2", gn}, {"psi", psi}});
    BoundCheckResult upper = make_check(
        "equivalence_upper", psi, q.c_upsilon * gn,
        {{"c_upsilon", q.c_upsilon}, {"grad_norm_l2", gn}, {"psi", psi}});
    return {lower, upper};
}

// Psi(grad v) <= C_rho * Theta^((rho-1)/2rho) * (R_max^(1/rho) / min Delta) * ||grad v||_{L_2rho};
// rho = infinity via the exponent limits 1/2 and 0 with the sup norm.
inline BoundCheckResult lemma2_bound(const ScalarField& v, const SimplicialMesh& m,
                                     const QualityReport& q, double rho,
                                     const QuadratureRule& rule) {
    if (rho <= 1.0) throw std::invalid_argument("lemma2_bound: rho must be > 1");
    const double psi = roughness(v.grad, m, rule);
    const double crho = c_rho_constant(m.dim(), rho);
    const double theta_exp = std::isinf(rho) ? 0.5 : (rho - 1.0) / (2.0 * rho);
    const double r_exp = std::isinf(rho) ? 0.0 : 1.0 / rho;
    const double norm_order = std::isinf(rho) ? rho : 2.0 * rho;
    const double gn = gradient_norm(v, m, norm_order, rule);
    const double min_delta = min_diameter(q);
    const double rhs = crho * std::pow(q.theta, theta_exp) *
                       (std::pow(q.r_max, r_exp) / min_delta) * gn;
    return make_check("iso_upper", psi, rhs,
                      {{"c_rho", crho},
                       {"rho", rho},
                       {"theta", q.theta},
                       {"r_max", q.r_max},
                       {"min_delta", min_delta},
                       {"grad_norm", gn}});
}

namespace detail {

// Component-wise interpolant of a vector field; evaluator is (cell, x).
inline std::function<Point(std::size_t, const Point&)> interpolate_vector(
    const VectorField& f, const SimplicialMesh& m, std::size_t k,
    std::vector<GlobalInterpolant>& store) {
    store.clear();
    for (std::size_t comp = 0; comp < f.components; ++comp) {
        auto g = [&f, comp](const Point& x) { return f.value(x)[comp]; };
        store.push_back(interpolate_global(g, m, k));
    }
    return [&store](std::size_t c, const Point& x) {
        Point out(store.size());
        for (std::size_t comp = 0; comp < store.size(); ++comp)
            out[comp] = store[comp].eval_on_cell(c, x);
        return out;
    };
}

}  // namespace detail

// ||f - I_h f||_{L_lambda} for a vector field, lambda in [1, inf].
inline double vector_interp_error(const VectorField& f, const SimplicialMesh& m, std::size_t k,
                                  double lambda, const QuadratureRule& rule) {
    std::vector<GlobalInterpolant> store;
    auto ih = detail::interpolate_vector(f, m, k, store);
    const ReferenceBasis& basis = reference_basis(m.dim(), k);
    return lp_norm(
        m, rule, lambda,
        [&](std::size_t c, const Point& x) { return norm2(sub(f.value(x), ih(c, x))); },
        &basis);
}

// ||f - I_h f||_{L2} <= (C_int C_rho / C_d) * (C_Delta R_max^(1/rho) Theta^((rho-1)/2rho) / C_Xi)
//                       * ||grad f||_{L_2rho}
inline BoundCheckResult vector_bound_l2(const VectorField& f, const SimplicialMesh& m,
                                        const QualityReport& q, std::size_t k, double rho,
                                        double c_int, const QuadratureRule& rule,
                                        const char* name = "vector_interp_l2") {
    if (rho <= 1.0) throw std::invalid_argument("vector_bound_l2: rho must be > 1");
    const double lhs = vector_interp_error(f, m, k, 2.0, rule);
    const double cd = c_d_constant(m.dim());
    const double crho = c_rho_constant(m.dim(), rho);
    const double theta_exp = std::isinf(rho) ? 0.5 : (rho - 1.0) / (2.0 * rho);
    const double r_exp = std::isinf(rho) ? 0.0 : 1.0 / rho;
    const double norm_order = std::isinf(rho) ? rho : 2.0 * rho;
    const double jn = jacobian_norm(f, m, norm_order, rule);
    const double rhs = (c_int * crho / cd) *
                       (q.c_delta * std::pow(q.r_max, r_exp) * std::pow(q.theta, theta_exp) /
                        q.c_xi) *
                       jn;
    return make_check(name, lhs, rhs,
                      {{"c_int", c_int},
                       {"c_rho", crho},
                       {"c_d", cd},
                       {"rho", rho},
                       {"c_delta", q.c_delta},
                       {"r_max", q.r_max},
                       {"theta", q.theta},
                       {"c_xi", q.c_xi},
                       {"jacobian_norm", jn}});
}

// ||f - I_h f||_{L_lambda} <= 2 C_int R_max ||grad f||_{L_lambda}
inline BoundCheckResult vector_bound_llambda(const VectorField& f, const SimplicialMesh& m,
                                             const QualityReport& q, std::size_t k,
                                             double lambda, double c_int,
                                             const QuadratureRule& rule,
                                             const char* name = "vector_interp_llambda") {
    const double lhs = vector_interp_error(f, m, k, lambda, rule);
    const double jn = jacobian_norm(f, m, lambda, rule);
    const double rhs = 2.0 * c_int * q.r_max * jn;
    return make_check(
        name, lhs, rhs,
        {{"c_int", c_int}, {"lambda", lambda}, {"r_max", q.r_max}, {"jacobian_norm", jn}});
}

// Scalar gradient-interpolation bounds: the vector checks applied to grad v.
inline BoundCheckResult interp_bound_l2(const ScalarField& v, const SimplicialMesh& m,
                                        const QualityReport& q, std::size_t k, double rho,
                                        double c_int, const QuadratureRule& rule) {
    return vector_bound_l2(gradient_field(v), m, q, k, rho, c_int, rule, "grad_interp_l2");
}

inline BoundCheckResult interp_bound_llambda(const ScalarField& v, const SimplicialMesh& m,
                                             const QualityReport& q, std::size_t k,
                                             double lambda, double c_int,
                                             const QuadratureRule& rule) {
    return vector_bound_llambda(gradient_field(v), m, q, k, lambda, c_int, rule,
                                "grad_interp_llambda");
}

}  // namespace promesh
