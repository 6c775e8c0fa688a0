#pragma once

// Lagrange machinery on the reference simplex: equispaced principal-lattice
// nodes, basis coefficients from a cached monomial Vandermonde solve,
// affine element maps, local/global interpolation, and integral norms.

#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <vector>

#include "promesh/fields.hpp"
#include "promesh/mesh.hpp"
#include "promesh/quadrature.hpp"

namespace promesh {

inline constexpr std::size_t kMaxLagrangeDegree = 6;

struct ReferenceBasis {
    std::size_t dim = 0;
    std::size_t degree = 0;
    std::vector<Point> nodes;            // N_p principal-lattice points
    std::vector<std::vector<int>> exps;  // monomial exponents, |e| <= k
    Mat coeffs;                          // row j: L_j in the monomial basis
    double cond_estimate = 0.0;          // inf-norm condition of the Vandermonde
};

namespace detail {

inline void lattice_multi_indices(std::size_t d, std::size_t k, std::vector<int>& cur,
                                  std::vector<std::vector<int>>& out) {
    if (cur.size() == d) {
        out.push_back(cur);
        return;
    }
    int used = 0;
    for (int v : cur) used += v;
    for (int v = 0; v <= static_cast<int>(k) - used; ++v) {
        cur.push_back(v);
        lattice_multi_indices(d, k, cur, out);
        cur.pop_back();
    }
}

inline double eval_monomial(const Point& x, const std::vector<int>& e) {
    double v = 1.0;
    for (std::size_t j = 0; j < x.size(); ++j)
        for (int k = 0; k < e[j]; ++k) v *= x[j];
    return v;
}

}  // namespace detail

inline const ReferenceBasis& reference_basis(std::size_t d, std::size_t k) {
    if (d < 1 || k < 1 || k > kMaxLagrangeDegree)
        throw std::invalid_argument("reference_basis: unsupported dimension or degree");
    static std::map<std::pair<std::size_t, std::size_t>, ReferenceBasis> cache;
    auto it = cache.find({d, k});
    if (it != cache.end()) return it->second;

    ReferenceBasis basis;
    basis.dim = d;
    basis.degree = k;
    std::vector<int> cur;
    detail::lattice_multi_indices(d, k, cur, basis.exps);
    const std::size_t np = basis.exps.size();
    for (const auto& a : basis.exps) {
        Point x(d);
        for (std::size_t j = 0; j < d; ++j)
            x[j] = static_cast<double>(a[j]) / static_cast<double>(k);
        basis.nodes.push_back(std::move(x));
    }
    Mat V(np, np);
    for (std::size_t i = 0; i < np; ++i)
        for (std::size_t m = 0; m < np; ++m)
            V(i, m) = detail::eval_monomial(basis.nodes[i], basis.exps[m]);
    // L_j(node_i) = delta_ij means coeffs = V^{-T}.
    Mat Vinv = invert(V);
    basis.cond_estimate = inf_norm(V) * inf_norm(Vinv);
    basis.coeffs = Mat(np, np);
    for (std::size_t j = 0; j < np; ++j)
        for (std::size_t m = 0; m < np; ++m) basis.coeffs(j, m) = Vinv(m, j);
    return cache.emplace(std::make_pair(d, k), std::move(basis)).first->second;
}

inline double eval_basis_function(const ReferenceBasis& b, std::size_t j, const Point& xi) {
    double v = 0.0;
    for (std::size_t m = 0; m < b.exps.size(); ++m)
        v += b.coeffs(j, m) * detail::eval_monomial(xi, b.exps[m]);
    return v;
}

struct AffineMap {
    Mat A;       // columns p_i - p_0
    Point b;     // p_0
    Mat A_inv;
    double det_a = 0.0;

    Point map(const Point& xi) const {
        Point x = b;
        for (std::size_t i = 0; i < A.rows; ++i)
            for (std::size_t j = 0; j < A.cols; ++j) x[i] += A(i, j) * xi[j];
        return x;
    }
    Point inverse_map(const Point& x) const {
        Point xi(A.rows, 0.0);
        for (std::size_t i = 0; i < A.rows; ++i)
            for (std::size_t j = 0; j < A.cols; ++j) xi[i] += A_inv(i, j) * (x[j] - b[j]);
        return xi;
    }
};

inline AffineMap affine_map(const Simplex& s) {
    s.check();
    const std::size_t d = s.dim();
    AffineMap m;
    m.A = Mat(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) m.A(i, j) = s.vertices[j + 1][i] - s.vertices[0][i];
    m.b = s.vertices[0];
    m.det_a = det(m.A);
    if (m.det_a == 0.0) throw DegenerateSimplexError("affine_map: degenerate simplex");
    m.A_inv = invert(m.A);
    return m;
}

// Nodal interpolant of a scalar function on one element.
struct LocalInterpolant {
    const ReferenceBasis* basis = nullptr;
    AffineMap map;
    std::vector<double> values;  // at the mapped nodes

    double eval(const Point& x) const {
        const Point xi = map.inverse_map(x);
        double v = 0.0;
        for (std::size_t j = 0; j < values.size(); ++j)
            v += values[j] * eval_basis_function(*basis, j, xi);
        return v;
    }
};

inline LocalInterpolant interpolate_local(const std::function<double(const Point&)>& g,
                                          const Simplex& s, const ReferenceBasis& basis) {
    LocalInterpolant li;
    li.basis = &basis;
    li.map = affine_map(s);
    for (const Point& xi : basis.nodes) li.values.push_back(g(li.map.map(xi)));
    return li;
}

// Element-wise interpolant over a mesh; discontinuities across facets are
// allowed (gradient/vector interpolation needs them).
struct GlobalInterpolant {
    const SimplicialMesh* mesh = nullptr;
    std::vector<LocalInterpolant> local;

    double eval_on_cell(std::size_t c, const Point& x) const { return local[c].eval(x); }

    double eval(const Point& x) const {
        for (std::size_t c = 0; c < mesh->cells.size(); ++c)
            if (detail::point_in_simplex(mesh->cell_simplex(c), x, 1e-9)) return local[c].eval(x);
        throw std::invalid_argument("GlobalInterpolant::eval: point outside mesh");
    }
};

inline GlobalInterpolant interpolate_global(const std::function<double(const Point&)>& g,
                                            const SimplicialMesh& m, std::size_t k) {
    const ReferenceBasis& basis = reference_basis(m.dim(), k);
    GlobalInterpolant gi;
    gi.mesh = &m;
    for (std::size_t c = 0; c < m.cells.size(); ++c)
        gi.local.push_back(interpolate_local(g, m.cell_simplex(c), basis));
    return gi;
}

// Integral of g over the mesh; g receives (cell index, physical point).
inline double integrate(const SimplicialMesh& m, const QuadratureRule& rule,
                        const std::function<double(std::size_t, const Point&)>& g) {
    if (rule.dim != m.dim()) throw std::invalid_argument("integrate: rule dimension mismatch");
    double total = 0.0;
    for (std::size_t c = 0; c < m.cells.size(); ++c) {
        const AffineMap map = affine_map(m.cell_simplex(c));
        const double jac = std::fabs(map.det_a);
        double cell = 0.0;
        for (std::size_t q = 0; q < rule.nodes.size(); ++q)
            cell += rule.weights[q] * g(c, map.map(rule.nodes[q]));
        total += jac * cell;
    }
    return total;
}

// L_rho norm of a non-negative magnitude function; rho = infinity uses the
// max over quadrature nodes, element vertices and (optionally) the mapped
// nodes of `sup_basis`.
inline double lp_norm(const SimplicialMesh& m, const QuadratureRule& rule, double rho,
                      const std::function<double(std::size_t, const Point&)>& mag,
                      const ReferenceBasis* sup_basis = nullptr) {
    if (std::isinf(rho)) {
        double best = 0.0;
        for (std::size_t c = 0; c < m.cells.size(); ++c) {
            const Simplex s = m.cell_simplex(c);
            const AffineMap map = affine_map(s);
            for (const Point& xi : rule.nodes) best = std::max(best, mag(c, map.map(xi)));
            for (const Point& v : s.vertices) best = std::max(best, mag(c, v));
            if (sup_basis)
                for (const Point& xi : sup_basis->nodes)
                    best = std::max(best, mag(c, map.map(xi)));
        }
        return best;
    }
    if (rho < 1.0) throw std::invalid_argument("lp_norm: rho must be >= 1");
    const double I = integrate(
        m, rule, [&](std::size_t c, const Point& x) { return std::pow(mag(c, x), rho); });
    return std::pow(I, 1.0 / rho);
}

}  // namespace promesh
