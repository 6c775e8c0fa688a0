#pragma once

// Structured A~_d triangulations clipped to a box. Construction: the Kuhn
// (path-simplex) triangulation of the integer lattice pushed through the
// linear map whose Gram matrix is I - J/(d+1), which carries the cubical
// lattice onto the A~_d arrangement. All cells come out congruent and the
// vertex set is protected; both facts are asserted numerically by the
// test suite rather than assumed.

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "promesh/delaunay.hpp"
#include "promesh/mesh.hpp"
#include "promesh/quality.hpp"

namespace promesh {

struct CoxeterSpec {
    std::size_t dim = 2;
    double scale = 1.0;
    std::vector<std::pair<double, double>> box;  // d pairs (lo, hi)
};

namespace detail {

// Cholesky factor L of G = I - J/(d+1); the lattice basis vectors are the
// rows of L (so their Gram matrix is exactly G).
inline Mat coxeter_basis(std::size_t d) {
    Mat G(d, d);
    const double off = -1.0 / static_cast<double>(d + 1);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) G(i, j) = (i == j) ? 1.0 + off : off;
    Mat L(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = G(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= L(i, k) * L(j, k);
            if (i == j) {
                L(i, i) = std::sqrt(s);
            } else {
                L(i, j) = s / L(j, j);
            }
        }
    }
    return L;
}

inline Point map_lattice(const Mat& L, double scale, const std::vector<int>& z) {
    const std::size_t d = L.rows;
    Point x(d, 0.0);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j <= i; ++j) x[j] += static_cast<double>(z[i]) * L(i, j) * scale;
    return x;
}

inline bool in_box(const Point& x, const std::vector<std::pair<double, double>>& box, double tol) {
    for (std::size_t j = 0; j < x.size(); ++j)
        if (x[j] < box[j].first - tol || x[j] > box[j].second + tol) return false;
    return true;
}

}  // namespace detail

inline SimplicialMesh generate_coxeter(const CoxeterSpec& spec) {
    const std::size_t d = spec.dim;
    if (d < 2 || d > kMaxDelaunayDim)
        throw std::invalid_argument("generate_coxeter: dimension out of range (2..5)");
    if (spec.scale <= 0.0) throw std::invalid_argument("generate_coxeter: scale must be > 0");
    if (spec.box.size() != d) throw std::invalid_argument("generate_coxeter: box arity mismatch");
    for (const auto& [lo, hi] : spec.box)
        if (!(lo < hi)) throw std::invalid_argument("generate_coxeter: box with lo >= hi");

    const Mat L = detail::coxeter_basis(d);

    // Lattice search range: preimage of the box corners under the map,
    // padded by one cube layer.
    Mat A(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) A(i, j) = L(j, i) * spec.scale;  // x = A z
    std::vector<int> zlo(d), zhi(d);
    {
        std::vector<double> lo(d, std::numeric_limits<double>::infinity());
        std::vector<double> hi(d, -std::numeric_limits<double>::infinity());
        for (std::size_t corner = 0; corner < (1u << d); ++corner) {
            std::vector<double> x(d);
            for (std::size_t j = 0; j < d; ++j)
                x[j] = (corner & (1u << j)) ? spec.box[j].second : spec.box[j].first;
            LinearSolveResult sol = solve(A, x);
            for (std::size_t j = 0; j < d; ++j) {
                lo[j] = std::min(lo[j], sol.x[j]);
                hi[j] = std::max(hi[j], sol.x[j]);
            }
        }
        for (std::size_t j = 0; j < d; ++j) {
            zlo[j] = static_cast<int>(std::floor(lo[j])) - 1;
            zhi[j] = static_cast<int>(std::ceil(hi[j])) + 1;
        }
    }

    const double tol = 1e-9 * spec.scale;
    std::map<std::vector<int>, int> vert_id;
    std::vector<std::vector<int>> lattice_cells;  // cells as lattice tuples

    // Iterate cubes lexicographically, permutations in lexicographic order:
    // fully deterministic output.
    std::vector<int> z = zlo;
    auto advance = [&]() {
        for (std::size_t j = 0; j < d; ++j) {
            if (++z[j] < zhi[j]) return true;
            z[j] = zlo[j];
        }
        return false;
    };
    std::vector<std::size_t> perm(d);
    do {
        std::iota(perm.begin(), perm.end(), 0);
        do {
            std::vector<std::vector<int>> verts(d + 1, z);
            bool keep = true;
            for (std::size_t k = 1; k <= d; ++k) {
                verts[k] = verts[k - 1];
                verts[k][perm[k - 1]] += 1;
            }
            for (const auto& v : verts)
                if (!detail::in_box(detail::map_lattice(L, spec.scale, v), spec.box, tol)) {
                    keep = false;
                    break;
                }
            if (keep) {
                std::vector<int> flat;
                for (const auto& v : verts) {
                    vert_id.emplace(v, -1);  // index assigned after the scan
                    flat.insert(flat.end(), v.begin(), v.end());
                }
                lattice_cells.push_back(std::move(flat));
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
    } while (advance());

    if (lattice_cells.empty())
        throw std::invalid_argument("generate_coxeter: box too small for any full lattice cell");

    // Indices in sorted lattice order (map iteration order).
    int next = 0;
    for (auto& [key, id] : vert_id) id = next++;

    SimplicialMesh m;
    m.points.dim = d;
    m.points.points.resize(vert_id.size());
    for (const auto& [key, id] : vert_id)
        m.points.points[static_cast<std::size_t>(id)] = detail::map_lattice(L, spec.scale, key);
    for (const auto& flat : lattice_cells) {
        std::vector<int> cell;
        for (std::size_t k = 0; k <= d; ++k) {
            std::vector<int> v(flat.begin() + static_cast<long>(k * d),
                              flat.begin() + static_cast<long>((k + 1) * d));
            cell.push_back(vert_id.at(v));
        }
        std::sort(cell.begin(), cell.end());
        m.cells.push_back(std::move(cell));
    }
    std::sort(m.cells.begin(), m.cells.end());
    m.build_adjacency();
    return m;
}

// Sorted edge-length multisets equal across all cells, up to tol.
inline bool cells_congruent(const SimplicialMesh& m, double tol) {
    std::vector<double> ref;
    for (std::size_t c = 0; c < m.cells.size(); ++c) {
        const Simplex s = m.cell_simplex(c);
        std::vector<double> e;
        for (std::size_t i = 0; i < s.vertices.size(); ++i)
            for (std::size_t j = 0; j < i; ++j) e.push_back(norm2(sub(s.vertices[i], s.vertices[j])));
        std::sort(e.begin(), e.end());
        if (c == 0) {
            ref = e;
        } else {
            for (std::size_t k = 0; k < e.size(); ++k)
                if (std::fabs(e[k] - ref[k]) > tol) return false;
        }
    }
    return true;
}

struct ProtectionTrendRow {
    std::size_t dim = 0;
    double delta = 0.0;
    double h = 0.0;
    double delta_over_h = 0.0;
};

// Normalized protection per dimension, measured on a patch that covers the
// mapped image of the lattice cube [0, 2]^d.
inline std::vector<ProtectionTrendRow> coxeter_protection_trend(
    const std::vector<std::size_t>& d_range, double scale) {
    std::vector<ProtectionTrendRow> out;
    for (std::size_t d : d_range) {
        if (d < 2 || d > kMaxDelaunayDim)
            throw std::invalid_argument("coxeter_protection_trend: dimension out of range (2..5)");
        const Mat L = detail::coxeter_basis(d);
        CoxeterSpec spec;
        spec.dim = d;
        spec.scale = scale;
        spec.box.assign(d, {std::numeric_limits<double>::infinity(),
                            -std::numeric_limits<double>::infinity()});
        std::vector<int> z(d, 0);
        bool more = true;
        while (more) {
            const Point x = detail::map_lattice(L, scale, z);
            for (std::size_t j = 0; j < d; ++j) {
                spec.box[j].first = std::min(spec.box[j].first, x[j]);
                spec.box[j].second = std::max(spec.box[j].second, x[j]);
            }
            more = false;
            for (std::size_t j = 0; j < d; ++j) {
                if (++z[j] <= 2) {
                    more = true;
                    break;
                }
                z[j] = 0;
            }
        }
        const double pad = 1e-9 * scale;
        for (auto& [lo, hi] : spec.box) {
            lo -= pad;
            hi += pad;
        }
        const SimplicialMesh m = generate_coxeter(spec);
        const ProtectionReport pr = protection_report(m);
        const QualityReport qr = quality_report(m);
        out.push_back({d, pr.delta, qr.h, pr.delta / qr.h});
    }
    return out;
}

}  // namespace promesh
