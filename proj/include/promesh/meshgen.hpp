#pragma once

// Mesh families for tests and experiments: structured Kuhn-triangulated
// grids on the unit box, seeded random Delaunay meshes, and near-degenerate
// sliver gadgets.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "promesh/delaunay.hpp"
#include "promesh/mesh.hpp"

namespace promesh {

// [0,1]^d split into n^d cubes, each cut into d! path simplices.
inline SimplicialMesh structured_grid(std::size_t d, std::size_t n) {
    if (d < 1 || d > 5) throw std::invalid_argument("structured_grid: dimension out of range");
    if (n < 1) throw std::invalid_argument("structured_grid: need n >= 1");
    SimplicialMesh m;
    m.points.dim = d;
    std::vector<std::size_t> stride(d);
    for (std::size_t j = 0; j < d; ++j)
        stride[j] = static_cast<std::size_t>(std::pow(double(n + 1), double(j)) + 0.5);

    std::vector<int> idx(d, 0);
    bool more = true;
    while (more) {
        Point p(d);
        for (std::size_t j = 0; j < d; ++j) p[j] = double(idx[j]) / double(n);
        m.points.points.push_back(p);
        more = false;
        for (std::size_t j = 0; j < d; ++j) {
            if (++idx[j] <= int(n)) {
                more = true;
                break;
            }
            idx[j] = 0;
        }
    }
    auto point_id = [&](const std::vector<int>& z) {
        std::size_t id = 0;
        for (std::size_t j = 0; j < d; ++j) id += std::size_t(z[j]) * stride[j];
        return int(id);
    };

    std::vector<int> z(d, 0);
    more = true;
    std::vector<std::size_t> perm(d);
    while (more) {
        std::iota(perm.begin(), perm.end(), 0);
        do {
            std::vector<int> cell;
            std::vector<int> v = z;
            cell.push_back(point_id(v));
            for (std::size_t k = 0; k < d; ++k) {
                v[perm[k]] += 1;
                cell.push_back(point_id(v));
            }
            std::sort(cell.begin(), cell.end());
            m.cells.push_back(std::move(cell));
        } while (std::next_permutation(perm.begin(), perm.end()));
        more = false;
        for (std::size_t j = 0; j < d; ++j) {
            if (++z[j] < int(n)) {
                more = true;
                break;
            }
            z[j] = 0;
        }
    }
    std::sort(m.cells.begin(), m.cells.end());
    m.build_adjacency();
    return m;
}

// Seeded uniform points in the unit box, Delaunay-triangulated. The box
// corners are always included so the domain is the full cube.
inline SimplicialMesh random_delaunay_mesh(std::size_t d, std::size_t n_points,
                                           std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    PointSet ps;
    ps.dim = d;
    for (std::size_t c = 0; c < (std::size_t(1) << d); ++c) {
        Point p(d);
        for (std::size_t j = 0; j < d; ++j) p[j] = double((c >> j) & 1);
        ps.points.push_back(p);
    }
    for (std::size_t i = 0; i < n_points; ++i) {
        Point p(d);
        for (double& x : p) x = u(rng);
        ps.points.push_back(p);
    }
    return delaunay_triangulate(ps);
}

// A single near-flat element with thickness close to xi_target, embedded in
// a small valid mesh (the gadget cell plus a well-shaped neighbor).
inline SimplicialMesh sliver_mesh(std::size_t d, double xi_target) {
    if (d < 2 || d > 3) throw std::invalid_argument("sliver_mesh: d must be 2 or 3");
    SimplicialMesh m;
    m.points.dim = d;
    if (d == 2) {
        const double h = 2.0 * xi_target;  // thickness ~ h/2 for a flat cap
        m.points.points = {{0.0, 0.0}, {1.0, 0.0}, {0.5, h}, {0.5, -1.0}};
        m.cells = {{0, 1, 2}, {0, 1, 3}};
    } else {
        const double h = 3.0 * std::sqrt(2.0) * xi_target;
        m.points.points = {
            {0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.5, 0.5, h},
            {0.0, 0.0, -1.0}};
        m.cells = {{0, 1, 2, 3}, {0, 1, 2, 4}};
    }
    m.build_adjacency();
    return m;
}

}  // namespace promesh
