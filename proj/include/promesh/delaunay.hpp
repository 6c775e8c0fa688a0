#pragma once

// Desk-scale d-dimensional Delaunay triangulation: incremental
// Bowyer-Watson insertion over a triangulation closed by a single
// infinite vertex. Predicates are filtered floating point with exact
// rational fallback; exact co-sphericity is resolved by an index-ordered
// symbolic perturbation, so construction never sees an ambiguous "on".

#include <algorithm>
#include <limits>
#include <map>
#include <stdexcept>
#include <vector>

#include "promesh/mesh.hpp"
#include "promesh/predicates.hpp"

namespace promesh {

inline constexpr std::size_t kMaxDelaunayDim = 5;
inline constexpr std::size_t kMaxDelaunayPoints = 5000;

namespace detail {

constexpr int kInfVert = -1;

struct DCell {
    std::vector<int> v;   // d+1 vertex indices, kInfVert for the infinite vertex
    std::vector<int> nb;  // nb[i] = cell opposite v[i]
    bool alive = true;
};

class Triangulator {
  public:
    Triangulator(const PointSet& ps) : pts_(ps.points), d_(ps.dim) {}

    void run() {
        std::vector<int> seed = find_affine_seed();
        init_from_seed(seed);
        std::vector<char> used(pts_.size(), 0);
        for (int s : seed) used[static_cast<std::size_t>(s)] = 1;
        for (std::size_t i = 0; i < pts_.size(); ++i)
            if (!used[i]) insert(static_cast<int>(i));
    }

    std::vector<std::vector<int>> finite_cells() const {
        std::vector<std::vector<int>> out;
        for (const DCell& c : cells_) {
            if (!c.alive) continue;
            if (std::find(c.v.begin(), c.v.end(), kInfVert) != c.v.end()) continue;
            std::vector<int> cell = c.v;
            std::sort(cell.begin(), cell.end());
            out.push_back(std::move(cell));
        }
        std::sort(out.begin(), out.end());
        return out;
    }

  private:
    const std::vector<Point>& pts_;
    std::size_t d_;
    std::vector<DCell> cells_;

    std::vector<int> find_affine_seed() const {
        std::vector<int> seed{0};
        for (std::size_t i = 1; i < pts_.size() && seed.size() < d_ + 1; ++i) {
            std::vector<int> trial = seed;
            trial.push_back(static_cast<int>(i));
            if (affinely_independent(trial)) seed = trial;
        }
        if (seed.size() != d_ + 1)
            throw std::invalid_argument("delaunay: all points affinely dependent");
        return seed;
    }

    bool affinely_independent(const std::vector<int>& idx) const {
        const std::size_t m = idx.size() - 1;
        std::vector<std::vector<Rational>> G(m, std::vector<Rational>(m));
        std::vector<std::vector<Rational>> e(m, std::vector<Rational>(d_));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < d_; ++j)
                e[i][j] = to_rational(pts_[static_cast<std::size_t>(idx[i + 1])][j]) -
                          to_rational(pts_[static_cast<std::size_t>(idx[0])][j]);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                Rational s(0);
                for (std::size_t k = 0; k < d_; ++k) s += e[i][k] * e[j][k];
                G[i][j] = s;
            }
        return sign_of(det_exact(G)) != 0;
    }

    void init_from_seed(const std::vector<int>& seed) {
        DCell fin;
        fin.v = seed;
        fin.nb.assign(d_ + 1, -1);
        cells_.push_back(fin);
        // One infinite cell mirroring each facet of the seed cell.
        const int fin_id = 0;
        std::vector<int> inf_ids;
        for (std::size_t i = 0; i <= d_; ++i) {
            DCell inf;
            for (std::size_t j = 0; j <= d_; ++j)
                if (j != i) inf.v.push_back(seed[j]);
            inf.v.push_back(kInfVert);
            inf.nb.assign(d_ + 1, -1);
            inf.nb[d_] = fin_id;  // opposite the infinite vertex
            inf_ids.push_back(static_cast<int>(cells_.size()));
            cells_.push_back(inf);
            cells_[static_cast<std::size_t>(fin_id)].nb[i] = inf_ids.back();
        }
        // Infinite-infinite adjacency: inf_i and inf_j share (seed \ {i,j}) + INF.
        for (std::size_t i = 0; i <= d_; ++i) {
            DCell& ci = cells_[static_cast<std::size_t>(inf_ids[i])];
            for (std::size_t j = 0; j <= d_; ++j) {
                if (j == i) continue;
                // position of seed[j] inside ci.v
                for (std::size_t p = 0; p < d_; ++p)
                    if (ci.v[p] == seed[j]) ci.nb[p] = inf_ids[j];
            }
        }
    }

    bool is_infinite(const DCell& c) const {
        return std::find(c.v.begin(), c.v.end(), kInfVert) != c.v.end();
    }

    std::vector<PointRef> cell_points(const DCell& c) const {
        std::vector<PointRef> out;
        for (int v : c.v)
            if (v != kInfVert) out.push_back(pts_[static_cast<std::size_t>(v)]);
        return out;
    }

    bool conflict(std::size_t cid, int qi) const {
        const DCell& c = cells_[cid];
        const PointRef& q = pts_[static_cast<std::size_t>(qi)];
        if (!is_infinite(c)) {
            return in_sphere_perturbed(cell_points(c), c.v, q, qi) == SphereSide::inside;
        }
        // Infinite cell: conflict iff q lies strictly on the outer side of
        // the hull facet, or exactly on its hyperplane and inside the
        // (perturbed) circumsphere of the mirror finite cell.
        std::size_t inf_pos = 0;
        while (c.v[inf_pos] != kInfVert) ++inf_pos;
        const int mirror = c.nb[inf_pos];
        const DCell& mc = cells_[static_cast<std::size_t>(mirror)];

        std::vector<PointRef> facet = cell_points(c);  // the d real vertices
        std::vector<PointRef> with_q = facet;
        with_q.push_back(q);
        const int oq = orientation(with_q);
        if (oq == 0)
            return in_sphere_perturbed(cell_points(mc), mc.v, q, qi) == SphereSide::inside;
        // Mirror apex: the vertex of mc not on the facet.
        int apex = -2;
        for (int v : mc.v) {
            bool on_facet = false;
            for (int fv : c.v)
                if (fv == v) on_facet = true;
            if (!on_facet) apex = v;
        }
        std::vector<PointRef> with_w = facet;
        with_w.push_back(pts_[static_cast<std::size_t>(apex)]);
        const int ow = orientation(with_w);
        return oq == -ow;
    }

    void insert(int qi) {
        // Seed conflict cell: scan newest-first (a conflict always exists
        // for a point not coincident with an existing vertex).
        std::size_t seed_cell = cells_.size();
        for (std::size_t i = cells_.size(); i-- > 0;) {
            if (!cells_[i].alive) continue;
            if (conflict(i, qi)) {
                seed_cell = i;
                break;
            }
        }
        if (seed_cell == cells_.size())
            throw std::runtime_error("delaunay: no conflict cell found (duplicate point?)");

        // Grow the conflict region by BFS over facet neighbors.
        std::vector<std::size_t> cavity{seed_cell};
        std::vector<char> in_cavity(cells_.size(), 0);
        in_cavity[seed_cell] = 1;
        for (std::size_t head = 0; head < cavity.size(); ++head) {
            const DCell c = cells_[cavity[head]];
            for (int nb : c.nb) {
                const std::size_t n = static_cast<std::size_t>(nb);
                if (in_cavity[n] || !cells_[n].alive) continue;
                if (conflict(n, qi)) {
                    in_cavity[n] = 1;
                    cavity.push_back(n);
                }
            }
        }

        // Replace the cavity: one new cell per boundary facet.
        std::map<std::vector<int>, std::pair<std::size_t, std::size_t>> open_facets;
        std::vector<std::size_t> created;
        for (std::size_t cid : cavity) {
            const DCell c = cells_[cid];
            for (std::size_t i = 0; i <= d_; ++i) {
                const std::size_t n = static_cast<std::size_t>(c.nb[i]);
                if (in_cavity[n]) continue;
                // Boundary facet = c.v minus position i.
                DCell nc;
                for (std::size_t j = 0; j <= d_; ++j)
                    if (j != i) nc.v.push_back(c.v[j]);
                nc.v.push_back(qi);
                nc.nb.assign(d_ + 1, -1);
                nc.nb[d_] = static_cast<int>(n);  // across the old facet
                const std::size_t nid = cells_.size();
                // Rewire the outside neighbor.
                for (std::size_t k = 0; k <= d_; ++k)
                    if (cells_[n].nb[k] == static_cast<int>(cid))
                        cells_[n].nb[k] = static_cast<int>(nid);
                cells_.push_back(nc);
                created.push_back(nid);
            }
        }
        // New-new adjacency: facets of new cells that contain q.
        for (std::size_t nid : created) {
            DCell& nc = cells_[nid];
            for (std::size_t i = 0; i < d_; ++i) {  // positions of non-q vertices
                std::vector<int> key;
                for (std::size_t j = 0; j <= d_; ++j)
                    if (j != i) key.push_back(nc.v[j]);
                std::sort(key.begin(), key.end());
                auto it = open_facets.find(key);
                if (it == open_facets.end()) {
                    open_facets[key] = {nid, i};
                } else {
                    const auto [oid, opos] = it->second;
                    nc.nb[i] = static_cast<int>(oid);
                    cells_[oid].nb[opos] = static_cast<int>(nid);
                    open_facets.erase(it);
                }
            }
        }
        for (std::size_t cid : cavity) cells_[cid].alive = false;
    }
};

}  // namespace detail

// Delaunay triangulation of a point set. Deterministic: seed simplex from
// the lowest affinely independent indices, then insertion in index order.
inline SimplicialMesh delaunay_triangulate(const PointSet& ps) {
    if (ps.dim < 1 || ps.dim > kMaxDelaunayDim)
        throw std::invalid_argument("delaunay: dimension out of supported range (1..5)");
    if (ps.points.size() > kMaxDelaunayPoints)
        throw std::invalid_argument("delaunay: point count exceeds desk-scale limit (5000)");
    if (ps.points.size() < ps.dim + 1)
        throw std::invalid_argument("delaunay: need at least d+1 points");
    detail::check_duplicate_points(ps);

    detail::Triangulator tri(ps);
    tri.run();
    SimplicialMesh m;
    m.points = ps;
    m.cells = tri.finite_cells();
    m.build_adjacency();
    return m;
}

// Brute-force empty-circumsphere verification: returns (cell, vertex)
// pairs where a non-vertex point lies strictly inside a cell circumsphere.
inline std::vector<std::pair<int, int>> empty_sphere_violations(const SimplicialMesh& m) {
    std::vector<std::pair<int, int>> out;
    for (std::size_t c = 0; c < m.cells.size(); ++c) {
        std::vector<PointRef> sp;
        for (int v : m.cells[c]) sp.push_back(m.points.points[static_cast<std::size_t>(v)]);
        for (std::size_t p = 0; p < m.points.points.size(); ++p) {
            if (std::find(m.cells[c].begin(), m.cells[c].end(), static_cast<int>(p)) !=
                m.cells[c].end())
                continue;
            if (in_sphere(sp, m.points.points[p]) == SphereSide::inside)
                out.emplace_back(static_cast<int>(c), static_cast<int>(p));
        }
    }
    return out;
}

struct ProtectionReport {
    double delta = 0.0;
    std::vector<double> per_cell;
    std::vector<int> witness;  // nearest external point per cell, -1 if none
};

// delta(K) = min over external sample points of (|q - c_K| - R_K).
inline ProtectionReport protection_report(const SimplicialMesh& m) {
    if (m.cells.empty()) throw std::invalid_argument("protection_report: empty mesh");
    ProtectionReport rep;
    rep.delta = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < m.cells.size(); ++c) {
        const Ball b = circumsphere(m.cell_simplex(c));
        double best = std::numeric_limits<double>::infinity();
        int wit = -1;
        for (std::size_t p = 0; p < m.points.points.size(); ++p) {
            if (std::find(m.cells[c].begin(), m.cells[c].end(), static_cast<int>(p)) !=
                m.cells[c].end())
                continue;
            const double margin = norm2(sub(m.points.points[p], b.center)) - b.radius;
            if (margin < best) {
                best = margin;
                wit = static_cast<int>(p);
            }
        }
        rep.per_cell.push_back(best);
        rep.witness.push_back(wit);
        rep.delta = std::min(rep.delta, best);
    }
    return rep;
}

inline std::pair<bool, ProtectionReport> is_protected(const SimplicialMesh& m, double delta_min) {
    ProtectionReport rep = protection_report(m);
    return {rep.delta >= delta_min, rep};
}

}  // namespace promesh
