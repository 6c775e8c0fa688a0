#pragma once

// Mesh data model, file I/O (text + JSON), manifold validation and
// net-parameter (covering radius / separation) computation.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <random>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "promesh/geom.hpp"

namespace promesh {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PointSet {
    std::size_t dim = 0;
    std::vector<Point> points;
};

struct SimplicialMesh {
    PointSet points;
    std::vector<std::vector<int>> cells;  // (d+1)-tuples of vertex indices
    // sorted d-tuple of vertex indices -> incident cell ids (1 or 2)
    std::map<std::vector<int>, std::vector<int>> facet_adjacency;

    std::size_t dim() const { return points.dim; }

    Simplex cell_simplex(std::size_t c) const {
        Simplex s;
        for (int v : cells[c]) s.vertices.push_back(points.points[static_cast<std::size_t>(v)]);
        return s;
    }

    void build_adjacency() {
        facet_adjacency.clear();
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const auto& cell = cells[c];
            for (std::size_t r = 0; r < cell.size(); ++r) {
                std::vector<int> key;
                for (std::size_t i = 0; i < cell.size(); ++i)
                    if (i != r) key.push_back(cell[i]);
                std::sort(key.begin(), key.end());
                facet_adjacency[key].push_back(static_cast<int>(c));
            }
        }
    }

    // Facets with exactly one incident cell.
    std::vector<std::vector<int>> boundary_facets() const {
        std::vector<std::vector<int>> out;
        for (const auto& [key, inc] : facet_adjacency)
            if (inc.size() == 1) out.push_back(key);
        return out;
    }
};

struct NetParameters {
    double epsilon = 0.0;  // covering radius
    double eta = 0.0;      // separation
    double eta_bar = 0.0;  // eta / epsilon
};

namespace detail {

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void check_mesh_indices(const SimplicialMesh& m) {
    const std::size_t d = m.dim();
    const long n = static_cast<long>(m.points.points.size());
    for (std::size_t c = 0; c < m.cells.size(); ++c) {
        if (m.cells[c].size() != d + 1)
            throw ParseError("cell " + std::to_string(c) + ": wrong arity");
        for (int v : m.cells[c])
            if (v < 0 || v >= n)
                throw ParseError("cell " + std::to_string(c) + ": vertex index " +
                                 std::to_string(v) + " out of range");
    }
}

inline void check_duplicate_points(const PointSet& ps) {
    for (std::size_t i = 0; i < ps.points.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (norm2(sub(ps.points[i], ps.points[j])) < 1e-12)
                throw ParseError("duplicate points " + std::to_string(j) + " and " +
                                 std::to_string(i));
}

}  // namespace detail

enum class MeshFormat { text, json };

inline SimplicialMesh load_mesh(std::istream& in, MeshFormat format) {
    SimplicialMesh m;
    if (format == MeshFormat::text) {
        std::string line;
        std::size_t lineno = 0;
        auto next_line = [&]() -> std::string {
            while (std::getline(in, line)) {
                ++lineno;
                if (line.find_first_not_of(" \t\r\n") != std::string::npos) return line;
            }
            throw ParseError("line " + std::to_string(lineno + 1) + ": unexpected end of input");
        };
        std::istringstream head(next_line());
        long d = 0, n = 0, mm = 0;
        if (!(head >> d >> n >> mm) || d < 1 || n < 0 || mm < 0)
            throw ParseError("line " + std::to_string(lineno) + ": expected 'd N M' header");
        m.points.dim = static_cast<std::size_t>(d);
        for (long i = 0; i < n; ++i) {
            std::istringstream ls(next_line());
            Point p(static_cast<std::size_t>(d));
            for (long j = 0; j < d; ++j)
                if (!(ls >> p[static_cast<std::size_t>(j)]))
                    throw ParseError("line " + std::to_string(lineno) + ": bad coordinate");
            m.points.points.push_back(std::move(p));
        }
        for (long i = 0; i < mm; ++i) {
            std::istringstream ls(next_line());
            std::vector<int> cell(static_cast<std::size_t>(d + 1));
            for (long j = 0; j <= d; ++j)
                if (!(ls >> cell[static_cast<std::size_t>(j)]))
                    throw ParseError("line " + std::to_string(lineno) + ": bad vertex index");
            m.cells.push_back(std::move(cell));
        }
    } else {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("json: ") + e.what());
        }
        try {
            m.points.dim = j.at("dim").get<std::size_t>();
            for (const auto& p : j.at("points")) {
                Point pt = p.get<Point>();
                if (pt.size() != m.points.dim) throw ParseError("point with wrong arity");
                m.points.points.push_back(std::move(pt));
            }
            for (const auto& c : j.at("cells")) m.cells.push_back(c.get<std::vector<int>>());
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("json: ") + e.what());
        }
    }
    detail::check_mesh_indices(m);
    detail::check_duplicate_points(m.points);
    m.build_adjacency();
    return m;
}

inline SimplicialMesh load_mesh(const std::string& text, MeshFormat format) {
    std::istringstream in(text);
    return load_mesh(in, format);
}

// Bare point-set file: "d N" header, then N coordinate lines.
inline PointSet load_points(std::istream& in) {
    PointSet ps;
    std::string line;
    std::size_t lineno = 0;
    auto next_line = [&]() -> std::string {
        while (std::getline(in, line)) {
            ++lineno;
            if (line.find_first_not_of(" \t\r\n") != std::string::npos) return line;
        }
        throw ParseError("line " + std::to_string(lineno + 1) + ": unexpected end of input");
    };
    std::istringstream head(next_line());
    long d = 0, n = 0;
    if (!(head >> d >> n) || d < 1 || n < 0)
        throw ParseError("line " + std::to_string(lineno) + ": expected 'd N' header");
    ps.dim = static_cast<std::size_t>(d);
    for (long i = 0; i < n; ++i) {
        std::istringstream ls(next_line());
        Point p(static_cast<std::size_t>(d));
        for (long j = 0; j < d; ++j)
            if (!(ls >> p[static_cast<std::size_t>(j)]))
                throw ParseError("line " + std::to_string(lineno) + ": bad coordinate");
        ps.points.push_back(std::move(p));
    }
    return ps;
}

inline void save_points(const PointSet& ps, std::ostream& out) {
    out << ps.dim << ' ' << ps.points.size() << '\n';
    for (const Point& p : ps.points) {
        for (std::size_t j = 0; j < p.size(); ++j) out << (j ? " " : "") << detail::fmt17(p[j]);
        out << '\n';
    }
}

// Canonical serialization: points in input order, 17 significant digits, LF.
inline void save_mesh(const SimplicialMesh& m, std::ostream& out, MeshFormat format) {
    if (format == MeshFormat::text) {
        out << m.dim() << ' ' << m.points.points.size() << ' ' << m.cells.size() << '\n';
        for (const Point& p : m.points.points) {
            for (std::size_t j = 0; j < p.size(); ++j)
                out << (j ? " " : "") << detail::fmt17(p[j]);
            out << '\n';
        }
        for (const auto& c : m.cells) {
            for (std::size_t j = 0; j < c.size(); ++j) out << (j ? " " : "") << c[j];
            out << '\n';
        }
    } else {
        out << "{\"dim\":" << m.dim() << ",\"points\":[";
        for (std::size_t i = 0; i < m.points.points.size(); ++i) {
            if (i) out << ',';
            out << '[';
            const Point& p = m.points.points[i];
            for (std::size_t j = 0; j < p.size(); ++j)
                out << (j ? "," : "") << detail::fmt17(p[j]);
            out << ']';
        }
        out << "],\"cells\":[";
        for (std::size_t i = 0; i < m.cells.size(); ++i) {
            if (i) out << ',';
            out << '[';
            for (std::size_t j = 0; j < m.cells[i].size(); ++j)
                out << (j ? "," : "") << m.cells[i][j];
            out << ']';
        }
        out << "]}\n";
    }
}

inline std::string save_mesh(const SimplicialMesh& m, MeshFormat format) {
    std::ostringstream out;
    save_mesh(m, out, format);
    return out.str();
}

struct ManifoldReport {
    std::vector<std::vector<int>> bad_facets;  // facets with != 1,2 cofaces
    std::vector<std::pair<int, int>> duplicate_cells;
    std::vector<int> degenerate_cells;
    bool connected = true;
    bool pass = false;
};

inline ManifoldReport validate_manifold(const SimplicialMesh& m) {
    ManifoldReport rep;
    for (const auto& [key, inc] : m.facet_adjacency)
        if (inc.size() != 1 && inc.size() != 2) rep.bad_facets.push_back(key);

    std::map<std::vector<int>, int> seen;
    for (std::size_t c = 0; c < m.cells.size(); ++c) {
        std::vector<int> key = m.cells[c];
        std::sort(key.begin(), key.end());
        auto it = seen.find(key);
        if (it != seen.end())
            rep.duplicate_cells.emplace_back(it->second, static_cast<int>(c));
        else
            seen[key] = static_cast<int>(c);
    }
    for (std::size_t c = 0; c < m.cells.size(); ++c)
        if (is_degenerate(m.cell_simplex(c))) rep.degenerate_cells.push_back(static_cast<int>(c));

    // d-connectivity of the cell adjacency graph (cells joined across facets).
    if (!m.cells.empty()) {
        std::vector<int> comp(m.cells.size(), -1);
        std::vector<std::size_t> stack{0};
        comp[0] = 0;
        while (!stack.empty()) {
            std::size_t c = stack.back();
            stack.pop_back();
            const auto& cell = m.cells[c];
            for (std::size_t r = 0; r < cell.size(); ++r) {
                std::vector<int> key;
                for (std::size_t i = 0; i < cell.size(); ++i)
                    if (i != r) key.push_back(cell[i]);
                std::sort(key.begin(), key.end());
                for (int nb : m.facet_adjacency.at(key)) {
                    if (comp[static_cast<std::size_t>(nb)] < 0) {
                        comp[static_cast<std::size_t>(nb)] = 0;
                        stack.push_back(static_cast<std::size_t>(nb));
                    }
                }
            }
        }
        for (int c : comp)
            if (c < 0) rep.connected = false;
    }
    rep.pass = rep.bad_facets.empty() && rep.duplicate_cells.empty() &&
               rep.degenerate_cells.empty() && rep.connected;
    return rep;
}

namespace detail {

// Barycentric membership test for a point against one cell.
inline bool point_in_simplex(const Simplex& s, const Point& q, double tol) {
    const std::size_t d = s.dim();
    Mat A(d, d);
    std::vector<double> b(d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) A(j, i) = s.vertices[i + 1][j] - s.vertices[0][j];
        b[i] = q[i] - s.vertices[0][i];
    }
    LinearSolveResult sol = solve(A, b);
    if (sol.singular) return false;
    double sum = 0.0;
    for (double l : sol.x) {
        if (l < -tol) return false;
        sum += l;
    }
    return sum <= 1.0 + tol;
}

inline bool point_in_mesh(const SimplicialMesh& m, const Point& q, double tol) {
    for (std::size_t c = 0; c < m.cells.size(); ++c)
        if (point_in_simplex(m.cell_simplex(c), q, tol)) return true;
    return false;
}

inline double dist_to_set(const Point& q, const PointSet& ps) {
    double best = std::numeric_limits<double>::infinity();
    for (const Point& p : ps.points) best = std::min(best, norm2(sub(q, p)));
    return best;
}

// Circumcenter of a (d-1)-facet within its affine hull.
inline std::optional<Point> facet_circumcenter(const std::vector<Point>& fv) {
    const std::size_t m = fv.size() - 1;
    if (m == 0) return fv[0];
    std::vector<Point> e(m);
    for (std::size_t i = 0; i < m; ++i) e[i] = sub(fv[i + 1], fv[0]);
    Mat G(m, m);
    std::vector<double> rhs(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) G(i, j) = dot(e[i], e[j]);
        rhs[i] = 0.5 * dot(e[i], e[i]);
    }
    LinearSolveResult sol = solve(G, rhs);
    if (sol.singular) return std::nullopt;
    Point c = fv[0];
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < c.size(); ++j) c[j] += sol.x[i] * e[i][j];
    // Only accept centers inside the facet itself (barycentric check).
    double sum = 0.0;
    for (double l : sol.x) {
        if (l < -1e-9) return std::nullopt;
        sum += l;
    }
    if (sum > 1.0 + 1e-9) return std::nullopt;
    return c;
}

}  // namespace detail

// Covering radius epsilon (over the meshed region), separation eta.
// The mesh must triangulate the region with vertex set exactly ps.
inline NetParameters net_parameters(const PointSet& ps, const SimplicialMesh& hull_mesh) {
    if (ps.points.size() < 2) throw std::invalid_argument("net_parameters: need >= 2 points");
    NetParameters np;
    np.eta = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < ps.points.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            np.eta = std::min(np.eta, norm2(sub(ps.points[i], ps.points[j])));

    double eps = 0.0;
    for (std::size_t c = 0; c < hull_mesh.cells.size(); ++c) {
        const Simplex s = hull_mesh.cell_simplex(c);
        const Ball b = circumsphere(s);
        if (detail::point_in_mesh(hull_mesh, b.center, 1e-9))
            eps = std::max(eps, b.radius);
    }
    for (const auto& facet : hull_mesh.boundary_facets()) {
        std::vector<Point> fv;
        for (int v : facet) fv.push_back(ps.points[static_cast<std::size_t>(v)]);
        auto cc = detail::facet_circumcenter(fv);
        if (cc) eps = std::max(eps, detail::dist_to_set(*cc, ps));
    }
    np.epsilon = eps;
    np.eta_bar = (eps > 0.0) ? np.eta / eps : 0.0;
    return np;
}

// Seeded Monte-Carlo cross-check of the covering radius: max over samples
// drawn volume-weighted from the mesh of the distance to the vertex set.
inline double covering_radius_mc(const PointSet& ps, const SimplicialMesh& m,
                                 std::size_t samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> cum;
    double total = 0.0;
    for (std::size_t c = 0; c < m.cells.size(); ++c) {
        total += simplex_volume(m.cell_simplex(c));
        cum.push_back(total);
    }
    const std::size_t d = m.dim();
    double best = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
        const double t = unif(rng) * total;
        const std::size_t c = static_cast<std::size_t>(
            std::lower_bound(cum.begin(), cum.end(), t) - cum.begin());
        const Simplex sx = m.cell_simplex(std::min(c, m.cells.size() - 1));
        // Dirichlet(1,...,1) barycentric sample.
        std::vector<double> w(d + 1);
        double wsum = 0.0;
        for (double& wi : w) {
            wi = expo(rng);
            wsum += wi;
        }
        Point q(d, 0.0);
        for (std::size_t i = 0; i <= d; ++i)
            for (std::size_t j = 0; j < d; ++j) q[j] += (w[i] / wsum) * sx.vertices[i][j];
        best = std::max(best, detail::dist_to_set(q, ps));
    }
    return best;
}

}  // namespace promesh
