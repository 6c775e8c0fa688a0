#pragma once

// Primitives on a single d-simplex: volumes, facet volumes, altitudes,
// circumsphere, insphere, smallest enclosing ball, diameter.

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "promesh/linalg.hpp"

namespace promesh {

using Point = std::vector<double>;

struct Simplex {
    std::vector<Point> vertices;

    std::size_t dim() const { return vertices.empty() ? 0 : vertices.front().size(); }

    void check() const {
        if (vertices.empty()) throw std::invalid_argument("simplex: no vertices");
        const std::size_t d = dim();
        if (d < 1) throw std::invalid_argument("simplex: ambient dimension must be >= 1");
        if (vertices.size() != d + 1)
            throw std::invalid_argument("simplex: need d+1 vertices");
        for (const Point& p : vertices) {
            if (p.size() != d) throw std::invalid_argument("simplex: vertex dimension mismatch");
            for (double c : p)
                if (!std::isfinite(c)) throw std::invalid_argument("simplex: non-finite coordinate");
        }
    }
};

struct Ball {
    Point center;
    double radius = 0.0;
};

struct DegenerateSimplexError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// |K| = |det([q_1 ... q_d])| / d!
inline double simplex_volume(const Simplex& s) {
    s.check();
    const std::size_t d = s.dim();
    Mat M(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) M(i, j) = s.vertices[i + 1][j] - s.vertices[0][j];
    double fact = 1.0;
    for (std::size_t k = 2; k <= d; ++k) fact *= static_cast<double>(k);
    return std::fabs(det(M)) / fact;
}

// (d-1)-volume of the facet opposite vertex r, via the Gram determinant of
// the facet's edge vectors.
inline double facet_volume(const Simplex& s, std::size_t r) {
    const std::size_t d = s.dim();
    if (d == 1) return 1.0;  // facets are points; 0-volume convention = 1 count measure
    std::vector<Point> fv;
    for (std::size_t i = 0; i <= d; ++i)
        if (i != r) fv.push_back(s.vertices[i]);
    const std::size_t m = d - 1;  // number of edge vectors
    std::vector<Point> e(m);
    for (std::size_t i = 0; i < m; ++i) e[i] = sub(fv[i + 1], fv[0]);
    Mat G(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) G(i, j) = dot(e[i], e[j]);
    double g = det(G);
    if (g < 0.0) g = 0.0;  // roundoff guard
    double fact = 1.0;
    for (std::size_t k = 2; k <= m; ++k) fact *= static_cast<double>(k);
    return std::sqrt(g) / fact;
}

inline std::vector<double> facet_volumes(const Simplex& s) {
    s.check();
    const std::size_t d = s.dim();
    std::vector<double> out(d + 1);
    for (std::size_t r = 0; r <= d; ++r) out[r] = facet_volume(s, r);
    return out;
}

// Altitude from vertex r: dist(p_r, aff(F_r)) = d |K| / |F_r|.
inline std::vector<double> altitudes(const Simplex& s) {
    s.check();
    const std::size_t d = s.dim();
    const double vol = simplex_volume(s);
    const std::vector<double> fv = facet_volumes(s);
    std::vector<double> out(d + 1);
    for (std::size_t r = 0; r <= d; ++r) {
        if (fv[r] <= 0.0)
            throw DegenerateSimplexError("altitudes: facet with zero (d-1)-volume");
        out[r] = static_cast<double>(d) * vol / fv[r];
    }
    return out;
}

// Longest edge.
inline double diameter(const Simplex& s) {
    s.check();
    double best = 0.0;
    for (std::size_t i = 0; i < s.vertices.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            best = std::max(best, norm2(sub(s.vertices[i], s.vertices[j])));
    return best;
}

struct CircumsphereResult {
    Ball ball;
    double cond_estimate = 0.0;
};

// Circumcenter from the d x d bisector system 2 (p_i - p_0) . c = |p_i|^2 - |p_0|^2.
inline CircumsphereResult circumsphere_ex(const Simplex& s) {
    s.check();
    const std::size_t d = s.dim();
    Mat A(d, d);
    std::vector<double> b(d);
    for (std::size_t i = 0; i < d; ++i) {
        double rhs = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            const double e = s.vertices[i + 1][j] - s.vertices[0][j];
            A(i, j) = 2.0 * e;
            rhs += e * (s.vertices[i + 1][j] + s.vertices[0][j]);
        }
        b[i] = rhs;
    }
    LinearSolveResult sol = solve(A, b);
    if (sol.singular || !std::isfinite(sol.cond_estimate))
        throw DegenerateSimplexError("circumsphere: degenerate simplex");
    CircumsphereResult res;
    res.ball.center = sol.x;
    res.ball.radius = norm2(sub(sol.x, s.vertices[0]));
    res.cond_estimate = sol.cond_estimate;
    return res;
}

inline Ball circumsphere(const Simplex& s) { return circumsphere_ex(s).ball; }

// Insphere diameter rho(K) = 2 d |K| / sum_s |F_s|.
inline double insphere_diameter(const Simplex& s) {
    s.check();
    const std::size_t d = s.dim();
    const double vol = simplex_volume(s);
    if (vol <= 0.0) return 0.0;
    double fsum = 0.0;
    for (double f : facet_volumes(s)) fsum += f;
    if (fsum <= 0.0) return 0.0;
    return 2.0 * static_cast<double>(d) * vol / fsum;
}

namespace detail {

// Smallest ball with the given points on its boundary (points assumed
// affinely independent; dependent directions are dropped via pivot checks).
inline std::optional<Ball> ball_with_boundary(const std::vector<Point>& support) {
    if (support.empty()) return Ball{{}, 0.0};
    const std::size_t d = support[0].size();
    const std::size_t m = support.size() - 1;
    if (m == 0) return Ball{support[0], 0.0};
    // center = p0 + sum l_i e_i with e_i = p_i - p0; equidistance gives
    // Gram * l = 0.5 * diag(|e_i|^2).
    std::vector<Point> e(m);
    for (std::size_t i = 0; i < m; ++i) e[i] = sub(support[i + 1], support[0]);
    Mat G(m, m);
    std::vector<double> rhs(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) G(i, j) = dot(e[i], e[j]);
        rhs[i] = 0.5 * dot(e[i], e[i]);
    }
    LinearSolveResult sol = solve(G, rhs);
    if (sol.singular) return std::nullopt;
    Point c = support[0];
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < d; ++j) c[j] += sol.x[i] * e[i][j];
    Ball b;
    b.radius = norm2(sub(c, support[0]));
    b.center = std::move(c);
    return b;
}

inline bool ball_contains(const Ball& b, const Point& p, double slack) {
    return norm2(sub(p, b.center)) <= b.radius * (1.0 + slack) + slack;
}

// Welzl move-to-front with the deterministic input order (no shuffling):
// exact and cheap for d+1 <= 6 points.
inline Ball welzl(std::vector<Point>& pts, std::size_t n, std::vector<Point>& support,
                  std::size_t d) {
    if (n == 0 || support.size() == d + 1) {
        // Empty support: a ball containing nothing (negative radius).
        if (support.empty()) return Ball{Point(d, 0.0), -1.0};
        auto b = ball_with_boundary(support);
        if (b) return *b;
        // Affinely dependent support: drop the most recent point.
        std::vector<Point> reduced(support.begin(), support.end() - 1);
        auto b2 = ball_with_boundary(reduced);
        return b2 ? *b2 : Ball{support[0], 0.0};
    }
    Point p = pts[n - 1];
    Ball b = welzl(pts, n - 1, support, d);
    if (ball_contains(b, p, 1e-13)) return b;
    support.push_back(p);
    Ball b2 = welzl(pts, n - 1, support, d);
    support.pop_back();
    // Move-to-front: keep p early so subsequent calls see it first.
    for (std::size_t i = n - 1; i > 0; --i) pts[i] = pts[i - 1];
    pts[0] = p;
    return b2;
}

}  // namespace detail

// Smallest enclosing ball of the vertex set.
inline Ball min_containment_ball(const Simplex& s) {
    s.check();
    std::vector<Point> pts = s.vertices;
    std::vector<Point> support;
    return detail::welzl(pts, pts.size(), support, s.dim());
}

// Thickness Xi(K) = min altitude / (d * Delta(K)); 0 for degenerate input.
inline double thickness(const Simplex& s) {
    s.check();
    const std::size_t d = s.dim();
    const double delta = diameter(s);
    if (delta <= 0.0) return 0.0;
    double min_alt;
    try {
        const std::vector<double> alt = altitudes(s);
        min_alt = alt[0];
        for (double a : alt) min_alt = std::min(min_alt, a);
    } catch (const DegenerateSimplexError&) {
        return 0.0;
    }
    return min_alt / (static_cast<double>(d) * delta);
}

// Degeneracy policy: genuinely void elements vs reportable slivers.
inline bool is_degenerate(const Simplex& s) {
    return thickness(s) < 1e-13 || simplex_volume(s) < 1e-300;
}

}  // namespace promesh
