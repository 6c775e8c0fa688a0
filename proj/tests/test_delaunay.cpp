#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "promesh/delaunay.hpp"
#include "promesh/quality.hpp"

using namespace promesh;

namespace {

double total_volume(const SimplicialMesh& m) {
    double v = 0.0;
    for (std::size_t c = 0; c < m.cells.size(); ++c) v += simplex_volume(m.cell_simplex(c));
    return v;
}

// Convex hull area in 2d (monotone chain + shoelace), used as an
// independent oracle for the covered volume.
double hull_area_2d(std::vector<Point> pts) {
    std::sort(pts.begin(), pts.end());
    auto cross = [](const Point& o, const Point& a, const Point& b) {
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    };
    std::vector<Point> hull;
    for (int pass = 0; pass < 2; ++pass) {
        const std::size_t start = hull.size();
        for (const Point& p : pts) {
            while (hull.size() >= start + 2 &&
                   cross(hull[hull.size() - 2], hull.back(), p) <= 0.0)
                hull.pop_back();
            hull.push_back(p);
        }
        hull.pop_back();
        std::reverse(pts.begin(), pts.end());
    }
    double a = 0.0;
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const Point& p = hull[i];
        const Point& q = hull[(i + 1) % hull.size()];
        a += p[0] * q[1] - q[0] * p[1];
    }
    return std::fabs(a) / 2.0;
}

PointSet random_points(std::size_t d, std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    PointSet ps;
    ps.dim = d;
    for (std::size_t i = 0; i < n; ++i) {
        Point p(d);
        for (double& c : p) c = u(rng);
        ps.points.push_back(p);
    }
    return ps;
}

}  // namespace

TEST_CASE("triangulates a 3x3 grid") {
    PointSet ps;
    ps.dim = 2;
    for (int y = 0; y < 3; ++y)
        for (int x = 0; x < 3; ++x) ps.points.push_back({double(x), double(y)});
    SimplicialMesh m = delaunay_triangulate(ps);
    CHECK(m.cells.size() == 8);
    CHECK(total_volume(m) == Catch::Approx(4.0));
    CHECK(empty_sphere_violations(m).empty());
    CHECK(validate_manifold(m).pass);
}

TEST_CASE("cocircular square is resolved without slivers") {
    PointSet ps;
    ps.dim = 2;
    ps.points = {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
    SimplicialMesh m = delaunay_triangulate(ps);
    CHECK(m.cells.size() == 2);
    CHECK(total_volume(m) == Catch::Approx(1.0));
    CHECK(empty_sphere_violations(m).empty());
    CHECK(validate_manifold(m).pass);
}

TEST_CASE("random 2d point sets: hull coverage and empty spheres") {
    for (std::uint64_t seed : {7u, 8u, 9u}) {
        PointSet ps = random_points(2, 60, seed);
        SimplicialMesh m = delaunay_triangulate(ps);
        CHECK(empty_sphere_violations(m).empty());
        CHECK(validate_manifold(m).pass);
        CHECK(total_volume(m) == Catch::Approx(hull_area_2d(ps.points)).epsilon(1e-9));
    }
}

TEST_CASE("random interior points in the cube cover volume 1") {
    PointSet ps;
    ps.dim = 3;
    for (int c = 0; c < 8; ++c)
        ps.points.push_back({double(c & 1), double((c >> 1) & 1), double((c >> 2) & 1)});
    PointSet inner = random_points(3, 30, 11);
    // keep interior points away from the boundary so the hull is the cube
    for (Point& p : inner.points)
        for (double& x : p) x = 0.1 + 0.8 * x;
    ps.points.insert(ps.points.end(), inner.points.begin(), inner.points.end());
    SimplicialMesh m = delaunay_triangulate(ps);
    CHECK(total_volume(m) == Catch::Approx(1.0).epsilon(1e-9));
    CHECK(empty_sphere_violations(m).empty());
    CHECK(validate_manifold(m).pass);
}

TEST_CASE("4d cross-polytope plus center") {
    PointSet ps;
    ps.dim = 4;
    for (std::size_t j = 0; j < 4; ++j) {
        Point p(4, 0.0), q(4, 0.0);
        p[j] = 1.0;
        q[j] = -1.0;
        ps.points.push_back(p);
        ps.points.push_back(q);
    }
    ps.points.push_back({0.1, 0.05, -0.02, 0.03});
    SimplicialMesh m = delaunay_triangulate(ps);
    CHECK(empty_sphere_violations(m).empty());
    CHECK(validate_manifold(m).pass);
    // Cross-polytope volume 2^d/d! = 16/24.
    CHECK(total_volume(m) == Catch::Approx(16.0 / 24.0).epsilon(1e-9));
}

TEST_CASE("determinism: identical input gives identical cells") {
    PointSet ps = random_points(2, 50, 123);
    SimplicialMesh a = delaunay_triangulate(ps);
    SimplicialMesh b = delaunay_triangulate(ps);
    CHECK(a.cells == b.cells);
}

TEST_CASE("protection report") {
    // Square corners: every triangle's circumcircle passes through the
    // opposite corner, so delta = 0.
    PointSet sq;
    sq.dim = 2;
    sq.points = {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
    SimplicialMesh m = delaunay_triangulate(sq);
    ProtectionReport rep = protection_report(m);
    CHECK(std::fabs(rep.delta) < 1e-12);
    CHECK(rep.per_cell.size() == m.cells.size());
    CHECK(rep.witness[0] >= 0);

    // Single-cell mesh: no external points, protection is infinite.
    SimplicialMesh one = load_mesh("2 3 1\n0 0\n1 0\n0 1\n0 1 2\n", MeshFormat::text);
    ProtectionReport rone = protection_report(one);
    CHECK(std::isinf(rone.delta));
    CHECK(rone.witness[0] == -1);

    // Perturbing one square corner outward yields strictly positive delta.
    sq.points[2] = {1.3, 1.3};
    ProtectionReport rpos = protection_report(delaunay_triangulate(sq));
    CHECK(rpos.delta > 0.0);
    auto [ok, rep2] = is_protected(delaunay_triangulate(sq), rpos.delta / 2.0);
    CHECK(ok);
}

TEST_CASE("input validation and desk-scale limits") {
    PointSet ps = random_points(6, 10, 1);
    CHECK_THROWS_AS(delaunay_triangulate(ps), std::invalid_argument);

    PointSet few = random_points(3, 3, 1);
    CHECK_THROWS_AS(delaunay_triangulate(few), std::invalid_argument);

    PointSet many = random_points(2, 5001, 1);
    CHECK_THROWS_AS(delaunay_triangulate(many), std::invalid_argument);

    PointSet dup;
    dup.dim = 2;
    dup.points = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {0.0, 0.0}};
    CHECK_THROWS_AS(delaunay_triangulate(dup), ParseError);

    PointSet collinear;
    collinear.dim = 2;
    collinear.points = {{0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}, {3.0, 0.0}};
    CHECK_THROWS_AS(delaunay_triangulate(collinear), std::invalid_argument);
}
