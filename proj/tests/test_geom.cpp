#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "promesh/geom.hpp"

using namespace promesh;

namespace {

Simplex right_triangle() { return {{{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}}}; }

Simplex equilateral() {
    return {{{0.0, 0.0}, {1.0, 0.0}, {0.5, std::sqrt(3.0) / 2.0}}};
}

Simplex unit_tet() {
    return {{{0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}};
}

// Brute-force smallest enclosing ball: try every support subset.
Ball seb_bruteforce(const std::vector<Point>& pts) {
    const std::size_t n = pts.size();
    Ball best{{}, std::numeric_limits<double>::infinity()};
    for (std::size_t mask = 1; mask < (1u << n); ++mask) {
        std::vector<Point> sup;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1u << i)) sup.push_back(pts[i]);
        if (sup.size() > pts[0].size() + 1) continue;
        auto b = detail::ball_with_boundary(sup);
        if (!b) continue;
        bool ok = true;
        for (const Point& p : pts)
            if (norm2(sub(p, b->center)) > b->radius * (1.0 + 1e-12) + 1e-12) ok = false;
        if (ok && b->radius < best.radius) best = *b;
    }
    return best;
}

}  // namespace

TEST_CASE("simplex volume") {
    CHECK(simplex_volume(right_triangle()) == Catch::Approx(0.5));
    CHECK(simplex_volume(unit_tet()) == Catch::Approx(1.0 / 6.0));
    Simplex seg{{{2.0}, {5.0}}};
    CHECK(simplex_volume(seg) == Catch::Approx(3.0));
}

TEST_CASE("facet volumes and altitudes of the right triangle") {
    auto fv = facet_volumes(right_triangle());
    CHECK(fv[0] == Catch::Approx(std::sqrt(2.0)));  // opposite the right-angle vertex
    CHECK(fv[1] == Catch::Approx(1.0));
    CHECK(fv[2] == Catch::Approx(1.0));
    auto alt = altitudes(right_triangle());
    CHECK(alt[0] == Catch::Approx(1.0 / std::sqrt(2.0)));
    CHECK(alt[1] == Catch::Approx(1.0));
    CHECK(alt[2] == Catch::Approx(1.0));
}

TEST_CASE("tetrahedron facet areas") {
    auto fv = facet_volumes(unit_tet());
    CHECK(fv[0] == Catch::Approx(std::sqrt(3.0) / 2.0));
    CHECK(fv[1] == Catch::Approx(0.5));
    CHECK(fv[2] == Catch::Approx(0.5));
    CHECK(fv[3] == Catch::Approx(0.5));
}

TEST_CASE("diameter is the longest edge") {
    CHECK(diameter(right_triangle()) == Catch::Approx(std::sqrt(2.0)));
    CHECK(diameter(unit_tet()) == Catch::Approx(std::sqrt(2.0)));
}

TEST_CASE("circumsphere of known simplices") {
    Ball b = circumsphere(right_triangle());
    CHECK(b.center[0] == Catch::Approx(0.5));
    CHECK(b.center[1] == Catch::Approx(0.5));
    CHECK(b.radius == Catch::Approx(std::sqrt(2.0) / 2.0));

    Ball t = circumsphere(unit_tet());
    CHECK(t.center[0] == Catch::Approx(0.5));
    CHECK(t.radius == Catch::Approx(std::sqrt(3.0) / 2.0));

    Simplex flat{{{0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}}};
    CHECK_THROWS_AS(circumsphere(flat), DegenerateSimplexError);
}

TEST_CASE("insphere diameter") {
    CHECK(insphere_diameter(right_triangle()) == Catch::Approx(2.0 - std::sqrt(2.0)));
    CHECK(insphere_diameter(equilateral()) == Catch::Approx(std::sqrt(3.0) / 3.0));
    CHECK(insphere_diameter(unit_tet()) == Catch::Approx(2.0 / (3.0 + std::sqrt(3.0))));
}

TEST_CASE("thickness of known simplices") {
    CHECK(thickness(right_triangle()) == Catch::Approx(0.25));
    CHECK(thickness(equilateral()) == Catch::Approx(std::sqrt(3.0) / 4.0));
    CHECK(thickness(unit_tet()) == Catch::Approx(1.0 / (3.0 * std::sqrt(6.0))));
}

TEST_CASE("min containment ball on known simplices") {
    // Right triangle: ball on the hypotenuse.
    Ball b = min_containment_ball(right_triangle());
    CHECK(b.radius == Catch::Approx(std::sqrt(2.0) / 2.0));
    CHECK(b.center[0] == Catch::Approx(0.5));
    // Unit tetrahedron: circumsphere of the large facet.
    Ball t = min_containment_ball(unit_tet());
    CHECK(t.radius == Catch::Approx(std::sqrt(6.0) / 3.0));
    CHECK(t.center[0] == Catch::Approx(1.0 / 3.0));
}

TEST_CASE("min containment ball matches brute-force oracle on random simplices") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t d = 2; d <= 4; ++d) {
        for (int trial = 0; trial < 40; ++trial) {
            Simplex s;
            for (std::size_t i = 0; i <= d; ++i) {
                Point p(d);
                for (double& c : p) c = u(rng);
                s.vertices.push_back(p);
            }
            if (is_degenerate(s)) continue;
            Ball got = min_containment_ball(s);
            Ball want = seb_bruteforce(s.vertices);
            CHECK(got.radius == Catch::Approx(want.radius).epsilon(1e-9));
        }
    }
}

TEST_CASE("metric behavior under rigid motion and scaling") {
    Simplex s = unit_tet();
    // Rotate about z by 30 degrees, translate.
    const double c = std::cos(0.5), sn = std::sin(0.5);
    Simplex t;
    for (const Point& p : s.vertices)
        t.vertices.push_back({c * p[0] - sn * p[1] + 3.0, sn * p[0] + c * p[1] - 1.0, p[2] + 2.0});
    CHECK(thickness(t) == Catch::Approx(thickness(s)));
    CHECK(diameter(t) == Catch::Approx(diameter(s)));
    CHECK(simplex_volume(t) == Catch::Approx(simplex_volume(s)));
    Simplex sc;
    for (const Point& p : s.vertices) sc.vertices.push_back({2.0 * p[0], 2.0 * p[1], 2.0 * p[2]});
    CHECK(thickness(sc) == Catch::Approx(thickness(s)));
    CHECK(diameter(sc) == Catch::Approx(2.0 * diameter(s)));
    CHECK(simplex_volume(sc) == Catch::Approx(8.0 * simplex_volume(s)));
}

TEST_CASE("input validation") {
    Simplex bad{{{0.0, 0.0}, {1.0, 0.0}}};
    CHECK_THROWS_AS(simplex_volume(bad), std::invalid_argument);
    Simplex nan{{{0.0, 0.0}, {1.0, 0.0}, {0.0, std::nan("")}}};
    CHECK_THROWS_AS(diameter(nan), std::invalid_argument);
    Simplex flat{{{0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}}};
    CHECK(is_degenerate(flat));
    CHECK(thickness(flat) == 0.0);
    CHECK_FALSE(is_degenerate(right_triangle()));
}
