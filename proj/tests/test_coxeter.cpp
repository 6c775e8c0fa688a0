#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "promesh/coxeter.hpp"

using namespace promesh;

namespace {

CoxeterSpec box_spec(std::size_t d, double scale, double lo, double hi) {
    CoxeterSpec s;
    s.dim = d;
    s.scale = scale;
    s.box.assign(d, {lo, hi});
    return s;
}

}  // namespace

TEST_CASE("2d patch: congruent, Delaunay, protected") {
    SimplicialMesh m = generate_coxeter(box_spec(2, 1.0, 0.0, 3.0));
    REQUIRE(!m.cells.empty());
    CHECK(validate_manifold(m).pass);
    CHECK(cells_congruent(m, 1e-10));
    CHECK(empty_sphere_violations(m).empty());
    ProtectionReport rep = protection_report(m);
    CHECK(rep.delta > 0.0);

    // All cells equilateral: each cell has three equal edges.
    const Simplex s = m.cell_simplex(0);
    const double e01 = norm2(sub(s.vertices[0], s.vertices[1]));
    const double e02 = norm2(sub(s.vertices[0], s.vertices[2]));
    const double e12 = norm2(sub(s.vertices[1], s.vertices[2]));
    CHECK(e01 == Catch::Approx(e02));
    CHECK(e01 == Catch::Approx(e12));
}

TEST_CASE("3d patch: congruent, Delaunay, protected") {
    SimplicialMesh m = generate_coxeter(box_spec(3, 1.0, 0.0, 2.0));
    REQUIRE(!m.cells.empty());
    CHECK(validate_manifold(m).pass);
    CHECK(cells_congruent(m, 1e-10));
    CHECK(empty_sphere_violations(m).empty());
    CHECK(protection_report(m).delta > 0.0);
}

TEST_CASE("scaling homogeneity") {
    SimplicialMesh a = generate_coxeter(box_spec(2, 1.0, 0.0, 3.0));
    SimplicialMesh b = generate_coxeter(box_spec(2, 2.0, 0.0, 6.0));
    REQUIRE(a.cells.size() == b.cells.size());
    const ProtectionReport pa = protection_report(a);
    const ProtectionReport pb = protection_report(b);
    CHECK(pb.delta == Catch::Approx(2.0 * pa.delta).epsilon(1e-9));
    const QualityReport qa = quality_report(a);
    const QualityReport qb = quality_report(b);
    CHECK(pb.delta / qb.h == Catch::Approx(pa.delta / qa.h).epsilon(1e-9));
}

TEST_CASE("protection trend over dimension") {
    auto rows = coxeter_protection_trend({2, 3, 4}, 1.0);
    REQUIRE(rows.size() == 3);
    for (const auto& r : rows) {
        CHECK(r.delta_over_h > 0.0);
        CHECK(r.delta > 0.0);
        CHECK(r.h > 0.0);
    }
    CHECK(rows[0].delta_over_h >= rows[1].delta_over_h);
    CHECK(rows[1].delta_over_h >= rows[2].delta_over_h);

    // Determinism.
    auto again = coxeter_protection_trend({2, 3, 4}, 1.0);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(again[i].delta == rows[i].delta);
        CHECK(again[i].h == rows[i].h);
    }

    auto single = coxeter_protection_trend({3}, 1.0);
    CHECK(single.size() == 1);
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(generate_coxeter(box_spec(1, 1.0, 0.0, 3.0)), std::invalid_argument);
    CHECK_THROWS_AS(generate_coxeter(box_spec(2, -1.0, 0.0, 3.0)), std::invalid_argument);
    CHECK_THROWS_AS(generate_coxeter(box_spec(2, 1.0, 3.0, 0.0)), std::invalid_argument);
    // Box far smaller than one lattice cell.
    CHECK_THROWS_AS(generate_coxeter(box_spec(2, 1.0, 0.0, 0.05)), std::invalid_argument);
}
