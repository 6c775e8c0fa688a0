#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "promesh/fem.hpp"

using namespace promesh;

namespace {

SimplicialMesh five_point_square() {
    return load_mesh(
        "2 5 4\n0 0\n1 0\n1 1\n0 1\n0.5 0.5\n"
        "0 1 4\n1 2 4\n2 3 4\n0 3 4\n",
        MeshFormat::text);
}

}  // namespace

TEST_CASE("assembly rejects meshes without interior vertices") {
    SimplicialMesh tri = load_mesh("2 3 1\n0 0\n1 0\n0 1\n0 1 2\n", MeshFormat::text);
    PoissonProblem p = mms_problem("sine-product", tri);
    CHECK_THROWS_AS(assemble(p), std::invalid_argument);
}

TEST_CASE("five-point square assembly") {
    SimplicialMesh m = five_point_square();
    PoissonProblem p = mms_problem("sine-product", m);
    AssembledSystem sys = assemble(p);
    CHECK(sys.interior == std::vector<int>{4});
    CHECK(sys.boundary.size() == 4);
    CHECK(sys.a_red.rows == 1);
    CHECK(sys.a_red(0, 0) == Catch::Approx(4.0));
    // stiffness row sums vanish (constants in the kernel)
    for (std::size_t i = 0; i < 5; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < 5; ++j) s += sys.a_full(i, j);
        CHECK(s == Catch::Approx(0.0).margin(1e-12));
    }
}

TEST_CASE("zero forcing gives the zero solution") {
    SimplicialMesh m = structured_grid(2, 4);
    PoissonProblem p;
    p.mesh = &m;
    p.forcing = polynomial_field(2, {{0.0, {0, 0}}});
    AssembledSystem sys = assemble(p);
    DiscreteSolution sol = solve(p, sys);
    for (double v : sol.nodal) CHECK(v == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("one-unknown system solves in one step") {
    SimplicialMesh m = five_point_square();
    PoissonProblem p = mms_problem("quadratic-bubble", m);
    AssembledSystem sys = assemble(p);
    DiscreteSolution sol = solve(p, sys);
    CHECK(sol.iterations == 1);
    CHECK(sol.residual <= 1e-10);
}

TEST_CASE("piecewise-linear exact solutions are reproduced") {
    SimplicialMesh m = structured_grid(2, 4);
    PoissonProblem p = mms_problem("affine", m);
    AssembledSystem sys = assemble(p);
    DiscreteSolution sol = solve(p, sys);
    QuadratureRule rule = quadrature_rule(2, 7);
    CHECK(gradient_error(p, sol.nodal, rule) <= 1e-10);
}

TEST_CASE("sine MMS converges with order one in H1") {
    for (std::size_t d : {2u, 3u}) {
        std::vector<double> errs, hs;
        for (std::size_t n : {4u, 8u, 16u}) {
            if (d == 3 && n == 16) continue;
            SimplicialMesh m = structured_grid(d, n);
            PoissonProblem p = mms_problem("sine-product", m);
            AssembledSystem sys = assemble(p);
            DiscreteSolution sol = solve(p, sys);
            CHECK(sol.residual <= 1e-10);
            errs.push_back(gradient_error(p, sol.nodal, quadrature_rule(d, 7)));
            hs.push_back(1.0 / double(n));
        }
        const double slope = std::log(errs.front() / errs.back()) /
                             std::log(hs.front() / hs.back());
        INFO("d=" << d);
        CHECK(slope > 0.9);
        CHECK(slope < 1.1);
    }
}

TEST_CASE("energy functional identities and minimization") {
    SimplicialMesh m = structured_grid(2, 6);
    PoissonProblem p = mms_problem("sine-product", m);
    AssembledSystem sys = assemble(p);
    DiscreteSolution sol = solve(p, sys);

    std::vector<double> zero(sol.nodal.size(), 0.0);
    CHECK(energy_functional(zero, sys) == Catch::Approx(0.0).margin(1e-14));

    // J(u_h) = -a(u_h, u_h)
    double auu = 0.0;
    for (std::size_t i = 0; i < sol.nodal.size(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < sol.nodal.size(); ++j)
            s += sys.a_full(i, j) * sol.nodal[j];
        auu += sol.nodal[i] * s;
    }
    const double j_uh = energy_functional(sol.nodal, sys);
    CHECK(j_uh == Catch::Approx(-auu).epsilon(1e-9));
    CHECK(j_uh <= 0.0);

    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-0.3, 0.3);
    for (int t = 0; t < 20; ++t) {
        std::vector<double> v = sol.nodal;
        for (int vi : sys.interior) v[static_cast<std::size_t>(vi)] += u(rng);
        CHECK(energy_functional(v, sys) >= j_uh - 1e-12);
    }
}

TEST_CASE("galerkin orthogonality") {
    SimplicialMesh m = structured_grid(2, 8);
    PoissonProblem p = mms_problem("sine-product", m);
    AssembledSystem sys = assemble(p);
    DiscreteSolution sol = solve(p, sys);
    QuadratureRule rule = quadrature_rule(2, 7);
    const double gn = gradient_norm(*p.exact, m, 2.0, rule);

    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 10; ++t) {
        std::vector<double> w(sol.nodal.size(), 0.0);
        for (int vi : sys.interior) w[static_cast<std::size_t>(vi)] = u(rng);
        // a(u_h, w) from the matrix
        double a_uh_w = 0.0, a_w_w = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            double su = 0.0, sw = 0.0;
            for (std::size_t j = 0; j < w.size(); ++j) {
                su += sys.a_full(i, j) * sol.nodal[j];
                sw += sys.a_full(i, j) * w[j];
            }
            a_uh_w += w[i] * su;
            a_w_w += w[i] * sw;
        }
        // a(u, w_h) = L(w_h) by the weak form; L(w_h) = load . w for P1 nodal w
        double a_u_w = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) a_u_w += sys.load_full[i] * w[i];
        const double resid = std::fabs(a_u_w - a_uh_w);
        CHECK(resid <= 1e-8 * gn * std::sqrt(a_w_w) + 1e-10);
    }
}

TEST_CASE("cea step and theorem bounds") {
    for (const char* name : {"sine-product", "quadratic-bubble", "affine"}) {
        SimplicialMesh m = structured_grid(2, 8);
        PoissonProblem p = mms_problem(name, m);
        AssembledSystem sys = assemble(p);
        DiscreteSolution sol = solve(p, sys);
        QualityReport q = quality_report(m);
        QuadratureRule rule = quadrature_rule(2, 7);
        ApproximationChecks checks = approximation_bounds(p, sol, q, 1.0, rule);
        INFO(name);
        CHECK(checks.cea.pass);
        CHECK(checks.theorem_a.pass);
        CHECK(checks.theorem_b.pass);
    }
}
