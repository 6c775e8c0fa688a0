#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "promesh/quadrature.hpp"

using namespace promesh;

namespace {

double apply_rule(const QuadratureRule& r, const std::vector<int>& mono) {
    double s = 0.0;
    for (std::size_t q = 0; q < r.nodes.size(); ++q) {
        double v = 1.0;
        for (std::size_t j = 0; j < r.dim; ++j)
            for (int k = 0; k < mono[j]; ++k) v *= r.nodes[q][j];
        s += r.weights[q] * v;
    }
    return s;
}

void all_monomials(std::size_t d, std::size_t deg, std::vector<int>& cur,
                   std::vector<std::vector<int>>& out) {
    if (cur.size() == d) {
        out.push_back(cur);
        return;
    }
    int used = 0;
    for (int v : cur) used += v;
    for (int v = 0; v <= int(deg) - used; ++v) {
        cur.push_back(v);
        all_monomials(d, deg, cur, out);
        cur.pop_back();
    }
}

}  // namespace

TEST_CASE("weights sum to the reference simplex volume") {
    for (std::size_t d = 1; d <= 5; ++d) {
        double fact = 1.0;
        for (std::size_t k = 2; k <= d; ++k) fact *= double(k);
        for (std::size_t e : {1u, 3u, 5u, 7u}) {
            QuadratureRule r = quadrature_rule(d, e);
            double s = 0.0;
            for (double w : r.weights) s += w;
            CHECK(s == Catch::Approx(1.0 / fact).epsilon(1e-13));
        }
    }
}

TEST_CASE("closed-form monomial moments") {
    // int over unit triangle of x^2 = 2!/(4!) = 1/12.
    CHECK(simplex_monomial_integral({2, 0}) == Catch::Approx(1.0 / 12.0));
    // int over unit tetrahedron of xyz = 1/720.
    CHECK(simplex_monomial_integral({1, 1, 1}) == Catch::Approx(1.0 / 720.0));
    CHECK(simplex_monomial_integral({0, 0}) == Catch::Approx(0.5));
}

TEST_CASE("rules integrate every monomial up to their exactness") {
    for (std::size_t d = 1; d <= 4; ++d) {
        for (std::size_t e : {1u, 2u, 3u, 5u, 7u}) {
            QuadratureRule r = quadrature_rule(d, e);
            REQUIRE(r.exactness >= e);
            std::vector<std::vector<int>> monos;
            std::vector<int> cur;
            all_monomials(d, r.exactness, cur, monos);
            for (const auto& mono : monos) {
                const double want = simplex_monomial_integral(mono);
                const double got = apply_rule(r, mono);
                INFO("d=" << d << " exactness=" << r.exactness);
                CHECK(got == Catch::Approx(want).epsilon(1e-12).margin(1e-15));
            }
        }
    }
}

TEST_CASE("consolidation leaves no duplicate nodes") {
    QuadratureRule r = quadrature_rule(3, 7);
    for (std::size_t i = 0; i < r.nodes.size(); ++i)
        for (std::size_t j = 0; j < i; ++j) {
            double dist = 0.0;
            for (std::size_t k = 0; k < 3; ++k)
                dist += std::fabs(r.nodes[i][k] - r.nodes[j][k]);
            CHECK(dist > 1e-12);
        }
}

TEST_CASE("unsupported requests are rejected") {
    CHECK_THROWS_AS(quadrature_rule(6, 3), std::invalid_argument);
    CHECK_THROWS_AS(quadrature_rule(2, 11), std::invalid_argument);
    CHECK_THROWS_AS(quadrature_rule(0, 1), std::invalid_argument);
}
