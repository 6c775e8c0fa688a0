#pragma once

// Grundmann-Moller quadrature on the unit d-simplex {x >= 0, sum x <= 1}.
// Rules exist for any odd degree 2s+1 in any dimension; nodes with equal
// (exact, rational) coordinates across the alternating-sign layers are
// consolidated so weights of coincident nodes merge.

#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "promesh/geom.hpp"

namespace promesh {

inline constexpr std::size_t kMaxQuadratureDim = 5;
inline constexpr std::size_t kMaxQuadratureExactness = 10;

struct QuadratureRule {
    std::size_t dim = 0;
    std::size_t exactness = 0;            // all monomials up to this degree
    std::vector<Point> nodes;             // reference coordinates
    std::vector<double> weights;          // sum to 1/d!
};

namespace detail {

inline double factorial_d(std::size_t n) {
    double f = 1.0;
    for (std::size_t k = 2; k <= n; ++k) f *= static_cast<double>(k);
    return f;
}

// Enumerate all beta in N_0^(d+1) with |beta| = total, lexicographically.
inline void compositions(std::size_t total, std::size_t parts, std::vector<int>& cur,
                         std::vector<std::vector<int>>& out) {
    if (cur.size() == parts - 1) {
        cur.push_back(static_cast<int>(total) -
                      std::accumulate(cur.begin(), cur.end(), 0));
        out.push_back(cur);
        cur.pop_back();
        return;
    }
    for (std::size_t v = 0; v <= total - static_cast<std::size_t>(std::accumulate(
                                            cur.begin(), cur.end(), 0));
         ++v) {
        cur.push_back(static_cast<int>(v));
        compositions(total, parts, cur, out);
        cur.pop_back();
    }
}

}  // namespace detail

inline QuadratureRule quadrature_rule(std::size_t d, std::size_t exactness) {
    if (d < 1 || d > kMaxQuadratureDim)
        throw std::invalid_argument("quadrature_rule: dimension out of range");
    if (exactness > kMaxQuadratureExactness)
        throw std::invalid_argument("quadrature_rule: unsupported exactness");
    const std::size_t s = exactness / 2;  // degree 2s+1 >= exactness
    const std::size_t degree = 2 * s + 1;

    // Consolidate by exact rational coordinates: numerators are odd, the
    // denominator per layer is d + 2s + 1 - 2i.
    std::map<std::vector<std::pair<long, long>>, double> acc;
    for (std::size_t i = 0; i <= s; ++i) {
        const long D = static_cast<long>(d + 2 * s + 1 - 2 * i);
        double w = std::pow(2.0, -2.0 * static_cast<double>(s)) *
                   std::pow(static_cast<double>(D), static_cast<double>(degree)) /
                   (detail::factorial_d(i) * detail::factorial_d(degree + d - i));
        if (i % 2 == 1) w = -w;

        std::vector<std::vector<int>> betas;
        std::vector<int> cur;
        detail::compositions(s - i, d + 1, cur, betas);
        for (const auto& beta : betas) {
            // Barycentric (2b+1)/D; drop the first coordinate for reference
            // coordinates relative to vertices {0, e_1, ..., e_d}.
            std::vector<std::pair<long, long>> key;
            for (std::size_t j = 1; j <= d; ++j) {
                long num = 2l * beta[j] + 1l;
                long den = D;
                const long g = std::gcd(num, den);
                key.emplace_back(num / g, den / g);
            }
            acc[key] += w;
        }
    }

    QuadratureRule rule;
    rule.dim = d;
    rule.exactness = degree;
    for (const auto& [key, w] : acc) {
        Point x(d);
        for (std::size_t j = 0; j < d; ++j)
            x[j] = static_cast<double>(key[j].first) / static_cast<double>(key[j].second);
        rule.nodes.push_back(std::move(x));
        rule.weights.push_back(w);
    }
    return rule;
}

// Closed form for reference-simplex monomial moments:
// int x^a dx = (prod a_j!) / (|a| + d)!.
inline double simplex_monomial_integral(const std::vector<int>& a) {
    std::size_t total = 0;
    double num = 1.0;
    for (int e : a) {
        num *= detail::factorial_d(static_cast<std::size_t>(e));
        total += static_cast<std::size_t>(e);
    }
    return num / detail::factorial_d(total + a.size());
}

}  // namespace promesh
