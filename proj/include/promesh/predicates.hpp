#pragma once

// Geometric sign predicates: floating-point evaluation with a conservative
// magnitude filter, falling back to exact rational arithmetic when the
// floating-point result is too small to trust. A deterministic symbolic
// perturbation (index-ordered) resolves exact ties during triangulation.

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "promesh/linalg.hpp"

namespace promesh {

using Rational = boost::multiprecision::cpp_rational;

// Exact double -> rational conversion via mantissa/exponent decomposition.
inline Rational to_rational(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("to_rational: non-finite input");
    if (x == 0.0) return Rational(0);
    int exp = 0;
    double m = std::frexp(x, &exp);  // x = m * 2^exp, |m| in [0.5, 1)
    // 53 doublings make the mantissa integral.
    std::int64_t mi = static_cast<std::int64_t>(std::ldexp(m, 53));
    exp -= 53;
    Rational r(mi);
    boost::multiprecision::cpp_int two(1);
    if (exp >= 0) {
        two <<= exp;
        r *= Rational(two);
    } else {
        two <<= -exp;
        r /= Rational(two);
    }
    return r;
}

// Exact determinant of a small rational matrix (Gaussian elimination,
// exact arithmetic so no pivot-size concerns beyond zero tests).
inline Rational det_exact(std::vector<std::vector<Rational>> m) {
    const std::size_t n = m.size();
    Rational d(1);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        while (p < n && m[p][k] == 0) ++p;
        if (p == n) return Rational(0);
        if (p != k) {
            std::swap(m[p], m[k]);
            d = -d;
        }
        d *= m[k][k];
        for (std::size_t i = k + 1; i < n; ++i) {
            if (m[i][k] == 0) continue;
            Rational f = m[i][k] / m[k][k];
            for (std::size_t j = k; j < n; ++j) m[i][j] -= f * m[k][j];
        }
    }
    return d;
}

inline int sign_of(const Rational& r) {
    if (r > 0) return 1;
    if (r < 0) return -1;
    return 0;
}

// Sign of det(M) for a small double matrix. Uses the double value when it is
// comfortably larger than a Hadamard-style roundoff envelope, otherwise the
// exact rational path.
inline int det_sign_filtered(const Mat& M) {
    const std::size_t n = M.rows;
    double hadamard = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        double rn = 0.0;
        for (std::size_t j = 0; j < n; ++j) rn += M(i, j) * M(i, j);
        hadamard *= std::sqrt(rn);
    }
    const double d = det(M);
    const double threshold = 1e-10 * hadamard;
    if (std::fabs(d) > threshold) return d > 0 ? 1 : -1;
    std::vector<std::vector<Rational>> R(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) R[i][j] = to_rational(M(i, j));
    return sign_of(det_exact(R));
}

using PointRef = std::vector<double>;

// Orientation of d+1 points in R^d: sign of det([p1-p0, ..., pd-p0]).
inline int orientation(const std::vector<PointRef>& pts) {
    const std::size_t d = pts[0].size();
    if (pts.size() != d + 1) throw std::invalid_argument("orientation: need d+1 points");
    Mat M(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) M(i, j) = pts[i + 1][j] - pts[0][j];
    return det_sign_filtered(M);
}

enum class SphereSide { inside, on, outside };

// Exact in-sphere test: position of q relative to the circumsphere of the
// d+1 simplex points. Sign normalized so the result is orientation-free.
inline SphereSide in_sphere(const std::vector<PointRef>& simplex, const PointRef& q) {
    const std::size_t d = q.size();
    if (simplex.size() != d + 1) throw std::invalid_argument("in_sphere: need d+1 simplex points");
    std::vector<PointRef> opts(simplex);
    const int orient = orientation(opts);
    if (orient == 0) throw std::invalid_argument("in_sphere: degenerate simplex");

    Mat M(d + 1, d + 1);
    for (std::size_t i = 0; i <= d; ++i) {
        double ss = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            const double v = simplex[i][j] - q[j];
            M(i, j) = v;
            ss += v * v;
        }
        M(i, d) = ss;
    }
    // Lifted-determinant parity: q inside iff (-1)^d * det * orient > 0.
    const int parity = (d % 2 == 0) ? 1 : -1;
    const int s = det_sign_filtered(M) * orient * parity;
    if (s > 0) return SphereSide::inside;
    if (s < 0) return SphereSide::outside;
    return SphereSide::on;
}

// In-sphere with deterministic symbolic perturbation for triangulation
// construction: exact ties are broken by perturbing the paraboloid lift of
// point l by -eps^(l+1) (lower global index dominates). Never returns "on"
// unless the configuration is affinely degenerate at every level.
// `idx` are the global point indices of the simplex rows; `qidx` of q.
inline SphereSide in_sphere_perturbed(const std::vector<PointRef>& simplex,
                                      const std::vector<int>& idx, const PointRef& q, int qidx) {
    SphereSide base = in_sphere(simplex, q);
    if (base != SphereSide::on) return base;

    const std::size_t d = q.size();
    const int orient = orientation(simplex);

    // Exact tie. The determinant rows are (p_i - q, |p_i - q|^2) for the
    // simplex rows; q itself contributes through every row. Perturbing the
    // lift of point l by -eps_l changes the last-column entry of row i by
    // -eps_{idx[i]} (if l is a simplex vertex) and by +eps_{qidx} in every
    // row (since the lift of q is subtracted). Expanding in the eps order
    // (ascending global index = descending magnitude), the first non-zero
    // signed cofactor decides.
    //
    // Build the unperturbed rational matrix once.
    std::vector<std::vector<Rational>> R(d + 1, std::vector<Rational>(d + 1));
    for (std::size_t i = 0; i <= d; ++i) {
        Rational ss(0);
        for (std::size_t j = 0; j < d; ++j) {
            Rational v = to_rational(simplex[i][j]) - to_rational(q[j]);
            R[i][j] = v;
            ss += v * v;
        }
        R[i][d] = ss;
    }

    // Participants ordered by ascending global index.
    struct Part {
        int gidx;
        int row;  // -1 for q
    };
    std::vector<Part> parts;
    for (std::size_t i = 0; i <= d; ++i) parts.push_back({idx[i], static_cast<int>(i)});
    parts.push_back({qidx, -1});
    std::sort(parts.begin(), parts.end(), [](const Part& a, const Part& b) { return a.gidx < b.gidx; });

    // Derivative of det with respect to eps_l:
    //  - l a simplex vertex (row r): d(det)/d(-eps_r) on entry (r,d) => the
    //    perturbation -eps adds -eps * cofactor(r, d).
    //  - l == q: every last-column entry gains +eps => +eps * sum of
    //    cofactors(i, d).
    auto cofactor = [&](std::size_t r, std::size_t c) {
        std::vector<std::vector<Rational>> sub;
        sub.reserve(d);
        for (std::size_t i = 0; i <= d; ++i) {
            if (i == r) continue;
            std::vector<Rational> row;
            row.reserve(d);
            for (std::size_t j = 0; j <= d; ++j) {
                if (j == c) continue;
                row.push_back(R[i][j]);
            }
            sub.push_back(std::move(row));
        }
        Rational m = det_exact(std::move(sub));
        if (((r + c) % 2) != 0) m = -m;
        return m;
    };

    const int parity = (d % 2 == 0) ? 1 : -1;
    for (const Part& p : parts) {
        Rational term(0);
        if (p.row >= 0) {
            term = -cofactor(static_cast<std::size_t>(p.row), d);
        } else {
            for (std::size_t i = 0; i <= d; ++i) term += cofactor(i, d);
        }
        const int s = sign_of(term) * orient * parity;
        if (s > 0) return SphereSide::inside;
        if (s < 0) return SphereSide::outside;
    }
    return SphereSide::on;  // fully degenerate configuration
}

}  // namespace promesh
