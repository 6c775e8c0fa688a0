#pragma once

// Small dense linear algebra helpers sized for d <= 5 geometry and
// moderate Vandermonde systems. Row-major storage.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace promesh {

struct Mat {
    std::size_t rows = 0, cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), a(r * c, fill) {}

    double& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

inline double dot(const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

inline double norm2(const std::vector<double>& x) { return std::sqrt(dot(x, x)); }

inline std::vector<double> sub(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] - y[i];
    return r;
}

inline std::vector<double> add(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] + y[i];
    return r;
}

inline std::vector<double> scale(const std::vector<double>& x, double s) {
    std::vector<double> r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] * s;
    return r;
}

struct LinearSolveResult {
    std::vector<double> x;
    bool singular = false;
    double cond_estimate = 0.0;  // crude: max/min pivot magnitude
};

// Gaussian elimination with partial pivoting. Destroys local copies only.
inline LinearSolveResult solve(Mat A, std::vector<double> b) {
    const std::size_t n = A.rows;
    if (A.cols != n || b.size() != n) throw std::invalid_argument("solve: shape mismatch");
    LinearSolveResult res;
    double max_piv = 0.0, min_piv = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::fabs(A(i, k)) > std::fabs(A(p, k))) p = i;
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(A(k, j), A(p, j));
            std::swap(b[k], b[p]);
        }
        const double piv = A(k, k);
        if (piv == 0.0) {
            res.singular = true;
            res.x.assign(n, 0.0);
            return res;
        }
        const double ap = std::fabs(piv);
        max_piv = (k == 0) ? ap : std::max(max_piv, ap);
        min_piv = (k == 0) ? ap : std::min(min_piv, ap);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = A(i, k) / piv;
            if (f == 0.0) continue;
            for (std::size_t j = k; j < n; ++j) A(i, j) -= f * A(k, j);
            b[i] -= f * b[k];
        }
    }
    res.x.assign(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= A(i, j) * res.x[j];
        res.x[i] = s / A(i, i);
    }
    res.cond_estimate = (min_piv > 0.0) ? max_piv / min_piv : std::numeric_limits<double>::infinity();
    return res;
}

// Gauss-Jordan inverse with partial pivoting. Throws on singular input.
inline Mat invert(Mat A) {
    const std::size_t n = A.rows;
    if (A.cols != n) throw std::invalid_argument("invert: non-square");
    Mat I(n, n);
    for (std::size_t i = 0; i < n; ++i) I(i, i) = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::fabs(A(i, k)) > std::fabs(A(p, k))) p = i;
        if (A(p, k) == 0.0) throw std::invalid_argument("invert: singular matrix");
        if (p != k)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(A(k, j), A(p, j));
                std::swap(I(k, j), I(p, j));
            }
        const double piv = A(k, k);
        for (std::size_t j = 0; j < n; ++j) {
            A(k, j) /= piv;
            I(k, j) /= piv;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k) continue;
            const double f = A(i, k);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) {
                A(i, j) -= f * A(k, j);
                I(i, j) -= f * I(k, j);
            }
        }
    }
    return I;
}

inline double inf_norm(const Mat& M) {
    double best = 0.0;
    for (std::size_t i = 0; i < M.rows; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < M.cols; ++j) s += std::fabs(M(i, j));
        best = std::max(best, s);
    }
    return best;
}

// Determinant via partial-pivot elimination.
inline double det(Mat A) {
    const std::size_t n = A.rows;
    if (A.cols != n) throw std::invalid_argument("det: non-square");
    double d = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::fabs(A(i, k)) > std::fabs(A(p, k))) p = i;
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(A(k, j), A(p, j));
            d = -d;
        }
        const double piv = A(k, k);
        if (piv == 0.0) return 0.0;
        d *= piv;
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = A(i, k) / piv;
            for (std::size_t j = k; j < n; ++j) A(i, j) -= f * A(k, j);
        }
    }
    return d;
}

}  // namespace promesh
