#pragma once

// Analytic scalar and vector fields with exact gradients, Hessians and
// Jacobians, addressable by name for the CLI and experiment configs.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "promesh/linalg.hpp"

namespace promesh {

using Point = std::vector<double>;

struct ScalarField {
    std::string name;
    std::size_t dim = 0;
    std::function<double(const Point&)> value;
    std::function<Point(const Point&)> grad;
    std::function<Mat(const Point&)> hess;
};

struct VectorField {
    std::string name;
    std::size_t dim = 0;         // ambient dimension
    std::size_t components = 0;  // number of components
    std::function<Point(const Point&)> value;
    std::function<Mat(const Point&)> jacobian;  // row i = gradient of component i
};

// Multivariate polynomial: sum of coef * prod x_j^(exps[j]).
struct PolyTerm {
    double coef = 0.0;
    std::vector<int> exps;
};

inline ScalarField polynomial_field(std::size_t d, std::vector<PolyTerm> terms,
                                    std::string name = "polynomial") {
    for (const auto& t : terms)
        if (t.exps.size() != d)
            throw std::invalid_argument("polynomial_field: exponent arity mismatch");
    auto mono = [](const Point& x, const std::vector<int>& e) {
        double v = 1.0;
        for (std::size_t j = 0; j < x.size(); ++j)
            for (int k = 0; k < e[j]; ++k) v *= x[j];
        return v;
    };
    ScalarField f;
    f.name = std::move(name);
    f.dim = d;
    f.value = [terms, mono](const Point& x) {
        double v = 0.0;
        for (const auto& t : terms) v += t.coef * mono(x, t.exps);
        return v;
    };
    f.grad = [d, terms, mono](const Point& x) {
        Point g(d, 0.0);
        for (const auto& t : terms)
            for (std::size_t j = 0; j < d; ++j) {
                if (t.exps[j] == 0) continue;
                std::vector<int> e = t.exps;
                e[j] -= 1;
                g[j] += t.coef * static_cast<double>(t.exps[j]) * mono(x, e);
            }
        return g;
    };
    f.hess = [d, terms, mono](const Point& x) {
        Mat h(d, d);
        for (const auto& t : terms)
            for (std::size_t j = 0; j < d; ++j) {
                if (t.exps[j] == 0) continue;
                for (std::size_t l = 0; l < d; ++l) {
                    std::vector<int> e = t.exps;
                    e[j] -= 1;
                    if (e[l] == 0) continue;
                    const double c =
                        t.coef * static_cast<double>(t.exps[j]) * static_cast<double>(e[l]);
                    e[l] -= 1;
                    h(j, l) += c * mono(x, e);
                }
            }
        return h;
    };
    return f;
}

// prod_i sin(pi x_i)
inline ScalarField sine_product_field(std::size_t d) {
    const double pi = std::acos(-1.0);
    ScalarField f;
    f.name = "sine-product";
    f.dim = d;
    f.value = [d, pi](const Point& x) {
        double v = 1.0;
        for (std::size_t j = 0; j < d; ++j) v *= std::sin(pi * x[j]);
        return v;
    };
    f.grad = [d, pi](const Point& x) {
        Point g(d);
        for (std::size_t j = 0; j < d; ++j) {
            double v = pi * std::cos(pi * x[j]);
            for (std::size_t l = 0; l < d; ++l)
                if (l != j) v *= std::sin(pi * x[l]);
            g[j] = v;
        }
        return g;
    };
    f.hess = [d, pi](const Point& x) {
        Mat h(d, d);
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t l = 0; l < d; ++l) {
                double v = 1.0;
                for (std::size_t m = 0; m < d; ++m) {
                    if (m == j && m == l)
                        v *= -pi * pi * std::sin(pi * x[m]);
                    else if (m == j || m == l)
                        v *= pi * std::cos(pi * x[m]);
                    else
                        v *= std::sin(pi * x[m]);
                }
                h(j, l) = v;
            }
        return h;
    };
    return f;
}

// exp(-|x - c|^2 / w^2)
inline ScalarField gaussian_bump_field(std::size_t d, Point center, double width) {
    if (center.size() != d) throw std::invalid_argument("gaussian_bump_field: center arity");
    if (width <= 0.0) throw std::invalid_argument("gaussian_bump_field: width must be > 0");
    ScalarField f;
    f.name = "gaussian-bump";
    f.dim = d;
    const double iw2 = 1.0 / (width * width);
    auto val = [d, center, iw2](const Point& x) {
        double r2 = 0.0;
        for (std::size_t j = 0; j < d; ++j) r2 += (x[j] - center[j]) * (x[j] - center[j]);
        return std::exp(-r2 * iw2);
    };
    f.value = val;
    f.grad = [d, center, iw2, val](const Point& x) {
        const double v = val(x);
        Point g(d);
        for (std::size_t j = 0; j < d; ++j) g[j] = -2.0 * iw2 * (x[j] - center[j]) * v;
        return g;
    };
    f.hess = [d, center, iw2, val](const Point& x) {
        const double v = val(x);
        Mat h(d, d);
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t l = 0; l < d; ++l) {
                h(j, l) = 4.0 * iw2 * iw2 * (x[j] - center[j]) * (x[l] - center[l]) * v;
                if (j == l) h(j, l) -= 2.0 * iw2 * v;
            }
        return h;
    };
    return f;
}

// |x|^2 + a.x + b
inline ScalarField paraboloid_field(std::size_t d, Point a, double b) {
    if (a.size() != d) throw std::invalid_argument("paraboloid_field: coefficient arity");
    ScalarField f;
    f.name = "paraboloid";
    f.dim = d;
    f.value = [d, a, b](const Point& x) {
        double v = b;
        for (std::size_t j = 0; j < d; ++j) v += x[j] * x[j] + a[j] * x[j];
        return v;
    };
    f.grad = [d, a](const Point& x) {
        Point g(d);
        for (std::size_t j = 0; j < d; ++j) g[j] = 2.0 * x[j] + a[j];
        return g;
    };
    f.hess = [d](const Point&) {
        Mat h(d, d);
        for (std::size_t j = 0; j < d; ++j) h(j, j) = 2.0;
        return h;
    };
    return f;
}

// Gradient of a scalar field as a vector field (Jacobian = Hessian).
inline VectorField gradient_field(const ScalarField& f) {
    VectorField g;
    g.name = f.name + "-gradient";
    g.dim = f.dim;
    g.components = f.dim;
    g.value = f.grad;
    g.jacobian = f.hess;
    return g;
}

// Named registry used by the CLI and experiment configs.
inline ScalarField scalar_field(const std::string& name, std::size_t d) {
    if (name == "sine-product") return sine_product_field(d);
    if (name == "gaussian-bump") return gaussian_bump_field(d, Point(d, 0.5), 0.5);
    if (name == "paraboloid") return paraboloid_field(d, Point(d, 1.0), 0.5);
    if (name == "affine") {
        std::vector<PolyTerm> terms{{1.0, std::vector<int>(d, 0)}};
        for (std::size_t j = 0; j < d; ++j) {
            std::vector<int> e(d, 0);
            e[j] = 1;
            terms.push_back({0.5 + static_cast<double>(j), e});
        }
        return polynomial_field(d, terms, "affine");
    }
    if (name == "quadratic-bubble") {
        // prod x_j (1 - x_j), vanishing on the unit-box boundary
        std::vector<PolyTerm> terms;
        // expand recursively: start with {coef 1, empty}
        std::vector<PolyTerm> acc{{1.0, {}}};
        for (std::size_t j = 0; j < d; ++j) {
            std::vector<PolyTerm> next;
            for (const auto& t : acc) {
                PolyTerm lin = t, quad = t;
                lin.exps.push_back(1);
                quad.exps.push_back(2);
                quad.coef = -quad.coef;
                next.push_back(lin);
                next.push_back(quad);
            }
            acc = std::move(next);
        }
        return polynomial_field(d, acc, "quadratic-bubble");
    }
    throw std::invalid_argument("unknown scalar field: " + name);
}

}  // namespace promesh
