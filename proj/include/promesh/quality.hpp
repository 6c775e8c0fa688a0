#pragma once

// Per-element and mesh-wide quality quantities: thickness, regularity,
// min-containment radii, edge-length functionals and their aggregates.

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "promesh/geom.hpp"
#include "promesh/mesh.hpp"

namespace promesh {

struct ElementMetrics {
    double delta = 0.0;        // diameter Delta(K)
    double rho = 0.0;          // insphere diameter rho(K)
    double xi = 0.0;           // thickness Xi(K)
    double sigma = 0.0;        // regularity Delta/rho
    double r_min = 0.0;        // min-containment ball radius
    double theta_local = 0.0;  // Theta(K) = sum |edge|^2 * |K|
    double upsilon = 0.0;      // sqrt(sum |edge|^2) / Delta
    double volume = 0.0;
};

struct QualityReport {
    double h = 0.0;
    double c_delta = 0.0;
    double c_xi = 0.0;
    double c_sigma = 0.0;
    double c_upsilon = 0.0;
    double theta = 0.0;
    double r_max = 0.0;
    std::size_t card = 0;
    std::vector<ElementMetrics> per_element;
};

inline ElementMetrics element_metrics(const Simplex& s) {
    s.check();
    if (is_degenerate(s)) throw DegenerateSimplexError("element_metrics: degenerate simplex");
    ElementMetrics em;
    em.volume = simplex_volume(s);
    em.delta = diameter(s);
    em.rho = insphere_diameter(s);
    em.xi = thickness(s);
    em.sigma = em.delta / em.rho;
    em.r_min = min_containment_ball(s).radius;
    double edge_sq_sum = 0.0;
    for (std::size_t i = 0; i < s.vertices.size(); ++i)
        for (std::size_t j = 0; j < i; ++j) {
            const Point e = sub(s.vertices[i], s.vertices[j]);
            edge_sq_sum += dot(e, e);
        }
    em.theta_local = edge_sq_sum * em.volume;
    em.upsilon = std::sqrt(edge_sq_sum) / em.delta;
    return em;
}

inline QualityReport quality_report(const SimplicialMesh& m) {
    if (m.cells.empty()) throw std::invalid_argument("quality_report: empty mesh");
    QualityReport rep;
    rep.card = m.cells.size();
    double min_delta = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < m.cells.size(); ++c) {
        ElementMetrics em = element_metrics(m.cell_simplex(c));
        rep.h = std::max(rep.h, em.delta);
        min_delta = std::min(min_delta, em.delta);
        rep.c_xi = (c == 0) ? em.xi : std::min(rep.c_xi, em.xi);
        rep.c_sigma = std::max(rep.c_sigma, em.sigma);
        rep.c_upsilon = std::max(rep.c_upsilon, em.upsilon);
        rep.theta += em.theta_local;
        rep.r_max = std::max(rep.r_max, em.r_min);
        rep.per_element.push_back(em);
    }
    rep.c_delta = rep.h / min_delta;
    return rep;
}

inline double min_diameter(const QualityReport& rep) { return rep.h / rep.c_delta; }

// Theta <= 2^{d+1} (d+1) / (d-1)! * R_max^{d+2} * card
inline double theta_upper_bound(const QualityReport& rep, std::size_t d) {
    if (d < 2) throw std::invalid_argument("theta_upper_bound: requires d >= 2");
    double fact = 1.0;
    for (std::size_t k = 2; k <= d - 1; ++k) fact *= static_cast<double>(k);
    return std::pow(2.0, static_cast<double>(d + 1)) * static_cast<double>(d + 1) / fact *
           std::pow(rep.r_max, static_cast<double>(d + 2)) * static_cast<double>(rep.card);
}

// JSON emission: stable field order, 17 significant digits.
inline void write_quality_json(const QualityReport& rep, std::ostream& out) {
    using detail::fmt17;
    out << "{\"h\":" << fmt17(rep.h) << ",\"c_delta\":" << fmt17(rep.c_delta)
        << ",\"c_xi\":" << fmt17(rep.c_xi) << ",\"c_sigma\":" << fmt17(rep.c_sigma)
        << ",\"c_upsilon\":" << fmt17(rep.c_upsilon) << ",\"theta\":" << fmt17(rep.theta)
        << ",\"theta_note\":\"unscaled edge-length functional (no 1/((d+1)(d+2)) factor)\""
        << ",\"r_max\":" << fmt17(rep.r_max) << ",\"card\":" << rep.card << ",\"per_element\":[";
    for (std::size_t i = 0; i < rep.per_element.size(); ++i) {
        const ElementMetrics& e = rep.per_element[i];
        if (i) out << ',';
        out << "{\"delta\":" << fmt17(e.delta) << ",\"rho\":" << fmt17(e.rho)
            << ",\"xi\":" << fmt17(e.xi) << ",\"sigma\":" << fmt17(e.sigma)
            << ",\"r_min\":" << fmt17(e.r_min) << ",\"theta_local\":" << fmt17(e.theta_local)
            << ",\"upsilon\":" << fmt17(e.upsilon) << ",\"volume\":" << fmt17(e.volume) << '}';
    }
    out << "]}\n";
}

// CSV: one row per element plus a summary row.
inline void write_quality_csv(const QualityReport& rep, std::ostream& out) {
    using detail::fmt17;
    out << "row,delta,rho,xi,sigma,r_min,theta_local,upsilon,volume\n";
    for (std::size_t i = 0; i < rep.per_element.size(); ++i) {
        const ElementMetrics& e = rep.per_element[i];
        out << i << ',' << fmt17(e.delta) << ',' << fmt17(e.rho) << ',' << fmt17(e.xi) << ','
            << fmt17(e.sigma) << ',' << fmt17(e.r_min) << ',' << fmt17(e.theta_local) << ','
            << fmt17(e.upsilon) << ',' << fmt17(e.volume) << '\n';
    }
    out << "summary," << fmt17(rep.h) << ",," << fmt17(rep.c_xi) << ',' << fmt17(rep.c_sigma)
        << ',' << fmt17(rep.r_max) << ',' << fmt17(rep.theta) << ',' << fmt17(rep.c_upsilon)
        << ",\n";
}

}  // namespace promesh
