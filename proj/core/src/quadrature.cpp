#include "surfdg/quadrature.hpp"

#include <cmath>

namespace surfdg {

GaussRule gauss_legendre(int n) {
    if (n < 1) throw ValidationError("gauss points", "must be >= 1");
    GaussRule rule;
    rule.points.resize(n);
    rule.weights.resize(n);
    // Newton iteration on P_n over [-1,1], seeded with the Chebyshev guess.
    for (int i = 0; i < n; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.points[n - 1 - i] = 0.5 * (x + 1.0); // map to [0,1], ascending
        rule.weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

QuadratureRule triangle_rule(int degree, int edge_point_count) {
    QuadratureRule rule;
    // Duffy collapse x = s, y = t(1-s): n-point Gauss per direction is exact
    // for total degree d as long as 2n-1 >= d+1.
    const int n = (degree + 3) / 2;
    const GaussRule g = gauss_legendre(n);
    rule.element_points.reserve(n * n);
    rule.element_weights.reserve(n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double s = g.points[i], t = g.points[j];
            rule.element_points.emplace_back(s, t * (1.0 - s));
            rule.element_weights.push_back(g.weights[i] * g.weights[j] * (1.0 - s));
        }
    rule.element_exactness = 2 * n - 2;

    const GaussRule e = gauss_legendre(edge_point_count);
    rule.edge_points = e.points;
    rule.edge_weights = e.weights;
    rule.edge_exactness = 2 * edge_point_count - 1;
    return rule;
}

QuadratureRule make_quadrature(int k) {
    if (k < 1) throw ValidationError("degree", "must be >= 1");
    return triangle_rule(2 * k + 2, (2 * k + 3 + 1) / 2);
}

} // namespace surfdg
