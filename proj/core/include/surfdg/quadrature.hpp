#pragma once

#include <vector>

#include "surfdg/geometry.hpp"

namespace surfdg {

/// Gauss-Legendre nodes and weights on [0,1], exact for degree 2n-1.
struct GaussRule {
    std::vector<double> points;
    std::vector<double> weights;
};

GaussRule gauss_legendre(int n);

/// Quadrature on the reference triangle and the reference edge [0,1].
///
/// The element rule is a collapsed (Duffy) tensor-product Gauss rule: all
/// weights are positive and they sum to the reference area 1/2. The edge rule
/// is plain Gauss-Legendre with weights summing to 1.
struct QuadratureRule {
    std::vector<Vec2> element_points;
    std::vector<double> element_weights;
    std::vector<double> edge_points;
    std::vector<double> edge_weights;
    int element_exactness = 0; // exact for total degree <= this
    int edge_exactness = 0;

    Vec3 barycentric(int i) const {
        const Vec2& p = element_points[i];
        return Vec3(1.0 - p.x() - p.y(), p.x(), p.y());
    }
};

/// Triangle rule exact for total degree >= `degree`.
QuadratureRule triangle_rule(int degree, int edge_point_count);

/// Rule used for assembly and error integration with degree-k spaces:
/// element exactness >= 2k+2, edge rule with ceil((2k+3)/2) Gauss points.
QuadratureRule make_quadrature(int k);

} // namespace surfdg
