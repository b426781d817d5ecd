#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "surfdg/geometry.hpp"

namespace surfdg {

/// Number of Lagrange nodes of degree k on a triangle.
inline int lagrange_node_count(int k) { return (k + 1) * (k + 2) / 2; }

/// Degree-k Lagrange element on the reference triangle
/// {(x,y) : x,y >= 0, x+y <= 1} with nodes on the uniform lattice (i/k, j/k).
///
/// Basis functions are represented in the monomial basis through the inverse
/// Vandermonde matrix; they satisfy the Kronecker property phi_i(x_j) = d_ij.
class ReferenceElement {
  public:
    explicit ReferenceElement(int degree);

    int degree() const { return degree_; }
    int node_count() const { return static_cast<int>(nodes_.size()); }
    const std::vector<Vec2>& nodes() const { return nodes_; }

    /// Values of all basis functions at a reference point.
    Eigen::VectorXd basis(const Vec2& p) const;
    /// Reference gradients of all basis functions at a point (node_count x 2).
    Eigen::MatrixXd basis_gradient(const Vec2& p) const;

    /// Reference vertices, in order.
    static std::array<Vec2, 3> vertices();

    /// Node indices lying on local edge `e` (edge e is opposite vertex e),
    /// ordered along the edge from its first endpoint to its second:
    /// edge 0 = (v1,v2), edge 1 = (v2,v0), edge 2 = (v0,v1).
    std::vector<int> edge_nodes(int e) const;

    /// Endpoint vertex numbers (first, second) of local edge e.
    static std::array<int, 2> edge_vertices(int e);

    /// Reference point at parameter s in [0,1] along local edge e, measured
    /// from the edge's first endpoint.
    static Vec2 edge_point(int e, double s);

  private:
    Eigen::VectorXd monomials(const Vec2& p) const;
    Eigen::MatrixXd monomial_gradients(const Vec2& p) const;

    int degree_;
    std::vector<Vec2> nodes_;
    std::vector<std::array<int, 2>> exponents_; // monomial x^a y^b powers
    Eigen::MatrixXd coeffs_;                    // phi_i = sum_j coeffs_(i,j) m_j
};

} // namespace surfdg
