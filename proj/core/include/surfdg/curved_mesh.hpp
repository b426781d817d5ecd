#pragma once

#include <memory>
#include <span>
#include <vector>

#include "surfdg/mesh.hpp"
#include "surfdg/quadrature.hpp"
#include "surfdg/reference_element.hpp"

namespace surfdg {

enum class Side { Plus, Minus };
inline Side other(Side s) { return s == Side::Plus ? Side::Minus : Side::Plus; }

/// Geometry data of the element map F at one reference point.
struct ElementFrame {
    Vec3 x;
    Mat32 jacobian;       // dF/dxi
    Mat23 pseudo_inverse; // (J^T J)^-1 J^T
    Mat2 gram_inverse;    // (J^T J)^-1
    Vec3 normal;          // nu_h, unit, outward
    double area_weight;   // sqrt(det J^T J)
};

/// Geometry data along a curved edge at parameter s in [0,1].
struct EdgeFrame {
    Vec3 x;
    Vec3 tangent;         // unit tangent in the global edge direction
    Vec3 conormal;        // n_h of the requested side, unit, outward
    Vec3 normal;          // nu_h of the requested side
    double length_weight; // |dx/ds|
};

/// Degree-k interpolated surface: each base triangle carries n_k geometry
/// nodes (the closest-point projections of its flat Lagrange lattice), and
/// the element map is the Lagrange interpolant through them.
///
/// Geometry nodes of a shared edge are computed from the edge's canonical
/// (low, high) vertex parametrization, so adjacent elements agree bitwise and
/// the piecewise map is continuous. A degree-1 mesh coincides with its base.
class CurvedMesh {
  public:
    /// Wrap explicit geometry nodes (nodes.size() == elements * n_k). Used by
    /// build_curved and by synthetic test fixtures.
    CurvedMesh(SurfaceMesh base, int degree, std::vector<Vec3> nodes);

    const SurfaceMesh& base() const { return base_; }
    int degree() const { return degree_; }
    const ReferenceElement& reference() const { return *ref_; }
    int element_count() const { return base_.triangle_count(); }
    int nodes_per_element() const { return ref_->node_count(); }

    std::span<const Vec3> element_nodes(int elem) const {
        const int n = nodes_per_element();
        return {nodes_.data() + static_cast<size_t>(elem) * n, static_cast<size_t>(n)};
    }

    Vec3 map_point(int elem, const Vec2& ref) const;
    ElementFrame element_frame(int elem, const Vec2& ref) const;

    /// Frame from pretabulated basis values/gradients at the same point.
    ElementFrame frame_from_tables(int elem, const Eigen::VectorXd& phi,
                                   const Eigen::MatrixXd& dphi) const;

    int side_element(int edge, Side side) const {
        const MeshEdge& e = base_.edges[edge];
        return side == Side::Plus ? e.elem_plus : e.elem_minus;
    }
    int side_local_edge(int edge, Side side) const {
        const MeshEdge& e = base_.edges[edge];
        return side == Side::Plus ? e.local_plus : e.local_minus;
    }

    /// Reference point of the given side matching global edge parameter s
    /// (s runs from the low-index vertex to the high-index vertex).
    Vec2 edge_ref_point(int edge, Side side, double s) const;

    /// True if the side's local edge traversal agrees with the global
    /// (low -> high) direction.
    bool edge_forward(int edge, Side side) const;

    EdgeFrame edge_frame(int edge, double s, Side side) const;

    /// Arc length of the curved edge, integrated with the given edge rule.
    double edge_length(int edge, const QuadratureRule& rule) const;

  private:
    SurfaceMesh base_;
    int degree_;
    std::shared_ptr<const ReferenceElement> ref_;
    std::vector<Vec3> nodes_; // element-major, n_k per element
};

/// Interpolate the closest-point projection of the flat lattice nodes.
CurvedMesh build_curved(const SurfaceMesh& base, const ImplicitSurface& surface,
                        int degree);

/// Sup-norms (over quadrature points) of the geometric defect quantities
/// relating the discrete surface to the exact one. All vanish with h -> 0.
struct GeoDiagnostics {
    double sup_distance = 0.0;             // |d|
    double sup_area_defect = 0.0;          // |1 - delta_h|
    double sup_normal_error = 0.0;         // |nu - nu_h|
    double sup_projector_error = 0.0;      // |P - R_h| (spectral)
    double sup_edge_defect = 0.0;          // |1 - delta_e|
    double sup_edge_projector_error = 0.0; // |P - R_e| (spectral)
    double sup_conormal_error = 0.0;       // |n - P n_h|, both sides
    double sup_conormal_sum = 0.0;         // |n_h^+ + n_h^-|
};

GeoDiagnostics geometric_diagnostics(const CurvedMesh& mesh,
                                     const ImplicitSurface& surface);

} // namespace surfdg
