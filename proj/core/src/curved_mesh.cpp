#include "surfdg/curved_mesh.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

namespace surfdg {

namespace {

// Outward 2D normals of the reference edges.
Vec2 ref_edge_outward(int local_edge) {
    switch (local_edge) {
    case 0: return Vec2(M_SQRT1_2, M_SQRT1_2);
    case 1: return Vec2(-1, 0);
    case 2: return Vec2(0, -1);
    default: throw std::out_of_range("edge index");
    }
}

double spectral_norm(const Mat3& m) {
    return m.jacobiSvd().singularValues()(0);
}

} // namespace

CurvedMesh::CurvedMesh(SurfaceMesh base, int degree, std::vector<Vec3> nodes)
    : base_(std::move(base)),
      degree_(degree),
      ref_(std::make_shared<ReferenceElement>(degree)),
      nodes_(std::move(nodes)) {
    if (nodes_.size() !=
        static_cast<size_t>(base_.triangle_count()) * ref_->node_count())
        throw ValidationError("nodes", "wrong geometry node count");
}

Vec3 CurvedMesh::map_point(int elem, const Vec2& ref) const {
    const Eigen::VectorXd phi = ref_->basis(ref);
    const auto nodes = element_nodes(elem);
    Vec3 x = Vec3::Zero();
    for (int j = 0; j < phi.size(); ++j) x += phi(j) * nodes[j];
    return x;
}

ElementFrame CurvedMesh::element_frame(int elem, const Vec2& ref) const {
    return frame_from_tables(elem, ref_->basis(ref), ref_->basis_gradient(ref));
}

ElementFrame CurvedMesh::frame_from_tables(int elem, const Eigen::VectorXd& phi,
                                           const Eigen::MatrixXd& dphi) const {
    const auto nodes = element_nodes(elem);
    ElementFrame f;
    f.x = Vec3::Zero();
    f.jacobian = Mat32::Zero();
    for (int j = 0; j < phi.size(); ++j) {
        f.x += phi(j) * nodes[j];
        f.jacobian += nodes[j] * dphi.row(j);
    }
    const Mat2 gram = f.jacobian.transpose() * f.jacobian;
    const double det = gram.determinant();
    if (!(det > 1e-14 * std::pow(f.jacobian.norm(), 4)))
        throw DegenerateJacobianError("element map has degenerate first fundamental form");
    f.gram_inverse = gram.inverse();
    f.pseudo_inverse = f.gram_inverse * f.jacobian.transpose();
    f.area_weight = std::sqrt(det);

    f.normal = f.jacobian.col(0).cross(f.jacobian.col(1)).normalized();
    const auto& tri = base_.triangles[elem];
    const Vec3 flat = (base_.vertices[tri[1]] - base_.vertices[tri[0]])
                          .cross(base_.vertices[tri[2]] - base_.vertices[tri[0]]);
    if (f.normal.dot(flat) < 0.0) f.normal = -f.normal;
    return f;
}

bool CurvedMesh::edge_forward(int edge, Side side) const {
    const MeshEdge& e = base_.edges[edge];
    const int elem = side_element(edge, side);
    const int local = side_local_edge(edge, side);
    const auto ev = ReferenceElement::edge_vertices(local);
    return base_.triangles[elem][ev[0]] == e.vertices[0];
}

Vec2 CurvedMesh::edge_ref_point(int edge, Side side, double s) const {
    const int local = side_local_edge(edge, side);
    return ReferenceElement::edge_point(local, edge_forward(edge, side) ? s : 1.0 - s);
}

EdgeFrame CurvedMesh::edge_frame(int edge, double s, Side side) const {
    const int elem = side_element(edge, side);
    const int local = side_local_edge(edge, side);
    const bool fwd = edge_forward(edge, side);
    const Vec2 ref = edge_ref_point(edge, side, s);
    const ElementFrame ef = element_frame(elem, ref);

    const auto ev = ReferenceElement::edge_vertices(local);
    const auto verts = ReferenceElement::vertices();
    Vec2 dir = verts[ev[1]] - verts[ev[0]];
    if (!fwd) dir = -dir;

    EdgeFrame frame;
    frame.x = ef.x;
    const Vec3 velocity = ef.jacobian * dir;
    frame.length_weight = velocity.norm();
    if (frame.length_weight <= 0.0)
        throw DegenerateJacobianError("degenerate curved edge");
    frame.tangent = velocity / frame.length_weight;
    frame.normal = ef.normal;

    Vec3 w = ef.normal.cross(frame.tangent);
    if (w.dot(ef.jacobian * ref_edge_outward(local)) < 0.0) w = -w;
    frame.conormal = w.normalized();
    return frame;
}

double CurvedMesh::edge_length(int edge, const QuadratureRule& rule) const {
    double len = 0.0;
    for (size_t q = 0; q < rule.edge_points.size(); ++q)
        len += rule.edge_weights[q] *
               edge_frame(edge, rule.edge_points[q], Side::Plus).length_weight;
    return len;
}

CurvedMesh build_curved(const SurfaceMesh& base, const ImplicitSurface& surface,
                        int degree) {
    const ReferenceElement ref(degree);
    const int n = ref.node_count();
    std::vector<Vec3> nodes(static_cast<size_t>(base.triangle_count()) * n);

    const double eps = 1e-13;
    for (int e = 0; e < base.triangle_count(); ++e) {
        const auto& tri = base.triangles[e];
        const Vec3 &v0 = base.vertices[tri[0]], &v1 = base.vertices[tri[1]],
                   &v2 = base.vertices[tri[2]];
        for (int j = 0; j < n; ++j) {
            const Vec2 xi = ref.nodes()[j];
            const double l0 = 1.0 - xi.x() - xi.y();
            Vec3 flat;
            int vertex = -1, edge_local = -1;
            double t = 0.0;
            if (std::abs(l0 - 1.0) < eps) vertex = 0;
            else if (std::abs(xi.x() - 1.0) < eps) vertex = 1;
            else if (std::abs(xi.y() - 1.0) < eps) vertex = 2;
            else if (std::abs(l0) < eps) { edge_local = 0; t = xi.y(); }      // v1 -> v2
            else if (std::abs(xi.x()) < eps) { edge_local = 1; t = l0; }      // v2 -> v0
            else if (std::abs(xi.y()) < eps) { edge_local = 2; t = xi.x(); }  // v0 -> v1

            if (vertex >= 0) {
                // Base vertices already lie on the surface; keep them bitwise.
                nodes[static_cast<size_t>(e) * n + j] = base.vertices[tri[vertex]];
                continue;
            }
            if (edge_local >= 0) {
                // Canonical low->high arithmetic so both sides agree bitwise.
                const auto ev = ReferenceElement::edge_vertices(edge_local);
                int ga = tri[ev[0]], gb = tri[ev[1]];
                double tt = t;
                if (ga > gb) { std::swap(ga, gb); tt = 1.0 - t; }
                flat = base.vertices[ga] + tt * (base.vertices[gb] - base.vertices[ga]);
            } else {
                flat = v0 + xi.x() * (v1 - v0) + xi.y() * (v2 - v0);
            }
            nodes[static_cast<size_t>(e) * n + j] = surface.closest_point(flat);
        }
    }
    return CurvedMesh(base, degree, std::move(nodes));
}

GeoDiagnostics geometric_diagnostics(const CurvedMesh& mesh,
                                     const ImplicitSurface& surface) {
    GeoDiagnostics diag;
    const QuadratureRule rule = make_quadrature(mesh.degree());
    const ReferenceElement& ref = mesh.reference();

    std::vector<Eigen::VectorXd> phi(rule.element_points.size());
    std::vector<Eigen::MatrixXd> dphi(rule.element_points.size());
    for (size_t q = 0; q < rule.element_points.size(); ++q) {
        phi[q] = ref.basis(rule.element_points[q]);
        dphi[q] = ref.basis_gradient(rule.element_points[q]);
    }

    const Mat3 I = Mat3::Identity();
    for (int e = 0; e < mesh.element_count(); ++e) {
        for (size_t q = 0; q < rule.element_points.size(); ++q) {
            const ElementFrame f = mesh.frame_from_tables(e, phi[q], dphi[q]);
            const double d = surface.signed_distance(f.x);
            const Vec3 nu = surface.normal(f.x);
            const Mat3 P = I - nu * nu.transpose();
            const Mat3 H = surface.hessian_distance(f.x);
            const Mat3 Ph = I - f.normal * f.normal.transpose();
            const Mat3 grad_pi = P - d * H;

            const Mat32 lifted = grad_pi * f.jacobian;
            const double det_l = (lifted.transpose() * lifted).determinant();
            const double det_g = (f.jacobian.transpose() * f.jacobian).determinant();
            const double delta_h = std::sqrt(det_l / det_g);
            const Mat3 Rh = (P * (I - d * H) * Ph * (I - d * H) * P) / delta_h;

            diag.sup_distance = std::max(diag.sup_distance, std::abs(d));
            diag.sup_area_defect = std::max(diag.sup_area_defect, std::abs(1.0 - delta_h));
            diag.sup_normal_error = std::max(diag.sup_normal_error, (nu - f.normal).norm());
            diag.sup_projector_error =
                std::max(diag.sup_projector_error, spectral_norm(P - Rh));
        }
    }

    for (int ed = 0; ed < mesh.base().edge_count(); ++ed) {
        for (size_t q = 0; q < rule.edge_points.size(); ++q) {
            const double s = rule.edge_points[q];
            const EdgeFrame plus = mesh.edge_frame(ed, s, Side::Plus);
            const EdgeFrame minus = mesh.edge_frame(ed, s, Side::Minus);

            const double d = surface.signed_distance(plus.x);
            const Vec3 nu = surface.normal(plus.x);
            const Mat3 P = I - nu * nu.transpose();
            const Mat3 H = surface.hessian_distance(plus.x);
            const Mat3 grad_pi = P - d * H;

            const Vec3 lifted_tangent = grad_pi * plus.tangent;
            const double delta_e = lifted_tangent.norm();
            diag.sup_edge_defect = std::max(diag.sup_edge_defect, std::abs(1.0 - delta_e));

            for (const EdgeFrame* side : {&plus, &minus}) {
                const Mat3 Ph = I - side->normal * side->normal.transpose();
                // Restricted to tangential action (trailing P), where the
                // h^{k+1} edge estimate holds.
                const Mat3 Re = (P * (I - d * H) * Ph * (I - d * H) * P) / delta_e;
                diag.sup_edge_projector_error =
                    std::max(diag.sup_edge_projector_error, spectral_norm(P - Re));

                // Exact conormal of the lifted edge: tangent to the surface,
                // orthogonal to the lifted tangent, outward (sign-matched to
                // the projected discrete conormal).
                Vec3 n_exact = nu.cross(lifted_tangent.normalized());
                const Vec3 pnh = P * side->conormal;
                if (n_exact.dot(pnh) < 0.0) n_exact = -n_exact;
                diag.sup_conormal_error =
                    std::max(diag.sup_conormal_error, (n_exact - pnh).norm());
            }
            diag.sup_conormal_sum =
                std::max(diag.sup_conormal_sum, (plus.conormal + minus.conormal).norm());
        }
    }
    return diag;
}

} // namespace surfdg
