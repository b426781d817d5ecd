#pragma once

#include <Eigen/Cholesky>
#include <functional>

#include "surfdg/curved_mesh.hpp"

namespace surfdg {

/// Contiguous per-element blocks of scalar coefficients.
class DoFMap {
  public:
    DoFMap(int element_count, int degree)
        : elements_(element_count), degree_(degree),
          block_(lagrange_node_count(degree)) {}

    int degree() const { return degree_; }
    int element_count() const { return elements_; }
    int block_size() const { return block_; }
    int total_dofs() const { return elements_ * block_; }
    int first_dof(int elem) const { return elem * block_; }

  private:
    int elements_, degree_, block_;
};

/// Scalar piecewise polynomial: nodal Lagrange coefficients per element.
struct DGField {
    DoFMap dofs;
    Eigen::VectorXd coeffs;

    explicit DGField(const DoFMap& map) : dofs(map), coeffs(map.total_dofs()) {
        coeffs.setZero();
    }
    double& coeff(int elem, int node) { return coeffs[dofs.first_dof(elem) + node]; }
    double coeff(int elem, int node) const { return coeffs[dofs.first_dof(elem) + node]; }
};

/// Vector field in the mapped space: two reference components per node,
/// pushed forward through J (J^T J)^-1, hence tangent by construction.
struct VectorDGField {
    DoFMap dofs;
    Eigen::VectorXd coeffs; // 2 * total_dofs, node-major (c_x0, c_x1)

    explicit VectorDGField(const DoFMap& map)
        : dofs(map), coeffs(2 * map.total_dofs()) {
        coeffs.setZero();
    }
    double& coeff(int elem, int node, int comp) {
        return coeffs[2 * (dofs.first_dof(elem) + node) + comp];
    }
    double coeff(int elem, int node, int comp) const {
        return coeffs[2 * (dofs.first_dof(elem) + node) + comp];
    }
};

/// Traces of a scalar field and its tangential gradient along one edge,
/// sampled at the edge quadrature points.
struct EdgeTraces {
    std::vector<Vec3> x;
    std::vector<double> u_plus, u_minus;
    std::vector<Vec3> grad_plus, grad_minus;
    std::vector<Vec3> n_plus, n_minus;
    std::vector<double> ds_weight;
};

/// Jump/average trace operators.
inline double jump(double qp, double qm) { return qp - qm; }
inline double average(double qp, double qm) { return 0.5 * (qp + qm); }
/// [phi; n] = phi+ . n+ + phi- . n-
inline double normal_jump(const Vec3& fp, const Vec3& fm, const Vec3& np, const Vec3& nm) {
    return fp.dot(np) + fm.dot(nm);
}
/// {phi; n} = (phi+ . n+ - phi- . n-) / 2
inline double normal_average(const Vec3& fp, const Vec3& fm, const Vec3& np, const Vec3& nm) {
    return 0.5 * (fp.dot(np) - fm.dot(nm));
}

enum class StabilizationKind { JumpPenalty, LiftingPenalty }; // S1 / S2

/// Workhorse of the DG discretization: bundles the curved mesh, the dof
/// layout, the quadrature rule, and pretabulated basis/geometry data.
///
/// Edge geometry convention: integration weights (ds) are always taken from
/// the "+" side; both sides are evaluated at the matching physical point.
class DGSpace {
  public:
    explicit DGSpace(const CurvedMesh& mesh);

    const CurvedMesh& mesh() const { return *mesh_; }
    const DoFMap& dof_map() const { return dofs_; }
    const QuadratureRule& quadrature() const { return rule_; }
    int degree() const { return mesh_->degree(); }
    int block_size() const { return dofs_.block_size(); }

    // -- pretabulated data ---------------------------------------------------

    int element_quad_count() const { return static_cast<int>(rule_.element_points.size()); }
    int edge_quad_count() const { return static_cast<int>(rule_.edge_points.size()); }

    /// Basis values at element quadrature point q (size n_k).
    const Eigen::VectorXd& elem_basis(int q) const { return elem_phi_[q]; }
    const Eigen::MatrixXd& elem_basis_grad(int q) const { return elem_dphi_[q]; }

    /// Basis values on a side of an edge at edge quadrature point q.
    const Eigen::VectorXd& edge_basis(int edge, Side side, int q) const;
    const Eigen::MatrixXd& edge_basis_grad(int edge, Side side, int q) const;

    ElementFrame element_frame(int elem, int q) const {
        return mesh_->frame_from_tables(elem, elem_phi_[q], elem_dphi_[q]);
    }

    /// Physical tangential-gradient vectors of all basis functions of `elem`
    /// at a point, given the frame and the reference gradients there.
    Eigen::Matrix<double, 3, Eigen::Dynamic>
    physical_gradients(const ElementFrame& frame, const Eigen::MatrixXd& dphi) const;

    /// Cholesky factor of the element's vector-space mass matrix
    /// (2 n_k x 2 n_k, SPD).
    const Eigen::LLT<Eigen::MatrixXd>& sigma_mass_llt(int elem) const;
    const Eigen::MatrixXd& sigma_mass(int elem) const;

    /// Arc length of a curved edge (the h_e in the penalty parameters).
    double edge_length(int edge) const { return edge_lengths_[edge]; }

    // -- field operations ----------------------------------------------------

    DGField make_field() const { return DGField(dofs_); }
    VectorDGField make_vector_field() const { return VectorDGField(dofs_); }

    double evaluate(const DGField& u, int elem, const Vec2& ref) const;
    Vec3 tangential_gradient(const DGField& u, int elem, const Vec2& ref) const;
    Vec3 evaluate_vector(const VectorDGField& tau, int elem, const Vec2& ref) const;

    /// Lagrange interpolant of a function given by values at surface points:
    /// nodal values at the (on-surface) geometry nodes. Continuous, so all
    /// jumps vanish.
    DGField interpolate(const std::function<double(const Vec3&)>& w) const;

    EdgeTraces collect_edge_traces(const DGField& u, int edge) const;

    // -- lifting operators ---------------------------------------------------

    /// Coefficients of r_e(data) / l_e(data) on the two adjacent elements for
    /// edge data sampled at the edge quadrature points. Row layout: 2 n_k
    /// vector coefficients for the "+" element, then for the "-" element.
    Eigen::VectorXd lifting_r(int edge, const Eigen::VectorXd& samples) const;
    Eigen::VectorXd lifting_l(int edge, const Eigen::VectorXd& samples) const;

    /// Jump samples [u] at the edge quadrature points.
    Eigen::VectorXd jump_samples(const DGField& u, int edge) const;

    /// Accumulate the two-element lifting coefficients into a global field.
    void add_edge_lifting(VectorDGField& target, int edge,
                          const Eigen::VectorXd& local) const;

    /// r_h over all edges applied to the jumps of u.
    VectorDGField lift_jumps_r(const DGField& u) const;
    VectorDGField lift_samples_l(const std::function<double(int, int)>& edge_samples) const;

    // -- integrals and norms ---------------------------------------------------

    double integrate_volume(const std::function<double(int, int, const ElementFrame&)>&
                                integrand) const;

    /// Broken H1 norm squared: sum_K int |grad u|^2 + u^2.
    double broken_h1_squared(const DGField& u) const;

    /// Stabilization S_h(u,u) for the given kind; beta_e = alpha k^2 / h_e,
    /// eta_e = alpha.
    double stabilization(const DGField& u, StabilizationKind kind, double alpha) const;

    /// DG norm sqrt(|u|_{1,h}^2 + S_h(u,u)).
    double dg_norm(const DGField& u, StabilizationKind kind, double alpha) const;

    /// Residual of the elementwise integration-by-parts identity: the
    /// per-element boundary sum against the edge jump/average form, evaluated
    /// by the same quadrature. Returns |lhs - rhs|.
    double integration_by_parts_residual(const DGField& psi,
                                         const VectorDGField& phi) const;

  private:
    struct EdgeSideBasis {
        std::vector<Eigen::VectorXd> phi;  // per quad point
        std::vector<Eigen::MatrixXd> dphi;
    };
    const EdgeSideBasis& side_basis(int edge, Side side) const;

    const CurvedMesh* mesh_;
    DoFMap dofs_;
    QuadratureRule rule_;
    std::vector<Eigen::VectorXd> elem_phi_;
    std::vector<Eigen::MatrixXd> elem_dphi_;
    // 6 combos: local edge (3) x direction (2)
    EdgeSideBasis edge_basis_[3][2];
    std::vector<double> edge_lengths_;
    mutable std::vector<Eigen::MatrixXd> sigma_mass_;
    mutable std::vector<Eigen::LLT<Eigen::MatrixXd>> sigma_llt_;
    mutable std::vector<char> sigma_ready_;
};

/// sigma_h = grad u_h - r_h([u_hat - u_h]) - l_h({u_hat - u_h}) with the
/// flux-dependent jump/average data of the scheme (see methods.hpp).
struct SigmaFluxData {
    double jump_factor;   // [u_hat - u_h] = jump_factor * [u_h]
    bool ldg_average;     // {u_hat - u_h} = -(beta . n+) [u_h]
    Vec3 beta_vec;
};

VectorDGField sigma_reconstruct(const DGSpace& space, const DGField& u,
                                const SigmaFluxData& flux);

} // namespace surfdg
