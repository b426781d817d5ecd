#include "surfdg/dg_space.hpp"

#include <cmath>

namespace surfdg {

DGSpace::DGSpace(const CurvedMesh& mesh)
    : mesh_(&mesh),
      dofs_(mesh.element_count(), mesh.degree()),
      rule_(make_quadrature(mesh.degree())) {
    const ReferenceElement& ref = mesh.reference();

    elem_phi_.resize(rule_.element_points.size());
    elem_dphi_.resize(rule_.element_points.size());
    for (size_t q = 0; q < rule_.element_points.size(); ++q) {
        elem_phi_[q] = ref.basis(rule_.element_points[q]);
        elem_dphi_[q] = ref.basis_gradient(rule_.element_points[q]);
    }

    for (int local = 0; local < 3; ++local)
        for (int fwd = 0; fwd < 2; ++fwd) {
            EdgeSideBasis& b = edge_basis_[local][fwd];
            b.phi.resize(rule_.edge_points.size());
            b.dphi.resize(rule_.edge_points.size());
            for (size_t q = 0; q < rule_.edge_points.size(); ++q) {
                const double s = rule_.edge_points[q];
                const Vec2 p = ReferenceElement::edge_point(local, fwd ? s : 1.0 - s);
                b.phi[q] = ref.basis(p);
                b.dphi[q] = ref.basis_gradient(p);
            }
        }

    edge_lengths_.resize(mesh.base().edge_count());
    for (int e = 0; e < mesh.base().edge_count(); ++e)
        edge_lengths_[e] = mesh.edge_length(e, rule_);

    // Vector-space (Sigma) mass matrices, one SPD block per element.
    const int m = dofs_.block_size();
    sigma_mass_.resize(mesh.element_count());
    sigma_llt_.resize(mesh.element_count());
    for (int e = 0; e < mesh.element_count(); ++e) {
        Eigen::MatrixXd M = Eigen::MatrixXd::Zero(2 * m, 2 * m);
        for (int q = 0; q < element_quad_count(); ++q) {
            const ElementFrame f = element_frame(e, q);
            const double w = rule_.element_weights[q] * f.area_weight;
            const Eigen::VectorXd& phi = elem_phi_[q];
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) {
                    const double p = w * phi(i) * phi(j);
                    for (int a = 0; a < 2; ++a)
                        for (int b = 0; b < 2; ++b)
                            M(2 * i + a, 2 * j + b) += p * f.gram_inverse(a, b);
                }
        }
        sigma_llt_[e].compute(M);
        if (sigma_llt_[e].info() != Eigen::Success)
            throw SingularMassError("vector mass matrix not SPD on element " +
                                    std::to_string(e));
        sigma_mass_[e] = std::move(M);
    }
    sigma_ready_.assign(mesh.element_count(), 1);
}

const DGSpace::EdgeSideBasis& DGSpace::side_basis(int edge, Side side) const {
    const int local = mesh_->side_local_edge(edge, side);
    const int fwd = mesh_->edge_forward(edge, side) ? 1 : 0;
    return edge_basis_[local][fwd];
}

const Eigen::VectorXd& DGSpace::edge_basis(int edge, Side side, int q) const {
    return side_basis(edge, side).phi[q];
}
const Eigen::MatrixXd& DGSpace::edge_basis_grad(int edge, Side side, int q) const {
    return side_basis(edge, side).dphi[q];
}

Eigen::Matrix<double, 3, Eigen::Dynamic>
DGSpace::physical_gradients(const ElementFrame& frame, const Eigen::MatrixXd& dphi) const {
    return (frame.jacobian * frame.gram_inverse) * dphi.transpose();
}

const Eigen::LLT<Eigen::MatrixXd>& DGSpace::sigma_mass_llt(int elem) const {
    return sigma_llt_[elem];
}
const Eigen::MatrixXd& DGSpace::sigma_mass(int elem) const { return sigma_mass_[elem]; }

double DGSpace::evaluate(const DGField& u, int elem, const Vec2& ref) const {
    const Eigen::VectorXd phi = mesh_->reference().basis(ref);
    double v = 0.0;
    for (int i = 0; i < phi.size(); ++i) v += u.coeff(elem, i) * phi(i);
    return v;
}

Vec3 DGSpace::tangential_gradient(const DGField& u, int elem, const Vec2& ref) const {
    const ElementFrame f = mesh_->element_frame(elem, ref);
    const Eigen::MatrixXd dphi = mesh_->reference().basis_gradient(ref);
    Vec2 gref = Vec2::Zero();
    for (int i = 0; i < dphi.rows(); ++i)
        gref += u.coeff(elem, i) * Vec2(dphi(i, 0), dphi(i, 1));
    return f.jacobian * (f.gram_inverse * gref);
}

Vec3 DGSpace::evaluate_vector(const VectorDGField& tau, int elem, const Vec2& ref) const {
    const ElementFrame f = mesh_->element_frame(elem, ref);
    const Eigen::VectorXd phi = mesh_->reference().basis(ref);
    Vec2 tref = Vec2::Zero();
    for (int i = 0; i < phi.size(); ++i)
        tref += phi(i) * Vec2(tau.coeff(elem, i, 0), tau.coeff(elem, i, 1));
    return f.jacobian * (f.gram_inverse * tref);
}

DGField DGSpace::interpolate(const std::function<double(const Vec3&)>& w) const {
    DGField u(dofs_);
    for (int e = 0; e < mesh_->element_count(); ++e) {
        const auto nodes = mesh_->element_nodes(e);
        for (int i = 0; i < dofs_.block_size(); ++i)
            u.coeff(e, i) = w(nodes[i]);
    }
    return u;
}

EdgeTraces DGSpace::collect_edge_traces(const DGField& u, int edge) const {
    EdgeTraces tr;
    const int nq = edge_quad_count();
    const int ep = mesh_->side_element(edge, Side::Plus);
    const int em = mesh_->side_element(edge, Side::Minus);
    for (int q = 0; q < nq; ++q) {
        const double s = rule_.edge_points[q];
        const EdgeFrame fp = mesh_->edge_frame(edge, s, Side::Plus);
        const EdgeFrame fm = mesh_->edge_frame(edge, s, Side::Minus);
        const auto& bp = side_basis(edge, Side::Plus);
        const auto& bm = side_basis(edge, Side::Minus);

        double up = 0.0, um = 0.0;
        for (int i = 0; i < dofs_.block_size(); ++i) {
            up += u.coeff(ep, i) * bp.phi[q](i);
            um += u.coeff(em, i) * bm.phi[q](i);
        }
        const ElementFrame efp = mesh_->frame_from_tables(ep, bp.phi[q], bp.dphi[q]);
        const ElementFrame efm = mesh_->frame_from_tables(em, bm.phi[q], bm.dphi[q]);
        const auto gp = physical_gradients(efp, bp.dphi[q]);
        const auto gm = physical_gradients(efm, bm.dphi[q]);
        Vec3 grad_p = Vec3::Zero(), grad_m = Vec3::Zero();
        for (int i = 0; i < dofs_.block_size(); ++i) {
            grad_p += u.coeff(ep, i) * gp.col(i);
            grad_m += u.coeff(em, i) * gm.col(i);
        }
        tr.x.push_back(fp.x);
        tr.u_plus.push_back(up);
        tr.u_minus.push_back(um);
        tr.grad_plus.push_back(grad_p);
        tr.grad_minus.push_back(grad_m);
        tr.n_plus.push_back(fp.conormal);
        tr.n_minus.push_back(fm.conormal);
        tr.ds_weight.push_back(fp.length_weight);
    }
    return tr;
}

namespace {

// Edge integrals against the two-element vector basis:
//   r:  b_(i,a) = - int data * {tau_(i,a); n}   (tau supported on one side)
//   l:  b_(i,a) = - int data * [tau_(i,a); n]
// For a basis function supported on side s, {tau;n} reduces to +/- tau.n_s/2
// and [tau;n] to tau.n_s.
Eigen::VectorXd edge_moment(const DGSpace& space, const CurvedMesh& mesh, int edge,
                            Side side, const Eigen::VectorXd& samples, bool average_form) {
    const int m = space.block_size();
    const auto& rule = space.quadrature();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(2 * m);
    const double side_factor =
        average_form ? (side == Side::Plus ? -0.5 : 0.5) : -1.0;
    for (int q = 0; q < space.edge_quad_count(); ++q) {
        const double s = rule.edge_points[q];
        const EdgeFrame ef = mesh.edge_frame(edge, s, side);
        const EdgeFrame ep = side == Side::Plus
                                 ? ef
                                 : mesh.edge_frame(edge, s, Side::Plus);
        const double w = rule.edge_weights[q] * ep.length_weight * samples(q);
        const Eigen::VectorXd& phi = space.edge_basis(edge, side, q);
        const ElementFrame frame = mesh.frame_from_tables(
            mesh.side_element(edge, side), phi, space.edge_basis_grad(edge, side, q));
        const Mat32 W = frame.jacobian * frame.gram_inverse;
        const Vec2 wn = W.transpose() * ef.conormal;
        for (int i = 0; i < m; ++i)
            for (int a = 0; a < 2; ++a)
                b(2 * i + a) += side_factor * w * phi(i) * wn(a);
    }
    return b;
}

Eigen::VectorXd lifting_solve(const DGSpace& space, const CurvedMesh& mesh, int edge,
                              const Eigen::VectorXd& samples, bool average_form) {
    const int m = space.block_size();
    Eigen::VectorXd out(4 * m);
    for (Side side : {Side::Plus, Side::Minus}) {
        const int elem = mesh.side_element(edge, side);
        const Eigen::VectorXd b =
            edge_moment(space, mesh, edge, side, samples, average_form);
        out.segment(side == Side::Plus ? 0 : 2 * m, 2 * m) =
            space.sigma_mass_llt(elem).solve(b);
    }
    return out;
}

} // namespace

Eigen::VectorXd DGSpace::lifting_r(int edge, const Eigen::VectorXd& samples) const {
    return lifting_solve(*this, *mesh_, edge, samples, true);
}

Eigen::VectorXd DGSpace::lifting_l(int edge, const Eigen::VectorXd& samples) const {
    return lifting_solve(*this, *mesh_, edge, samples, false);
}

Eigen::VectorXd DGSpace::jump_samples(const DGField& u, int edge) const {
    const int ep = mesh_->side_element(edge, Side::Plus);
    const int em = mesh_->side_element(edge, Side::Minus);
    Eigen::VectorXd s(edge_quad_count());
    for (int q = 0; q < edge_quad_count(); ++q) {
        double up = 0.0, um = 0.0;
        for (int i = 0; i < dofs_.block_size(); ++i) {
            up += u.coeff(ep, i) * edge_basis(edge, Side::Plus, q)(i);
            um += u.coeff(em, i) * edge_basis(edge, Side::Minus, q)(i);
        }
        s(q) = up - um;
    }
    return s;
}

void DGSpace::add_edge_lifting(VectorDGField& target, int edge,
                               const Eigen::VectorXd& local) const {
    const int m = dofs_.block_size();
    for (Side side : {Side::Plus, Side::Minus}) {
        const int elem = mesh_->side_element(edge, side);
        const int off = side == Side::Plus ? 0 : 2 * m;
        for (int i = 0; i < m; ++i)
            for (int a = 0; a < 2; ++a)
                target.coeff(elem, i, a) += local(off + 2 * i + a);
    }
}

VectorDGField DGSpace::lift_jumps_r(const DGField& u) const {
    VectorDGField out(dofs_);
    for (int e = 0; e < mesh_->base().edge_count(); ++e)
        add_edge_lifting(out, e, lifting_r(e, jump_samples(u, e)));
    return out;
}

VectorDGField DGSpace::lift_samples_l(
    const std::function<double(int, int)>& edge_samples) const {
    VectorDGField out(dofs_);
    Eigen::VectorXd s(edge_quad_count());
    for (int e = 0; e < mesh_->base().edge_count(); ++e) {
        for (int q = 0; q < edge_quad_count(); ++q) s(q) = edge_samples(e, q);
        add_edge_lifting(out, e, lifting_l(e, s));
    }
    return out;
}

double DGSpace::integrate_volume(
    const std::function<double(int, int, const ElementFrame&)>& integrand) const {
    double total = 0.0;
    for (int e = 0; e < mesh_->element_count(); ++e)
        for (int q = 0; q < element_quad_count(); ++q) {
            const ElementFrame f = element_frame(e, q);
            total += rule_.element_weights[q] * f.area_weight * integrand(e, q, f);
        }
    return total;
}

double DGSpace::broken_h1_squared(const DGField& u) const {
    double total = 0.0;
    const int m = dofs_.block_size();
    for (int e = 0; e < mesh_->element_count(); ++e)
        for (int q = 0; q < element_quad_count(); ++q) {
            const ElementFrame f = element_frame(e, q);
            const auto grads = physical_gradients(f, elem_dphi_[q]);
            double val = 0.0;
            Vec3 grad = Vec3::Zero();
            for (int i = 0; i < m; ++i) {
                val += u.coeff(e, i) * elem_phi_[q](i);
                grad += u.coeff(e, i) * grads.col(i);
            }
            total += rule_.element_weights[q] * f.area_weight *
                     (grad.squaredNorm() + val * val);
        }
    return total;
}

double DGSpace::stabilization(const DGField& u, StabilizationKind kind,
                              double alpha) const {
    const int k = degree();
    double total = 0.0;
    if (kind == StabilizationKind::JumpPenalty) {
        for (int e = 0; e < mesh_->base().edge_count(); ++e) {
            const double beta_e = alpha * k * k / edge_lengths_[e];
            const Eigen::VectorXd jumps = jump_samples(u, e);
            double edge_int = 0.0;
            for (int q = 0; q < edge_quad_count(); ++q) {
                const EdgeFrame f = mesh_->edge_frame(e, rule_.edge_points[q], Side::Plus);
                edge_int += rule_.edge_weights[q] * f.length_weight * jumps(q) * jumps(q);
            }
            total += beta_e * edge_int;
        }
    } else {
        const int m = dofs_.block_size();
        for (int e = 0; e < mesh_->base().edge_count(); ++e) {
            const Eigen::VectorXd local = lifting_r(e, jump_samples(u, e));
            for (Side side : {Side::Plus, Side::Minus}) {
                const int elem = mesh_->side_element(e, side);
                const auto seg = local.segment(side == Side::Plus ? 0 : 2 * m, 2 * m);
                total += alpha * seg.dot(sigma_mass_[elem] * seg);
            }
        }
    }
    return total;
}

double DGSpace::dg_norm(const DGField& u, StabilizationKind kind, double alpha) const {
    return std::sqrt(broken_h1_squared(u) + stabilization(u, kind, alpha));
}

double DGSpace::integration_by_parts_residual(const DGField& psi,
                                              const VectorDGField& phi) const {
    const int m = dofs_.block_size();
    // Route 1: per-element boundary integrals with the element's own frames.
    double lhs = 0.0;
    for (int e = 0; e < mesh_->element_count(); ++e)
        for (int l = 0; l < 3; ++l) {
            const int edge = mesh_->base().elem_edges[e][l];
            if (edge < 0) continue;
            const Side side = (mesh_->side_element(edge, Side::Plus) == e &&
                               mesh_->side_local_edge(edge, Side::Plus) == l)
                                  ? Side::Plus
                                  : Side::Minus;
            for (int q = 0; q < edge_quad_count(); ++q) {
                const double s = rule_.edge_points[q];
                const EdgeFrame f = mesh_->edge_frame(edge, s, side);
                const Eigen::VectorXd& ph = edge_basis(edge, side, q);
                const ElementFrame ef = mesh_->frame_from_tables(
                    e, ph, edge_basis_grad(edge, side, q));
                const Mat32 W = ef.jacobian * ef.gram_inverse;
                double p = 0.0;
                Vec2 tref = Vec2::Zero();
                for (int i = 0; i < m; ++i) {
                    p += psi.coeff(e, i) * ph(i);
                    tref += ph(i) * Vec2(phi.coeff(e, i, 0), phi.coeff(e, i, 1));
                }
                const Vec3 tau = W * tref;
                lhs += rule_.edge_weights[q] * f.length_weight * p * tau.dot(f.conormal);
            }
        }

    // Route 2: edge sum of [phi;n]{psi} + {phi;n}[psi].
    double rhs = 0.0;
    for (int e = 0; e < mesh_->base().edge_count(); ++e) {
        const int ep = mesh_->side_element(e, Side::Plus);
        const int em = mesh_->side_element(e, Side::Minus);
        for (int q = 0; q < edge_quad_count(); ++q) {
            const double s = rule_.edge_points[q];
            const EdgeFrame fp = mesh_->edge_frame(e, s, Side::Plus);
            const EdgeFrame fm = mesh_->edge_frame(e, s, Side::Minus);
            const Eigen::VectorXd& bp = edge_basis(e, Side::Plus, q);
            const Eigen::VectorXd& bm = edge_basis(e, Side::Minus, q);
            const ElementFrame efp =
                mesh_->frame_from_tables(ep, bp, edge_basis_grad(e, Side::Plus, q));
            const ElementFrame efm =
                mesh_->frame_from_tables(em, bm, edge_basis_grad(e, Side::Minus, q));
            double pp = 0.0, pm = 0.0;
            Vec2 tp = Vec2::Zero(), tm = Vec2::Zero();
            for (int i = 0; i < m; ++i) {
                pp += psi.coeff(ep, i) * bp(i);
                pm += psi.coeff(em, i) * bm(i);
                tp += bp(i) * Vec2(phi.coeff(ep, i, 0), phi.coeff(ep, i, 1));
                tm += bm(i) * Vec2(phi.coeff(em, i, 0), phi.coeff(em, i, 1));
            }
            const Vec3 taup = (efp.jacobian * efp.gram_inverse) * tp;
            const Vec3 taum = (efm.jacobian * efm.gram_inverse) * tm;
            rhs += rule_.edge_weights[q] * fp.length_weight *
                   (normal_jump(taup, taum, fp.conormal, fm.conormal) * average(pp, pm) +
                    normal_average(taup, taum, fp.conormal, fm.conormal) * jump(pp, pm));
        }
    }
    return std::abs(lhs - rhs);
}

VectorDGField sigma_reconstruct(const DGSpace& space, const DGField& u,
                                const SigmaFluxData& flux) {
    const CurvedMesh& mesh = space.mesh();
    const ReferenceElement& ref = mesh.reference();
    const int m = space.block_size();

    VectorDGField sigma(space.dof_map());
    // Reference gradient of u interpolated at the lattice nodes: exact, since
    // grad_ref(u) has degree k-1.
    std::vector<Eigen::MatrixXd> node_grads(m);
    for (int i = 0; i < m; ++i) node_grads[i] = ref.basis_gradient(ref.nodes()[i]);
    for (int e = 0; e < mesh.element_count(); ++e)
        for (int i = 0; i < m; ++i) {
            Vec2 g = Vec2::Zero();
            for (int j = 0; j < m; ++j)
                g += u.coeff(e, j) * Vec2(node_grads[i](j, 0), node_grads[i](j, 1));
            sigma.coeff(e, i, 0) = g.x();
            sigma.coeff(e, i, 1) = g.y();
        }

    for (int edge = 0; edge < mesh.base().edge_count(); ++edge) {
        const Eigen::VectorXd jumps = space.jump_samples(u, edge);
        if (flux.jump_factor != 0.0)
            space.add_edge_lifting(sigma, edge,
                                   (-flux.jump_factor * space.lifting_r(edge, jumps)).eval());
        if (flux.ldg_average) {
            Eigen::VectorXd s(space.edge_quad_count());
            for (int q = 0; q < space.edge_quad_count(); ++q) {
                const EdgeFrame f = mesh.edge_frame(
                    edge, space.quadrature().edge_points[q], Side::Plus);
                s(q) = flux.beta_vec.dot(f.conormal) * jumps(q); // +(beta.n+)[u]
            }
            space.add_edge_lifting(sigma, edge, space.lifting_l(edge, s));
        }
    }
    return sigma;
}

} // namespace surfdg
