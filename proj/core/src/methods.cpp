#include "surfdg/methods.hpp"

#include <cmath>

namespace surfdg {

const char* scheme_name(Scheme s) {
    switch (s) {
    case Scheme::IP: return "ip";
    case Scheme::NIPG: return "nipg";
    case Scheme::IIPG: return "iipg";
    case Scheme::LDG: return "ldg";
    case Scheme::BassiRebay: return "bassi-rebay";
    case Scheme::BrezziEtAl: return "brezzi";
    case Scheme::BassiEtAl: return "bassi";
    }
    return "?";
}

SigmaFluxData MethodConfig::sigma_flux() const {
    SigmaFluxData d{-1.0, false, Vec3::Zero()};
    switch (scheme) {
    case Scheme::NIPG: d.jump_factor = 1.0; break;
    case Scheme::IIPG: d.jump_factor = 0.0; break;
    case Scheme::LDG:
        d.jump_factor = -1.0;
        d.ldg_average = true;
        d.beta_vec = beta_vec;
        break;
    default: break; // u_hat = {u}: [u_hat - u] = -[u]
    }
    return d;
}

void MethodConfig::validate() const {
    if (!(alpha > 0.0)) throw ValidationError("alpha", "must be positive");
}

std::pair<double, double> penalty(double alpha, int k, double h_e) {
    if (!(alpha > 0.0)) throw ValidationError("alpha", "must be positive");
    if (!(h_e > 0.0)) throw ValidationError("h_e", "must be positive");
    return {alpha, alpha * k * k / h_e};
}

Eigen::MatrixXd& BlockSparseMatrix::block(int row_elem, int col_elem) {
    auto [it, inserted] = blocks_.try_emplace({row_elem, col_elem});
    if (inserted) it->second = Eigen::MatrixXd::Zero(block_, block_);
    return it->second;
}

Eigen::SparseMatrix<double> BlockSparseMatrix::to_sparse() const {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(blocks_.size() * block_ * block_);
    for (const auto& [key, blk] : blocks_)
        for (int i = 0; i < block_; ++i)
            for (int j = 0; j < block_; ++j)
                trips.emplace_back(key.first * block_ + i, key.second * block_ + j,
                                   blk(i, j));
    Eigen::SparseMatrix<double> A(rows(), rows());
    A.setFromTriplets(trips.begin(), trips.end());
    return A;
}

double BlockSparseMatrix::asymmetry() const {
    double worst = 0.0;
    for (const auto& [key, blk] : blocks_) {
        auto it = blocks_.find({key.second, key.first});
        if (it == blocks_.end()) {
            worst = std::max(worst, blk.cwiseAbs().maxCoeff());
            continue;
        }
        worst = std::max(worst, (blk - it->second.transpose()).cwiseAbs().maxCoeff());
    }
    return worst;
}

double BlockSparseMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& [key, blk] : blocks_)
        m = std::max(m, blk.cwiseAbs().maxCoeff());
    return m;
}

namespace {

// Per-edge assembly scratch: everything needed to form the edge terms as
// bilinear maps of the 2m stacked dofs (m for the "+" element, m for "-").
struct EdgeData {
    int elem[2];
    double h_e = 0.0;
    std::vector<double> w;          // quadrature weight * ds
    std::vector<double> beta_n;     // beta_vec . n+ per point
    // per point, per side: value and gradient.n coefficients of each dof
    std::vector<Eigen::VectorXd> value[2];   // phi_i
    std::vector<Eigen::VectorXd> grad_n[2];  // g_i . n_side
    // moment matrices for the liftings (2m sigma-coeffs x nq samples)
    Eigen::MatrixXd moment_r[2], moment_l[2];
    // sample matrix: [u] at quad points from stacked dofs (nq x 2m)
    Eigen::MatrixXd samples;
};

EdgeData collect_edge(const DGSpace& space, int edge, const Vec3& beta_vec) {
    const CurvedMesh& mesh = space.mesh();
    const auto& rule = space.quadrature();
    const int m = space.block_size();
    const int nq = space.edge_quad_count();

    EdgeData d;
    d.elem[0] = mesh.side_element(edge, Side::Plus);
    d.elem[1] = mesh.side_element(edge, Side::Minus);
    d.h_e = space.edge_length(edge);
    d.w.resize(nq);
    d.beta_n.resize(nq);
    d.samples = Eigen::MatrixXd::Zero(nq, 2 * m);
    for (int s = 0; s < 2; ++s) {
        d.value[s].resize(nq);
        d.grad_n[s].resize(nq);
        d.moment_r[s] = Eigen::MatrixXd::Zero(2 * m, nq);
        d.moment_l[s] = Eigen::MatrixXd::Zero(2 * m, nq);
    }

    for (int q = 0; q < nq; ++q) {
        const double sq = rule.edge_points[q];
        const EdgeFrame fplus = mesh.edge_frame(edge, sq, Side::Plus);
        d.w[q] = rule.edge_weights[q] * fplus.length_weight;
        d.beta_n[q] = beta_vec.dot(fplus.conormal);

        for (int s = 0; s < 2; ++s) {
            const Side side = s == 0 ? Side::Plus : Side::Minus;
            const EdgeFrame ef = s == 0 ? fplus : mesh.edge_frame(edge, sq, side);
            const Eigen::VectorXd& phi = space.edge_basis(edge, side, q);
            const Eigen::MatrixXd& dphi = space.edge_basis_grad(edge, side, q);
            const ElementFrame frame = mesh.frame_from_tables(d.elem[s], phi, dphi);
            const auto grads = space.physical_gradients(frame, dphi);

            d.value[s][q] = phi;
            Eigen::VectorXd gn(m);
            for (int i = 0; i < m; ++i) gn(i) = grads.col(i).dot(ef.conormal);
            d.grad_n[s][q] = gn;

            const Mat32 W = frame.jacobian * frame.gram_inverse;
            const Vec2 wn = W.transpose() * ef.conormal;
            const double r_factor = s == 0 ? -0.5 : 0.5;
            for (int i = 0; i < m; ++i)
                for (int a = 0; a < 2; ++a) {
                    d.moment_r[s](2 * i + a, q) = r_factor * d.w[q] * phi(i) * wn(a);
                    d.moment_l[s](2 * i + a, q) = -d.w[q] * phi(i) * wn(a);
                }
            for (int i = 0; i < m; ++i)
                d.samples(q, s * m + i) = (s == 0 ? 1.0 : -1.0) * phi(i);
        }
    }
    return d;
}

// Scatter a (2m x 2m) bilinear form on the stacked dofs of (elem_a, elem_b)
// into the global block matrix: rows = test, cols = trial.
void scatter2(BlockSparseMatrix& A, const int row_elems[2], const int col_elems[2],
              const Eigen::MatrixXd& local) {
    const int m = A.block_size();
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c)
            A.block(row_elems[r], col_elems[c]) +=
                local.block(r * m, c * m, m, m);
}

} // namespace

FluxValue numerical_flux(Scheme scheme, const FluxInput& in) {
    FluxValue out;
    const double avg_u = average(in.u_plus, in.u_minus);
    const double jmp_u = jump(in.u_plus, in.u_minus);
    const double avg_gn =
        normal_average(in.grad_plus, in.grad_minus, in.n_plus, in.n_minus);
    const double avg_sn =
        normal_average(in.sigma_plus, in.sigma_minus, in.n_plus, in.n_minus);
    const double jmp_sn =
        normal_jump(in.sigma_plus, in.sigma_minus, in.n_plus, in.n_minus);

    switch (scheme) {
    case Scheme::BassiRebay:
        out.u_hat_plus = out.u_hat_minus = avg_u;
        out.sigma_hat_plus = avg_sn * in.n_plus;
        out.sigma_hat_minus = -avg_sn * in.n_minus;
        break;
    case Scheme::BrezziEtAl: {
        out.u_hat_plus = out.u_hat_minus = avg_u;
        const double g = normal_average(in.sigma_plus + in.eta_e * in.re_plus,
                                        in.sigma_minus + in.eta_e * in.re_minus,
                                        in.n_plus, in.n_minus);
        out.sigma_hat_plus = g * in.n_plus;
        out.sigma_hat_minus = -g * in.n_minus;
        break;
    }
    case Scheme::IP:
        out.u_hat_plus = out.u_hat_minus = avg_u;
        out.sigma_hat_plus = (avg_gn - in.beta_e * jmp_u) * in.n_plus;
        out.sigma_hat_minus = -(avg_gn - in.beta_e * jmp_u) * in.n_minus;
        break;
    case Scheme::NIPG:
        out.u_hat_plus = avg_u + jmp_u;
        out.u_hat_minus = avg_u - jmp_u;
        out.sigma_hat_plus = (avg_gn - in.beta_e * jmp_u) * in.n_plus;
        out.sigma_hat_minus = -(avg_gn - in.beta_e * jmp_u) * in.n_minus;
        break;
    case Scheme::IIPG:
        out.u_hat_plus = in.u_plus;
        out.u_hat_minus = in.u_minus;
        out.sigma_hat_plus = (avg_gn - in.beta_e * jmp_u) * in.n_plus;
        out.sigma_hat_minus = -(avg_gn - in.beta_e * jmp_u) * in.n_minus;
        break;
    case Scheme::BassiEtAl: {
        out.u_hat_plus = out.u_hat_minus = avg_u;
        const double g = normal_average(in.grad_plus + in.eta_e * in.re_plus,
                                        in.grad_minus + in.eta_e * in.re_minus,
                                        in.n_plus, in.n_minus);
        out.sigma_hat_plus = g * in.n_plus;
        out.sigma_hat_minus = -g * in.n_minus;
        break;
    }
    case Scheme::LDG: {
        const double bn = in.beta_vec.dot(in.n_plus);
        out.u_hat_plus = out.u_hat_minus = avg_u - bn * jmp_u;
        const double g = avg_sn - in.beta_e * jmp_u + bn * jmp_sn;
        out.sigma_hat_plus = g * in.n_plus;
        out.sigma_hat_minus = -g * in.n_minus;
        break;
    }
    }
    return out;
}

LinearSystem assemble(const DGSpace& space, const ImplicitSurface& surface,
                      const MethodConfig& config,
                      const std::function<double(const Vec3&)>& f) {
    if (config.alpha < 0.0) throw ValidationError("alpha", "must be >= 0");
    const CurvedMesh& mesh = space.mesh();
    const auto& rule = space.quadrature();
    const int m = space.block_size();
    const int k = space.degree();
    const Scheme scheme = config.scheme;

    LinearSystem sys{BlockSparseMatrix(mesh.element_count(), m),
                     Eigen::VectorXd::Zero(space.dof_map().total_dofs()),
                     config.symmetric_system()};

    // Volume terms and right-hand side.
    for (int e = 0; e < mesh.element_count(); ++e) {
        Eigen::MatrixXd local = Eigen::MatrixXd::Zero(m, m);
        for (int q = 0; q < space.element_quad_count(); ++q) {
            const ElementFrame frame = space.element_frame(e, q);
            const double w = rule.element_weights[q] * frame.area_weight;
            const Eigen::VectorXd& phi = space.elem_basis(q);
            const auto grads = space.physical_gradients(frame, space.elem_basis_grad(q));
            local += w * (grads.transpose() * grads + phi * phi.transpose());
            const double fq = f(surface.closest_point(frame.x));
            for (int i = 0; i < m; ++i)
                sys.rhs(space.dof_map().first_dof(e) + i) += w * fq * phi(i);
        }
        sys.matrix.block(e, e) += local;
    }

    const bool needs_global_lifting =
        scheme == Scheme::BassiRebay || scheme == Scheme::BrezziEtAl ||
        scheme == Scheme::LDG;
    const bool needs_edge_lifting =
        scheme == Scheme::BrezziEtAl || scheme == Scheme::BassiEtAl;

    // Lifting coefficient maps per element: list of (edge-adjacent element
    // pair, Lambda) contributions of r_h (or the LDG combination) restricted
    // to that element.
    struct LiftPiece {
        int adj[2];             // dof elements the samples depend on
        Eigen::MatrixXd lambda; // 2m sigma-coeffs x 2m dofs
    };
    std::vector<std::vector<LiftPiece>> lift_on_elem;
    if (needs_global_lifting)
        lift_on_elem.resize(mesh.element_count());

    for (int edge = 0; edge < mesh.base().edge_count(); ++edge) {
        EdgeData d = collect_edge(space, edge, config.beta_vec);
        const double beta_e = config.alpha * k * k / d.h_e;
        const double eta_e = config.alpha;
        const int nq = space.edge_quad_count();

        Eigen::MatrixXd local = Eigen::MatrixXd::Zero(2 * m, 2 * m);
        auto value_coeff = [&](int s, int i, int q) {
            return (s == 0 ? 1.0 : -1.0) * d.value[s][q](i); // [v]
        };
        auto avg_coeff = [&](int s, int i, int q) {
            return (s == 0 ? 0.5 : -0.5) * d.grad_n[s][q](i); // {grad v; n}
        };
        auto njump_coeff = [&](int s, int i, int q) {
            return d.grad_n[s][q](i); // [grad v; n]
        };

        for (int q = 0; q < nq; ++q) {
            for (int sv = 0; sv < 2; ++sv)
                for (int su = 0; su < 2; ++su)
                    for (int i = 0; i < m; ++i)
                        for (int j = 0; j < m; ++j) {
                            const double vi = value_coeff(sv, i, q);
                            const double vj = value_coeff(su, j, q);
                            const double ai = avg_coeff(sv, i, q);
                            const double aj = avg_coeff(su, j, q);
                            double term = 0.0;
                            switch (scheme) {
                            case Scheme::IP:
                                term = -(vj * ai + aj * vi) + beta_e * vj * vi;
                                break;
                            case Scheme::NIPG:
                                term = (vj * ai - aj * vi) + beta_e * vj * vi;
                                break;
                            case Scheme::IIPG:
                                term = -aj * vi + beta_e * vj * vi;
                                break;
                            case Scheme::BassiRebay:
                            case Scheme::BrezziEtAl:
                            case Scheme::BassiEtAl:
                                term = -(vj * ai + aj * vi);
                                break;
                            case Scheme::LDG: {
                                const double consistency =
                                    config.ldg_sign == LdgSign::Symmetric
                                        ? -(vj * ai + aj * vi)
                                        : -(vj * ai - aj * vi);
                                term = consistency + beta_e * vj * vi -
                                       d.beta_n[q] * (njump_coeff(su, j, q) * vi +
                                                      vj * njump_coeff(sv, i, q));
                                break;
                            }
                            }
                            local(sv * m + i, su * m + j) += d.w[q] * term;
                        }
        }
        scatter2(sys.matrix, d.elem, d.elem, local);

        if (needs_global_lifting || needs_edge_lifting) {
            for (int s = 0; s < 2; ++s) {
                Eigen::MatrixXd rhs_m = d.moment_r[s] * d.samples;
                if (scheme == Scheme::LDG && config.beta_vec.squaredNorm() > 0.0) {
                    // r_h([u]) + (beta.n+) l_h([u]) restricted to this element.
                    Eigen::MatrixXd scaled = d.samples;
                    for (int q = 0; q < nq; ++q) scaled.row(q) *= d.beta_n[q];
                    rhs_m += d.moment_l[s] * scaled;
                }
                Eigen::MatrixXd lambda = space.sigma_mass_llt(d.elem[s]).solve(rhs_m);

                if (needs_edge_lifting) {
                    // Brezzi/Bassi: only r_e enters the eta term.
                    const Eigen::MatrixXd lam_r =
                        space.sigma_mass_llt(d.elem[s])
                            .solve((d.moment_r[s] * d.samples).eval());
                    const Eigen::MatrixXd prod =
                        eta_e * lam_r.transpose() * space.sigma_mass(d.elem[s]) * lam_r;
                    scatter2(sys.matrix, d.elem, d.elem, prod);
                }
                if (needs_global_lifting)
                    lift_on_elem[d.elem[s]].push_back(
                        {{d.elem[0], d.elem[1]}, std::move(lambda)});
            }
        }
    }

    // Global products sum_K int r_h(.) . r_h(.) (Bassi-Rebay, Brezzi, LDG).
    if (needs_global_lifting) {
        for (int e = 0; e < mesh.element_count(); ++e) {
            const auto& pieces = lift_on_elem[e];
            for (const auto& pa : pieces)
                for (const auto& pb : pieces) {
                    const Eigen::MatrixXd prod =
                        pa.lambda.transpose() * space.sigma_mass(e) * pb.lambda;
                    scatter2(sys.matrix, pa.adj, pb.adj, prod);
                }
        }
    }
    return sys;
}

BlockSparseMatrix stabilization_matrix(const DGSpace& space, StabilizationKind kind,
                                       double alpha) {
    const CurvedMesh& mesh = space.mesh();
    const int m = space.block_size();
    const int k = space.degree();
    BlockSparseMatrix S(mesh.element_count(), m);

    for (int edge = 0; edge < mesh.base().edge_count(); ++edge) {
        EdgeData d = collect_edge(space, edge, Vec3::Zero());
        Eigen::MatrixXd local = Eigen::MatrixXd::Zero(2 * m, 2 * m);
        if (kind == StabilizationKind::JumpPenalty) {
            const double beta_e = alpha * k * k / d.h_e;
            for (int q = 0; q < space.edge_quad_count(); ++q)
                local += beta_e * d.w[q] * d.samples.row(q).transpose() * d.samples.row(q);
        } else {
            for (int s = 0; s < 2; ++s) {
                const Eigen::MatrixXd lam =
                    space.sigma_mass_llt(d.elem[s]).solve((d.moment_r[s] * d.samples).eval());
                local += alpha * lam.transpose() * space.sigma_mass(d.elem[s]) * lam;
            }
        }
        scatter2(S, d.elem, d.elem, local);
    }
    return S;
}

} // namespace surfdg
