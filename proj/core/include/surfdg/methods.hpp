#pragma once

#include <Eigen/Sparse>
#include <map>

#include "surfdg/dg_space.hpp"

namespace surfdg {

enum class Scheme { IP, NIPG, IIPG, LDG, BassiRebay, BrezziEtAl, BassiEtAl };
enum class LdgSign { Symmetric, AsPrinted };

const char* scheme_name(Scheme s);

/// Flux-scheme selection and its parameters.
///
/// eta_e = alpha and beta_e = alpha k^2 / h_e; for IP, IIPG and Bassi et al.
/// coercivity requires alpha large enough (the default 10 passes the random
/// probe for k <= 4 on the test surfaces). The printed LDG form carries an
/// antisymmetric consistency pair; `ldg_sign` keeps both variants available,
/// defaulting to the symmetric one that the convergence theory uses.
struct MethodConfig {
    Scheme scheme = Scheme::IP;
    double alpha = 10.0;
    Vec3 beta_vec = Vec3::Zero(); // LDG edge vector, may be zero
    LdgSign ldg_sign = LdgSign::Symmetric;

    bool symmetric_system() const {
        return scheme != Scheme::NIPG && scheme != Scheme::IIPG &&
               (scheme != Scheme::LDG || ldg_sign == LdgSign::Symmetric);
    }
    StabilizationKind stabilization() const {
        return (scheme == Scheme::BrezziEtAl || scheme == Scheme::BassiEtAl)
                   ? StabilizationKind::LiftingPenalty
                   : StabilizationKind::JumpPenalty;
    }
    SigmaFluxData sigma_flux() const;

    /// Solve-path validation; assembly itself also admits alpha = 0 for
    /// structural comparisons.
    void validate() const;
};

/// Penalty coefficients (eta_e, beta_e) = (alpha, alpha k^2 / h_e).
std::pair<double, double> penalty(double alpha, int k, double h_e);

/// Element-pair block sparse matrix (n_k x n_k blocks).
class BlockSparseMatrix {
  public:
    BlockSparseMatrix(int element_count, int block_size)
        : elements_(element_count), block_(block_size) {}

    int rows() const { return elements_ * block_; }
    int block_size() const { return block_; }

    Eigen::MatrixXd& block(int row_elem, int col_elem);
    const std::map<std::pair<int, int>, Eigen::MatrixXd>& blocks() const {
        return blocks_;
    }

    Eigen::SparseMatrix<double> to_sparse() const;
    /// max_ij |A - A^T| over the stored pattern.
    double asymmetry() const;
    double max_abs() const;

  private:
    int elements_, block_;
    std::map<std::pair<int, int>, Eigen::MatrixXd> blocks_;
};

struct LinearSystem {
    BlockSparseMatrix matrix;
    Eigen::VectorXd rhs;
    bool symmetric = false;
};

/// Assemble the scheme's bilinear form and the right-hand side
/// int f_h v dA_hk with f_h(x) = f(pi(x)).
LinearSystem assemble(const DGSpace& space, const ImplicitSurface& surface,
                      const MethodConfig& config,
                      const std::function<double(const Vec3&)>& f);

/// S1 (jump penalty) or S2 (lifting penalty) stabilization matrix.
BlockSparseMatrix stabilization_matrix(const DGSpace& space, StabilizationKind kind,
                                       double alpha);

/// Trace data for evaluating the numerical fluxes of Section "flux tables".
struct FluxInput {
    double u_plus = 0, u_minus = 0;
    Vec3 grad_plus = Vec3::Zero(), grad_minus = Vec3::Zero();
    Vec3 sigma_plus = Vec3::Zero(), sigma_minus = Vec3::Zero(); // sigma_h traces
    Vec3 re_plus = Vec3::Zero(), re_minus = Vec3::Zero();       // r_e([u]) traces
    Vec3 n_plus = Vec3::Zero(), n_minus = Vec3::Zero();
    double beta_e = 0, eta_e = 0;
    Vec3 beta_vec = Vec3::Zero();
};

struct FluxValue {
    double u_hat_plus = 0, u_hat_minus = 0;
    Vec3 sigma_hat_plus = Vec3::Zero(), sigma_hat_minus = Vec3::Zero();
};

/// Literal transcription of the per-scheme numerical fluxes (u_hat, sigma_hat).
/// Every scheme satisfies [u_hat] = 0 and [sigma_hat; n] = 0.
FluxValue numerical_flux(Scheme scheme, const FluxInput& in);

} // namespace surfdg
