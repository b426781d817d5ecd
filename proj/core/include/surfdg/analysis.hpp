#pragma once

#include "surfdg/methods.hpp"

namespace surfdg {

struct SolveOptions {
    enum class Solver { Auto, ConjugateGradient, StabilizedKrylov, DenseDirect };
    Solver solver = Solver::Auto;
    double rel_tol = 1e-10;
    int max_iterations = 20000;
    /// Below this size nonsymmetric systems fall back to a dense LU solve.
    int dense_fallback_dofs = 5000;
};

struct SolveStats {
    int iterations = 0;
    double residual = 0.0;
    const char* method = "";
};

/// Solve the assembled system to the requested relative residual.
/// Symmetric systems use CG; nonsymmetric ones a stabilized Krylov method
/// (BiCGSTAB) or a dense LU below the fallback size. Throws
/// NoConvergenceError (with the final residual) when the target is missed --
/// for the penalized schemes that usually signals an alpha chosen too small.
Eigen::VectorXd solve(const LinearSystem& system, const SolveOptions& opts = {},
                      SolveStats* stats = nullptr);

enum class GradientLiftMode {
    /// Invert B = P_h(I - dH)P on the tangent planes and compare on Gamma.
    Lifted,
    /// Diagnostic: compare the discrete gradient against B * (exact gradient)
    /// on the discrete surface instead of inverting B.
    ProjectedExact,
};

struct ErrorNorms {
    double l2 = 0.0;
    double broken_h1 = 0.0;
    double dg = 0.0;
};

/// Errors of u_h against (u, grad_Gamma u) measured on the exact surface via
/// the surface lift: integrals use the area deformation delta_h, exact data
/// is evaluated at pi(x), and the stabilization part of the DG norm uses the
/// discrete jumps (exact solutions are continuous, so [u - u_h^l] = -[u_h^l]
/// and the lifted stabilization integrals equal the discrete ones).
ErrorNorms error_norms(const DGSpace& space, const ImplicitSurface& surface,
                       const std::function<double(const Vec3&)>& u_exact,
                       const std::function<Vec3(const Vec3&)>& grad_exact,
                       const DGField& u_h, StabilizationKind stab, double alpha,
                       GradientLiftMode mode = GradientLiftMode::Lifted);

/// DG norm of the lifted field u_h^l on Gamma (the lifted counterpart of
/// DGSpace::dg_norm); used for the norm-equivalence checks.
double lifted_dg_norm(const DGSpace& space, const ImplicitSurface& surface,
                      const DGField& u_h, StabilizationKind stab, double alpha);

/// Experimental orders: order_i = log(e_{i-1}/e_i) / log(h_{i-1}/h_i).
/// Nonpositive errors produce +inf sentinels (exactness); bad h sequences
/// throw DegenerateInputError.
std::vector<double> eoc(const std::vector<double>& errors,
                        const std::vector<double>& hs);

/// Manufactured pair (u, f = -lap_Gamma u + u) with tangential gradient.
struct ManufacturedSolution {
    std::string id;
    std::string description;
    std::function<double(const Vec3&)> u;
    std::function<Vec3(const Vec3&)> grad; // tangential gradient on Gamma
    std::function<double(const Vec3&)> f;
    std::function<bool(const ImplicitSurface&)> matches;
};

const ManufacturedSolution& manufactured_solution(const std::string& id);
std::vector<std::string> manufactured_solution_ids();

struct ErrorReport {
    struct Row {
        int level = 0;
        double h = 0.0;
        int dofs = 0;
        double l2_error = 0.0, l2_eoc = 0.0;
        double dg_error = 0.0, dg_eoc = 0.0;
        double assembly_seconds = 0.0, solve_seconds = 0.0;
    };
    std::vector<Row> rows;
};

/// Refinement study: level i uses `base` refined i times; rows are labeled
/// first_level + i. EOC columns are NaN on the first row.
ErrorReport convergence_study(const ImplicitSurface& surface, const SurfaceMesh& base,
                              int first_level, const MethodConfig& method, int degree,
                              int levels, const ManufacturedSolution& solution,
                              const SolveOptions& solve_opts = {});

struct GeometryReport {
    static constexpr int quantity_count = 8;
    static const char* quantity_name(int q);

    struct Row {
        int level = 0;
        double h = 0.0;
        GeoDiagnostics diag;
    };
    std::vector<Row> rows;

    double value(int row, int quantity) const;
    /// Observed order of quantity q between rows r-1 and r.
    double order(int row, int quantity) const;
};

GeometryReport geometry_study(const ImplicitSurface& surface, const SurfaceMesh& base,
                              int first_level, int degree, int levels);

} // namespace surfdg
