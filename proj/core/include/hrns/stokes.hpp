/// @file stokes.hpp
/// @brief Discrete Leray projection, Stokes operator A = -P(Laplacian), the
///        D(A^{s/2}) norm scale and the principal eigenpair.
///
/// All operators are symmetric in the h^2-weighted inner product; both the
/// pressure Poisson problem and A itself are solved by plain conjugate
/// gradients (relative residual, iteration cap 10*n^2).  Pressure solves use
/// the pure-Neumann Laplacian with a mean-zero gauge; compatibility of the
/// right-hand side is automatic because boundary faces carry no flux.

#pragma once

#include <functional>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>

#include "hrns/field.hpp"
#include "hrns/operators.hpp"

namespace hrns {

/// Thrown when an iterative solve fails to reach tolerance within the cap.
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Per-solve diagnostics, forwarded to StokesContext::diag when set.
struct SolveStats {
    const char* op;
    double residual; // relative
    int iters;
};

struct Eigenpair {
    double lambda = 0.0;
    VelocityField mode;
};

/// Shared solver state for one grid: tolerances, iteration cap, an optional
/// diagnostics sink and the lazily computed principal eigenpair of A.
/// Solves allocate private workspaces, so a single context can be shared
/// across threads.
class StokesContext {
public:
    explicit StokesContext(const MacGrid2D& g) : grid_(g) {}

    const MacGrid2D& grid() const { return grid_; }
    int max_iters() const { return 10 * grid_.n * grid_.n; }

    double pressure_tol = 1e-12; // keeps projected divergence ~1e-11*||f||
    double stokes_tol = 1e-10;

    /// Optional sink for solver diagnostics (one call per solve).
    std::function<void(const SolveStats&)> diag;

    // internal: eigenpair cache guarded by a mutex (estimate_lambda1).
    mutable std::mutex eig_mutex;
    mutable std::optional<Eigenpair> eig_cache;

private:
    MacGrid2D grid_;
};

/// Discrete Hodge/Leray projection f -> f - grad(phi), div(grad phi) = div f.
/// The result is discretely divergence-free (residual at the pressure solver
/// tolerance), has zero normal boundary faces, and P is idempotent and
/// self-adjoint to solver tolerance.
VelocityField leray_project(const StokesContext& ctx, const VelocityField& f);

/// A u = P(-Laplacian u).  The input must be divergence-free (relative
/// residual above 1e-8 is a contract violation and throws).
VelocityField apply_stokes(const StokesContext& ctx, const VelocityField& u);

/// apply_stokes without the precondition check (the projection makes the
/// result well-defined for any input).  CG inner loops apply this to their
/// search directions, whose rounding-level divergence shrinks with the
/// residual and would trip the relative check near convergence.
VelocityField stokes_matvec(const StokesContext& ctx, const VelocityField& u);

/// Solve A u = f by conjugate gradients on the divergence-free subspace.
/// Relative residual <= ctx.stokes_tol, iteration cap 10*n^2 (SolverError
/// beyond it).  An optional warm-start guess may be supplied.
VelocityField solve_stokes(const StokesContext& ctx, const VelocityField& f,
                           const VelocityField* guess = nullptr);

/// Norm of the scale D(A^{s/2}) for s in {-1, 0, 1, 2}:
///   s = 0: L^2;   s = 1: sqrt(<A u, u>)  (H^1);
///   s = 2: ||A u||;   s = -1: sqrt(<A^{-1} u, u>)  (H^{-1}).
/// Inputs are projected first if they fail the divergence check.
double sobolev_norm(const StokesContext& ctx, const VelocityField& u, int s);

/// Principal eigenpair of A by inverse power iteration (Rayleigh-quotient
/// relative change <= 1e-10, cap 200 iterations).  Cached in the context.
Eigenpair estimate_lambda1(const StokesContext& ctx);

/// Generic CG over velocity fields for SPD operators; x is the warm start on
/// entry and the solution on exit.  Returns the relative residual reached and
/// the iteration count.  Throws SolverError past max_iters.
struct CgOutcome {
    double rel_residual;
    int iters;
};
CgOutcome cg_velocity(const std::function<VelocityField(const VelocityField&)>& apply,
                      const VelocityField& b, VelocityField& x, double tol, int max_iters);

} // namespace hrns
