/// @file stokes.cpp

#include "hrns/stokes.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>

namespace hrns {

namespace {

// CG for the (negated, SPD) Neumann Laplacian on mean-zero scalars.
// Solves -lap(phi) = b; b must be mean-zero, phi is returned mean-zero.
int cg_pressure(const StokesContext& ctx, const ScalarField& b, ScalarField& phi,
                double* rel_res_out) {
    const double bnorm = norm_l2(b);
    if (bnorm == 0.0) {
        phi.fill(0.0);
        if (rel_res_out) *rel_res_out = 0.0;
        return 0;
    }
    const double tol = ctx.pressure_tol;
    const int cap = ctx.max_iters();

    ScalarField r = b;
    {
        ScalarField ap = laplacian_neumann(phi);
        axpy(1.0, ap, r); // r = b - (-lap phi) = b + lap phi
    }
    ScalarField p = r;
    ScalarField ap(b.grid());
    double rr = dot(r, r);
    int it = 0;
    while (std::sqrt(rr) > tol * bnorm) {
        if (it >= cap)
            throw SolverError("pressure Poisson CG exceeded iteration cap (" +
                              std::to_string(cap) + ")");
        ap = laplacian_neumann(p);
        ap *= -1.0;
        const double alpha = rr / dot(p, ap);
        axpy(alpha, p, phi);
        axpy(-alpha, ap, r);
        const double rr_new = dot(r, r);
        const double beta = rr_new / rr;
        rr = rr_new;
        // p = r + beta p
        p *= beta;
        axpy(1.0, r, p);
        ++it;
    }
    phi.remove_mean(); // gauge
    if (rel_res_out) *rel_res_out = std::sqrt(rr) / bnorm;
    return it;
}

double div_rel_residual(const VelocityField& u) {
    const double un = norm_l2(u);
    if (un == 0.0) return 0.0;
    return norm_l2(discrete_divergence(u)) / un;
}

} // namespace

CgOutcome cg_velocity(const std::function<VelocityField(const VelocityField&)>& apply,
                      const VelocityField& b, VelocityField& x, double tol, int max_iters) {
    const double bnorm = norm_l2(b);
    if (bnorm == 0.0) {
        x.fill(0.0);
        return {0.0, 0};
    }
    VelocityField r = b;
    {
        VelocityField ax = apply(x);
        r -= ax;
    }
    VelocityField p = r;
    double rr = dot(r, r);
    int it = 0;
    while (std::sqrt(rr) > tol * bnorm) {
        if (it >= max_iters)
            throw SolverError("velocity CG exceeded iteration cap (" +
                              std::to_string(max_iters) + "), residual " +
                              std::to_string(std::sqrt(rr) / bnorm));
        VelocityField ap = apply(p);
        const double alpha = rr / dot(p, ap);
        axpy(alpha, p, x);
        axpy(-alpha, ap, r);
        const double rr_new = dot(r, r);
        const double beta = rr_new / rr;
        rr = rr_new;
        p *= beta;
        axpy(1.0, r, p);
        ++it;
    }
    return {std::sqrt(rr) / bnorm, it};
}

VelocityField leray_project(const StokesContext& ctx, const VelocityField& f) {
    ScalarField d = discrete_divergence(f);
    d.remove_mean(); // compatibility is exact; this only trims roundoff
    d *= -1.0;       // solve -lap(phi) = -div f, i.e. lap(phi) = div f
    ScalarField phi(ctx.grid());
    double rel = 0.0;
    const int iters = cg_pressure(ctx, d, phi, &rel);
    VelocityField out = f;
    VelocityField gp = discrete_gradient(phi);
    out -= gp;
    out.apply_boundary();
    if (ctx.diag) ctx.diag({"leray_project", rel, iters});
    return out;
}

VelocityField apply_stokes(const StokesContext& ctx, const VelocityField& u) {
    const double dres = div_rel_residual(u);
    if (dres > 1e-8) {
        char buf[96];
        std::snprintf(buf, sizeof buf,
                      "apply_stokes requires solenoidal input (relative div residual %.3e)", dres);
        throw std::invalid_argument(buf);
    }
    return stokes_matvec(ctx, u);
}

VelocityField stokes_matvec(const StokesContext& ctx, const VelocityField& u) {
    VelocityField lap = laplacian_velocity(u);
    lap *= -1.0;
    return leray_project(ctx, lap);
}

VelocityField solve_stokes(const StokesContext& ctx, const VelocityField& f,
                           const VelocityField* guess) {
    // Work inside the divergence-free subspace: project the data, then CG on A.
    // Projecting unconditionally avoids a residual floor from any
    // non-solenoidal component of f (that part is invisible to A).
    VelocityField rhs = leray_project(ctx, f);
    VelocityField x = guess ? *guess : VelocityField(ctx.grid());
    auto op = [&ctx](const VelocityField& v) { return stokes_matvec(ctx, v); };
    const CgOutcome res = cg_velocity(op, rhs, x, ctx.stokes_tol, ctx.max_iters());
    if (ctx.diag) ctx.diag({"solve_stokes", res.rel_residual, res.iters});
    return x;
}

double sobolev_norm(const StokesContext& ctx, const VelocityField& u, int s) {
    if (s < -1 || s > 2)
        throw std::invalid_argument("sobolev_norm: s must be in {-1,0,1,2}, got " + std::to_string(s));
    VelocityField v = u;
    if (div_rel_residual(v) > 1e-8) v = leray_project(ctx, v);
    switch (s) {
        case 0:
            return norm_l2(v);
        case 1: {
            // <A v, v> = <-lap v, v> for solenoidal v (P drops against v).
            VelocityField lap = laplacian_velocity(v);
            return std::sqrt(std::max(0.0, -dot(lap, v)));
        }
        case 2:
            return norm_l2(apply_stokes(ctx, v));
        default: { // s == -1
            VelocityField w = solve_stokes(ctx, v);
            return std::sqrt(std::max(0.0, dot(w, v)));
        }
    }
}

Eigenpair estimate_lambda1(const StokesContext& ctx) {
    {
        std::lock_guard<std::mutex> lock(ctx.eig_mutex);
        if (ctx.eig_cache) return *ctx.eig_cache;
    }

    // Deterministic smooth solenoidal start: one-bump streamfunction.  Its
    // projection onto the principal mode is O(1), so inverse iteration
    // converges at the spectral gap rate.
    const MacGrid2D& g = ctx.grid();
    const int n = g.n;
    VelocityField v(g);
    {
        const double pi = 3.14159265358979323846;
        auto psi = [&](double x, double y) {
            const double sx = std::sin(pi * x), sy = std::sin(pi * y);
            return sx * sx * sy * sy;
        };
        for (int j = 0; j < n; ++j)
            for (int i = 1; i < n; ++i) // u1 = d(psi)/dy along vertical faces
                v.u1(i, j) = (psi(i * g.h, (j + 1) * g.h) - psi(i * g.h, j * g.h)) / g.h;
        for (int j = 1; j < n; ++j)
            for (int i = 0; i < n; ++i) // u2 = -d(psi)/dx
                v.u2(i, j) = -(psi((i + 1) * g.h, j * g.h) - psi(i * g.h, j * g.h)) / g.h;
    }
    v *= 1.0 / norm_l2(v);

    double lambda = 0.0, lambda_prev = -1.0;
    const int cap = 200;
    int it = 0;
    VelocityField w(g);
    VelocityField guess(g); // zero on the first pass, then v/lambda
    for (; it < cap; ++it) {
        w = solve_stokes(ctx, v, &guess);
        const double wn = norm_l2(w);
        if (wn == 0.0) throw SolverError("estimate_lambda1: inverse iteration collapsed");
        w *= 1.0 / wn;
        v = w;
        VelocityField lap = laplacian_velocity(v);
        lambda = -dot(lap, v); // Rayleigh quotient, ||v|| = 1
        if (lambda_prev > 0.0 && std::abs(lambda - lambda_prev) <= 1e-10 * lambda) break;
        lambda_prev = lambda;
        guess = v;
        guess *= 1.0 / lambda;
    }
    if (it >= cap)
        throw SolverError("estimate_lambda1: no Rayleigh convergence within 200 iterations");

    Eigenpair pair{lambda, v};
    {
        std::lock_guard<std::mutex> lock(ctx.eig_mutex);
        if (!ctx.eig_cache) ctx.eig_cache = pair;
    }
    if (ctx.diag) ctx.diag({"estimate_lambda1", 0.0, it});
    return pair;
}

} // namespace hrns
