/// @file unit_stokes.cpp
/// @brief Leray projection and Stokes operator contracts: projector algebra,
///        operator symmetry and coercivity, solver round trips, Sobolev
///        norms, and the principal eigenpair.

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "hrns/operators.hpp"
#include "hrns/stokes.hpp"

using namespace hrns;

TEST_SUITE("stokes") {

// ============================================================================
// Leray projector algebra
// ============================================================================

TEST_CASE("leray: kills gradients and fixes solenoidal fields") {
    const MacGrid2D g = make_mac_grid(16);
    StokesContext ctx(g);

    // P(grad p) = 0.
    const ScalarField p = testutil::random_pressure(g, 31);
    const VelocityField gp = discrete_gradient(p);
    CHECK(norm_l2(leray_project(ctx, gp)) <= 1e-10 * norm_l2(gp));

    // P restricted to the solenoidal space is the identity; P idempotent.
    for (std::uint64_t s = 0; s < 5; ++s) {
        const VelocityField f = testutil::random_field(g, 40 + s);
        const VelocityField pf = leray_project(ctx, f);
        const VelocityField ppf = leray_project(ctx, pf);
        CHECK(testutil::field_dist_inf(ppf, pf) <= 1e-10 * norm_inf(pf));
        CHECK(norm_l2(discrete_divergence(pf)) <= 1e-9 * norm_l2(pf) / g.h);
    }

    VelocityField z(g);
    CHECK(norm_l2(leray_project(ctx, z)) == 0.0);
}

TEST_CASE("leray: self-adjoint on random pairs") {
    const MacGrid2D g = make_mac_grid(16);
    StokesContext ctx(g);
    for (std::uint64_t s = 0; s < 5; ++s) {
        const VelocityField f = testutil::random_field(g, 50 + s);
        const VelocityField w = testutil::random_field(g, 60 + s);
        const double sym = dot(leray_project(ctx, f), w) - dot(f, leray_project(ctx, w));
        CHECK(std::abs(sym) <= 1e-10 * norm_l2(f) * norm_l2(w));
    }
}

// ============================================================================
// Stokes operator: symmetry, coercivity, input checking
// ============================================================================

TEST_CASE("stokes operator: symmetric and coercive on the solenoidal space") {
    const MacGrid2D g = make_mac_grid(16);
    StokesContext ctx(g);
    const double lam1 = estimate_lambda1(ctx).lambda;
    for (std::uint64_t s = 0; s < 5; ++s) {
        const VelocityField u = testutil::random_solenoidal(ctx, 70 + s);
        const VelocityField w = testutil::random_solenoidal(ctx, 80 + s);
        const VelocityField au = apply_stokes(ctx, u);
        const double sym = dot(au, w) - dot(u, apply_stokes(ctx, w));
        CHECK(std::abs(sym) <= 1e-10 * norm_l2(au) * norm_l2(w));
        const double un = norm_l2(u);
        CHECK(dot(au, u) >= lam1 * un * un - 1e-8 * un * un);
    }
}

TEST_CASE("stokes operator: rejects non-solenoidal input") {
    const MacGrid2D g = make_mac_grid(16);
    StokesContext ctx(g);
    const VelocityField f = testutil::random_field(g, 90); // O(1) divergence
    CHECK_THROWS_AS(apply_stokes(ctx, f), std::invalid_argument);
    // The unchecked matvec accepts the same input (it is the CG workhorse).
    CHECK(std::isfinite(norm_l2(stokes_matvec(ctx, f))));
}

// ============================================================================
// Stokes solve
// ============================================================================

TEST_CASE("stokes solve: zero data, round trip, and the eigenmode identity") {
    const MacGrid2D g = make_mac_grid(16);
    StokesContext ctx(g);

    VelocityField z(g);
    CHECK(norm_l2(solve_stokes(ctx, z)) == 0.0);

    for (std::uint64_t s = 0; s < 3; ++s) {
        const VelocityField u = testutil::random_solenoidal(ctx, 100 + s);
        const VelocityField rt = solve_stokes(ctx, apply_stokes(ctx, u));
        CHECK(testutil::field_dist_inf(rt, u) <= 1e-7 * norm_inf(u));
    }

    // A v1 = lambda1 v1  =>  A^{-1} v1 = v1 / lambda1.
    const Eigenpair ep = estimate_lambda1(ctx);
    const VelocityField inv = solve_stokes(ctx, ep.mode);
    VelocityField want = (1.0 / ep.lambda) * ep.mode;
    CHECK(testutil::field_dist_inf(inv, want) <= 1e-7 * norm_inf(want));
}

TEST_CASE("stokes solve: warm start honours the guess argument") {
    const MacGrid2D g = make_mac_grid(16);
    StokesContext ctx(g);
    const VelocityField u = testutil::random_solenoidal(ctx, 110);
    const VelocityField f = apply_stokes(ctx, u);
    const VelocityField cold = solve_stokes(ctx, f);
    const VelocityField warm = solve_stokes(ctx, f, &u);
    CHECK(testutil::field_dist_inf(warm, u) <= 1e-7 * norm_inf(u));
    CHECK(testutil::field_dist_inf(cold, warm) <= 1e-7 * norm_inf(u));
}

// ============================================================================
// Sobolev norms
// ============================================================================

TEST_CASE("sobolev norms: scale identities and Poincare") {
    const MacGrid2D g = make_mac_grid(16);
    StokesContext ctx(g);
    const Eigenpair ep = estimate_lambda1(ctx);

    VelocityField z(g);
    for (int s : {-1, 0, 1, 2}) CHECK(sobolev_norm(ctx, z, s) == 0.0);

    // On the eigenmode, ||v||_s^2 = lambda1^s ||v||^2.
    const double n0 = sobolev_norm(ctx, ep.mode, 0);
    for (int s : {-1, 1, 2}) {
        const double ns = sobolev_norm(ctx, ep.mode, s);
        CHECK(testutil::rel_err(ns * ns, std::pow(ep.lambda, s) * n0 * n0) < 1e-7);
    }
    CHECK(testutil::rel_err(n0, norm_l2(ep.mode)) < 1e-12);

    for (std::uint64_t s = 0; s < 5; ++s) {
        const VelocityField u = testutil::random_solenoidal(ctx, 120 + s);
        const double m1 = sobolev_norm(ctx, u, -1);
        const double l2 = sobolev_norm(ctx, u, 0);
        const double p1 = sobolev_norm(ctx, u, 1);
        CHECK(m1 * m1 <= l2 * l2 / ep.lambda + 1e-8);    // Poincare
        CHECK(l2 * l2 <= m1 * p1 * (1.0 + 1e-8) + 1e-12); // interpolation
    }

    CHECK_THROWS_AS(sobolev_norm(ctx, z, 3), std::invalid_argument);
    CHECK_THROWS_AS(sobolev_norm(ctx, z, -2), std::invalid_argument);
}

// ============================================================================
// Principal eigenpair
// ============================================================================

TEST_CASE("lambda1: Rayleigh identity, floor, and mesh convergence") {
    const MacGrid2D g = make_mac_grid(16);
    StokesContext ctx(g);
    const Eigenpair ep = estimate_lambda1(ctx);

    // Unit-normalised, solenoidal, satisfies the Rayleigh identity.
    CHECK(testutil::rel_err(norm_l2(ep.mode), 1.0) < 1e-8);
    CHECK(norm_l2(discrete_divergence(ep.mode)) <= 1e-8 / g.h);
    const VelocityField am = apply_stokes(ctx, ep.mode);
    CHECK(testutil::rel_err(dot(am, ep.mode), ep.lambda) < 1e-7);
    CHECK(norm_l2(am - ep.lambda * ep.mode) <= 1e-4 * ep.lambda);

    // Dirichlet Stokes on the unit square sits above the vector Laplacian
    // floor 2*pi^2; the wall constraint pushes it well past 2*pi^2 - 1.
    const double pi = 3.14159265358979323846;
    CHECK(ep.lambda > 2.0 * pi * pi - 1.0);

    // Cached: second call returns the identical pair.
    const Eigenpair again = estimate_lambda1(ctx);
    CHECK(again.lambda == ep.lambda);

    // O(h^2) convergence: Richardson ratio between n=8,16,32 estimates.
    StokesContext c8(make_mac_grid(8));
    StokesContext c32(make_mac_grid(32));
    const double l8 = estimate_lambda1(c8).lambda;
    const double l16 = ep.lambda;
    const double l32 = estimate_lambda1(c32).lambda;
    const double lstar = l32 + (l32 - l16) / 3.0; // h^2 extrapolation
    const double ratio = (l8 - lstar) / (l16 - lstar);
    CHECK(ratio > 3.0);
    CHECK(ratio < 5.2);
}

// ============================================================================
// Diagnostics callback
// ============================================================================

TEST_CASE("diag callback: reports solver residuals under tolerance") {
    const MacGrid2D g = make_mac_grid(16);
    StokesContext ctx(g);
    std::vector<SolveStats> log;
    ctx.diag = [&log](const SolveStats& s) { log.push_back(s); };

    const VelocityField f = testutil::random_field(g, 130);
    const VelocityField pf = leray_project(ctx, f);
    (void)solve_stokes(ctx, pf);

    REQUIRE(!log.empty());
    bool saw_leray = false, saw_solve = false;
    for (const SolveStats& s : log) {
        if (s.op == "leray_project") {
            saw_leray = true;
            CHECK(s.residual <= ctx.pressure_tol * 10.0);
        }
        if (s.op == "solve_stokes") {
            saw_solve = true;
            CHECK(s.residual <= ctx.stokes_tol * 10.0);
        }
        CHECK(s.iters >= 1);
    }
    CHECK(saw_leray);
    CHECK(saw_solve);
}

} // TEST_SUITE("stokes")
