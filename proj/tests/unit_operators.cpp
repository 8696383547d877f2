/// @file unit_operators.cpp
/// @brief Discrete operator algebra on the MAC grid: divergence/gradient
///        duality, the Neumann Laplacian factorisation, conservative
///        advection skew-symmetry, and the strain/stress adjoint pair.

#include <cmath>
#include <functional>

#include "doctest.h"
#include "helpers.hpp"
#include "hrns/operators.hpp"
#include "hrns/stokes.hpp"

using namespace hrns;

namespace {

double tensor_dot(const SymTensorField& a, const SymTensorField& b) {
    const double h2 = a.grid.h * a.grid.h;
    double s = 0.0;
    for (std::size_t k = 0; k < a.s11.size(); ++k)
        s += a.s11[k] * b.s11[k] + 2.0 * a.s12[k] * b.s12[k] + a.s22[k] * b.s22[k];
    return h2 * s;
}

} // namespace

TEST_SUITE("operators") {

// ============================================================================
// Divergence on manufactured fields
// ============================================================================

TEST_CASE("divergence: affine fields reproduce their continuum divergence") {
    const MacGrid2D g = make_mac_grid(16);

    // v = (x, -y) is divergence-free; exact on interior cells where both
    // faces carry the affine values (walls clamp the outermost faces).
    VelocityField v = testutil::sampled_field(
        g, [](double x, double) { return x; }, [](double, double y) { return -y; });
    ScalarField d = discrete_divergence(v);
    for (int j = 1; j < g.n - 1; ++j)
        for (int i = 1; i < g.n - 1; ++i) CHECK(std::abs(d.p(i, j)) < 1e-13);

    // v = (x, 0) has divergence one.
    VelocityField w = testutil::sampled_field(
        g, [](double x, double) { return x; }, [](double, double) { return 0.0; });
    ScalarField dw = discrete_divergence(w);
    for (int j = 1; j < g.n - 1; ++j)
        for (int i = 1; i < g.n - 1; ++i) CHECK(dw.p(i, j) == doctest::Approx(1.0).epsilon(1e-12));

    VelocityField z(g);
    ScalarField dz = discrete_divergence(z);
    CHECK(norm_l2(dz) == 0.0);
}

// ============================================================================
// Gradient and the duality <grad p, v> = -<p, div v>
// ============================================================================

TEST_CASE("gradient: linear pressure gives unit interior faces") {
    const MacGrid2D g = make_mac_grid(16);
    ScalarField p = testutil::sampled_pressure(g, [](double x, double) { return x; });
    VelocityField gp = discrete_gradient(p);
    for (int j = 0; j < g.n; ++j) {
        CHECK(gp.u1(0, j) == 0.0);
        CHECK(gp.u1(g.n, j) == 0.0);
        for (int i = 1; i < g.n; ++i) CHECK(gp.u1(i, j) == doctest::Approx(1.0).epsilon(1e-12));
    }
    for (int j = 0; j <= g.n; ++j)
        for (int i = 0; i < g.n; ++i) CHECK(std::abs(gp.u2(i, j)) < 1e-13);

    ScalarField c(g);
    c.fill(4.0);
    CHECK(norm_l2(discrete_gradient(c)) == 0.0);
}

TEST_CASE("gradient/divergence: exact negative adjoints") {
    const MacGrid2D g = make_mac_grid(16);
    for (std::uint64_t s = 0; s < 10; ++s) {
        const VelocityField v = testutil::random_field(g, 100 + s);
        const ScalarField p = testutil::random_pressure(g, 200 + s);
        const double lhs = dot(discrete_gradient(p), v);
        const double rhs = -dot(p, discrete_divergence(v));
        CHECK(std::abs(lhs - rhs) <= 1e-12 * norm_l2(p) * norm_l2(v) + 1e-15);
    }
}

// ============================================================================
// Laplacians
// ============================================================================

TEST_CASE("neumann laplacian: equals divergence of gradient entrywise") {
    const MacGrid2D g = make_mac_grid(16);
    for (std::uint64_t s = 0; s < 5; ++s) {
        const ScalarField p = testutil::random_pressure(g, 300 + s);
        const ScalarField a = laplacian_neumann(p);
        const ScalarField b = discrete_divergence(discrete_gradient(p));
        double m = 0.0;
        for (std::size_t k = 0; k < a.data().size(); ++k)
            m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
        CHECK(m < 1e-12);
    }
}

TEST_CASE("velocity laplacian: symmetric and negative definite") {
    const MacGrid2D g = make_mac_grid(16);
    const VelocityField a = testutil::random_field(g, 400);
    const VelocityField b = testutil::random_field(g, 401);
    const double sym = dot(laplacian_velocity(a), b) - dot(a, laplacian_velocity(b));
    CHECK(std::abs(sym) <= 1e-12 * norm_l2(a) * norm_l2(b));
    CHECK(dot(laplacian_velocity(a), a) < 0.0);
}

// ============================================================================
// Conservative advection
// ============================================================================

TEST_CASE("advection: skew-symmetric up to the projection residual") {
    const MacGrid2D g = make_mac_grid(32);
    StokesContext ctx(g);
    for (std::uint64_t s = 0; s < 5; ++s) {
        const VelocityField u = testutil::random_solenoidal(ctx, 500 + s);
        const double skew = dot(advect_conservative(u), u);
        const double h1 = sobolev_norm(ctx, u, 1);
        CHECK(std::abs(skew) <= 1e-8 * h1 * h1 * h1);
    }
    VelocityField z(g);
    CHECK(norm_l2(advect_conservative(z)) == 0.0);
}

// ============================================================================
// Strain-rate / tensor-divergence adjoint pair (Jeffrey coupling)
// ============================================================================

TEST_CASE("strain and tensor divergence: exact negative adjoints") {
    const MacGrid2D g = make_mac_grid(16);
    for (std::uint64_t s = 0; s < 10; ++s) {
        const VelocityField v = testutil::random_field(g, 600 + s);
        const SymTensorField t = testutil::random_tensor(g, 700 + s);
        const double lhs = dot(div_tensor(t), v);
        const double rhs = -tensor_dot(t, strain_rate(v));
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::sqrt(tensor_dot(t, t)) * norm_l2(v) + 1e-15);
    }
}

TEST_CASE("strain: rigid translation has zero strain inside the walls") {
    const MacGrid2D g = make_mac_grid(16);
    VelocityField v(g);
    v.fill(1.0);
    v.apply_boundary();
    SymTensorField e = strain_rate(v);
    // Wall-adjacent cells see the clamped faces; strictly interior cells do not.
    for (int j = 1; j < g.n - 1; ++j)
        for (int i = 1; i < g.n - 1; ++i) {
            const std::size_t k = std::size_t(j) * g.n + i;
            CHECK(std::abs(e.s11[k]) < 1e-14);
            CHECK(std::abs(e.s12[k]) < 1e-14);
            CHECK(std::abs(e.s22[k]) < 1e-14);
        }
}

// ============================================================================
// grad(div): the compressibility penalty operator
// ============================================================================

TEST_CASE("grad_div: quadratic form is minus the divergence norm, and symmetric") {
    const MacGrid2D g = make_mac_grid(16);
    for (std::uint64_t s = 0; s < 5; ++s) {
        const VelocityField u = testutil::random_field(g, 800 + s);
        const VelocityField w = testutil::random_field(g, 900 + s);
        const double dn = norm_l2(discrete_divergence(u));
        CHECK(std::abs(dot(grad_div(u), u) + dn * dn) <= 1e-12 * dn * dn + 1e-15);
        const double cross = dot(grad_div(u), w) + dot(discrete_divergence(u), discrete_divergence(w));
        CHECK(std::abs(cross) <= 1e-12 * norm_l2(u) * norm_l2(w) + 1e-15);
    }

    // Solenoidal inputs are annihilated up to the projection residual.
    StokesContext ctx(g);
    const VelocityField u = testutil::random_solenoidal(ctx, 1000);
    CHECK(norm_l2(grad_div(u)) <= 1e-8 * norm_l2(u));
}

} // TEST_SUITE("operators")
