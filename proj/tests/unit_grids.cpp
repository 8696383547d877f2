/// @file unit_grids.cpp
/// @brief Grid and field container contracts: MAC site counts, wall
///        handling, weighted inner products, CSV layout, and the 1D line
///        grid used by the Burgers solver.

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "helpers.hpp"
#include "hrns/field.hpp"
#include "hrns/grid.hpp"

using namespace hrns;

TEST_SUITE("grids") {

// ============================================================================
// MAC grid construction
// ============================================================================

TEST_CASE("mac grid: site counts and spacing at n=8") {
    const MacGrid2D g = make_mac_grid(8);
    CHECK(g.n == 8);
    CHECK(g.h == doctest::Approx(0.125).epsilon(0.0));
    CHECK(g.n_u1() == 9 * 8);
    CHECK(g.n_u2() == 8 * 9);
    CHECK(g.n_cells() == 64);
    CHECK(g.n_corners() == 81);
    CHECK(make_mac_grid(8) == g);
}

TEST_CASE("mac grid: h*n is exactly one at the supported sizes") {
    // Exact in binary arithmetic for every even n up to 96 and for powers
    // of two beyond; n=98 is the first even size where 1.0/n loses it.
    for (int n = 8; n <= 96; n += 2) {
        const MacGrid2D g = make_mac_grid(n);
        CHECK(g.h * g.n == 1.0);
    }
    for (int n : {128, 256, 512}) CHECK(make_mac_grid(n).h * n == 1.0);
}

TEST_CASE("mac grid: rejects odd and undersized n") {
    CHECK_THROWS_AS(make_mac_grid(7), std::invalid_argument);
    CHECK_THROWS_AS(make_mac_grid(6), std::invalid_argument);
    CHECK_THROWS_AS(make_mac_grid(9), std::invalid_argument);
    CHECK_THROWS_WITH_AS(make_mac_grid(4), "make_mac_grid: n must be >= 8, got 4",
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(make_mac_grid(11), "make_mac_grid: n must be even, got 11",
                         std::invalid_argument);
}

// ============================================================================
// Velocity field: wall faces and arithmetic
// ============================================================================

TEST_CASE("velocity: wall-normal faces are pinned to zero") {
    const MacGrid2D g = make_mac_grid(8);
    VelocityField v(g);
    for (int j = 0; j < g.n; ++j) {
        CHECK(v.u1(0, j) == 0.0);
        CHECK(v.u1(g.n, j) == 0.0);
    }

    v.fill(1.0);
    v.apply_boundary();
    for (int j = 0; j < g.n; ++j) {
        CHECK(v.u1(0, j) == 0.0);
        CHECK(v.u1(g.n, j) == 0.0);
        CHECK(v.u1(1, j) == 1.0); // interior untouched
    }
    for (int i = 0; i < g.n; ++i) {
        CHECK(v.u2(i, 0) == 0.0);
        CHECK(v.u2(i, g.n) == 0.0);
        CHECK(v.u2(i, 1) == 1.0);
    }
}

TEST_CASE("velocity: vector-space operations and h^2-weighted products") {
    const MacGrid2D g = make_mac_grid(16);
    const VelocityField a = testutil::random_field(g, 11);
    const VelocityField b = testutil::random_field(g, 12);

    // norm^2 == dot with itself, and dot is the h^2-weighted sum.
    const double n2 = norm_l2(a);
    CHECK(testutil::rel_err(n2 * n2, dot(a, a)) < 1e-13);
    double raw = 0.0;
    for (double x : a.u1_data()) raw += x * x;
    for (double x : a.u2_data()) raw += x * x;
    CHECK(testutil::rel_err(dot(a, a), g.h * g.h * raw) < 1e-13);

    // Bilinearity and the expression templates agree with axpy.
    VelocityField c = a;
    c += b;
    CHECK(testutil::rel_err(dot(c, c), dot(a, a) + 2.0 * dot(a, b) + dot(b, b)) < 1e-12);
    VelocityField d = a + b;
    CHECK(testutil::field_dist_inf(c, d) == 0.0);
    VelocityField e = a;
    axpy(2.5, b, e); // e = a + 2.5 b
    VelocityField f = a + 2.5 * b;
    CHECK(testutil::field_dist_inf(e, f) < 1e-15);
    VelocityField gdiff = a - b;
    gdiff -= a;
    gdiff += b;
    CHECK(norm_inf(gdiff) < 1e-15);
}

TEST_CASE("velocity: support radius of a compact field") {
    const MacGrid2D g = make_mac_grid(32);
    VelocityField v(g);
    CHECK(support_radius(v, 0.5, 0.5, 1e-12) == 0.0); // empty support

    // One interior face at (x,y) = (0.25, 0.5 + h/2).
    v.u1(8, 16) = 1.0;
    const double dx = 0.25 - 0.5, dy = (16 + 0.5) * g.h - 0.5;
    CHECK(support_radius(v, 0.5, 0.5, 1e-12) ==
          doctest::Approx(std::sqrt(dx * dx + dy * dy)).epsilon(1e-12));
    CHECK(support_radius(v, 0.5, 0.5, 2.0) == 0.0); // below threshold
}

// ============================================================================
// Scalar field: mean handling
// ============================================================================

TEST_CASE("scalar: mean and remove_mean") {
    const MacGrid2D g = make_mac_grid(16);
    ScalarField p = testutil::sampled_pressure(g, [](double x, double) { return x + 2.0; });
    CHECK(p.mean() == doctest::Approx(2.5).epsilon(1e-13));
    p.remove_mean();
    CHECK(std::abs(p.mean()) < 1e-14);

    ScalarField q(g);
    q.fill(3.0);
    CHECK(q.mean() == doctest::Approx(3.0).epsilon(1e-15));
    const double qn = norm_l2(q);
    CHECK(testutil::rel_err(qn * qn, 9.0) < 1e-13); // h^2 * n^2 * 9
}

// ============================================================================
// 1D line grid
// ============================================================================

TEST_CASE("line grid: symmetric window and node coordinates") {
    const Grid1D g = make_line_grid(5.0, 64);
    CHECK(g.n == 64);
    CHECK(g.n_nodes() == 65);
    CHECK(g.x0 == doctest::Approx(-5.0).epsilon(0.0));
    CHECK(g.length == doctest::Approx(10.0).epsilon(0.0));
    CHECK(g.h == doctest::Approx(10.0 / 64.0).epsilon(0.0));
    CHECK(g.x(0) == doctest::Approx(-5.0).epsilon(1e-15));
    CHECK(g.x(64) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(g.x(32) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("line grid: rejects bad half-width and resolution") {
    CHECK_THROWS_WITH_AS(make_line_grid(0.0, 64), "make_line_grid: half-width must be positive",
                         std::invalid_argument);
    CHECK_THROWS_AS(make_line_grid(-1.0, 64), std::invalid_argument);
    CHECK_THROWS_AS(make_line_grid(2.0, 7), std::invalid_argument);
    CHECK_THROWS_AS(Grid1D(0.0, 1.0, 3), std::invalid_argument);
    CHECK_THROWS_AS(Grid1D(0.0, -1.0, 16), std::invalid_argument);
}

// ============================================================================
// CSV field dump
// ============================================================================

TEST_CASE("csv: header, row count, and determinism") {
    const MacGrid2D g = make_mac_grid(8);
    const VelocityField v = testutil::random_field(g, 21);
    const ScalarField p = testutil::random_pressure(g, 22);

    std::ostringstream a;
    write_field_csv(a, v);
    const std::string sa = a.str();
    CHECK(sa.rfind("site_type,i,j,value\n", 0) == 0);

    std::size_t rows = 0;
    for (char c : sa)
        if (c == '\n') ++rows;
    CHECK(rows == 1 + std::size_t(g.n_u1() + g.n_u2()));

    std::ostringstream b;
    write_field_csv(b, v);
    CHECK(sa == b.str()); // deterministic site order

    std::ostringstream c;
    write_field_csv(c, v, &p);
    std::size_t rows_p = 0;
    for (char ch : c.str())
        if (ch == '\n') ++rows_p;
    CHECK(rows_p == rows + std::size_t(g.n_cells()));
}

} // TEST_SUITE("grids")
