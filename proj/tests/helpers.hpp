/// @file helpers.hpp
/// @brief Shared fixtures for the unit suites: the closed-form scalar
///        relaxation solution, deterministic random fields, and small
///        numeric utilities used across more than one suite.

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "hrns/field.hpp"
#include "hrns/grid.hpp"
#include "hrns/initial_data.hpp"
#include "hrns/stokes.hpp"

namespace testutil {

// ============================================================================
// Closed-form solution of  eps*y'' + y' + lambda*y = 0,  y(0)=1, y'(0)=0.
// Underdamped for 4*eps*lambda > 1, overdamped below.  lambda may be
// negative (growing modes of the comparison ODE linearisation); the
// overdamped branch covers that case as well.
// ============================================================================

struct ScalarRelax {
    double eps = 1.0;
    double lambda = 1.0;

    double y(double t) const {
        const double disc = 1.0 - 4.0 * eps * lambda;
        if (disc < 0.0) {
            const double om = std::sqrt(-disc) / (2.0 * eps);
            const double a = -1.0 / (2.0 * eps);
            return std::exp(a * t) * (std::cos(om * t) + std::sin(om * t) / (2.0 * eps * om));
        }
        const double rt = std::sqrt(disc);
        const double sp = (-1.0 + rt) / (2.0 * eps);
        const double sm = (-1.0 - rt) / (2.0 * eps);
        return (sp * std::exp(sm * t) - sm * std::exp(sp * t)) / (sp - sm);
    }

    double yp(double t) const {
        const double disc = 1.0 - 4.0 * eps * lambda;
        if (disc < 0.0) {
            const double om = std::sqrt(-disc) / (2.0 * eps);
            const double a = -1.0 / (2.0 * eps);
            return -std::exp(a * t) * (1.0 / (4.0 * eps * eps * om) + om) * std::sin(om * t);
        }
        const double rt = std::sqrt(disc);
        const double sp = (-1.0 + rt) / (2.0 * eps);
        const double sm = (-1.0 - rt) / (2.0 * eps);
        return sp * sm * (std::exp(sm * t) - std::exp(sp * t)) / (sp - sm);
    }
};

// ============================================================================
// Deterministic random fields.  All draws go through hrns::next_unit so the
// fixtures are reproducible across platforms.
// ============================================================================

/// Unprojected velocity with i.i.d. entries in [-1,1) and zeroed walls.
inline hrns::VelocityField random_field(const hrns::MacGrid2D& g, std::uint64_t seed) {
    hrns::VelocityField v(g);
    std::uint64_t st = seed;
    for (double& x : v.u1_data()) x = 2.0 * hrns::next_unit(st) - 1.0;
    for (double& x : v.u2_data()) x = 2.0 * hrns::next_unit(st) - 1.0;
    v.apply_boundary();
    return v;
}

/// Discretely divergence-free velocity (Leray projection of a random draw).
inline hrns::VelocityField random_solenoidal(const hrns::StokesContext& ctx, std::uint64_t seed) {
    return hrns::leray_project(ctx, random_field(ctx.grid(), seed));
}

inline hrns::ScalarField random_pressure(const hrns::MacGrid2D& g, std::uint64_t seed) {
    hrns::ScalarField p(g);
    std::uint64_t st = seed ^ 0xC0FFEEULL;
    for (double& x : p.data()) x = 2.0 * hrns::next_unit(st) - 1.0;
    return p;
}

inline hrns::SymTensorField random_tensor(const hrns::MacGrid2D& g, std::uint64_t seed) {
    hrns::SymTensorField s(g);
    std::uint64_t st = seed ^ 0xBEEFULL;
    for (double& x : s.s11) x = 2.0 * hrns::next_unit(st) - 1.0;
    for (double& x : s.s12) x = 2.0 * hrns::next_unit(st) - 1.0;
    for (double& x : s.s22) x = 2.0 * hrns::next_unit(st) - 1.0;
    return s;
}

/// Velocity sampled from smooth component functions (walls zeroed afterwards).
inline hrns::VelocityField sampled_field(const hrns::MacGrid2D& g,
                                         const std::function<double(double, double)>& f1,
                                         const std::function<double(double, double)>& f2) {
    hrns::VelocityField v(g);
    const int n = g.n;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i <= n; ++i) v.u1(i, j) = f1(i * g.h, (j + 0.5) * g.h);
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i < n; ++i) v.u2(i, j) = f2((i + 0.5) * g.h, j * g.h);
    v.apply_boundary();
    return v;
}

/// Scalar sampled at cell centers.
inline hrns::ScalarField sampled_pressure(const hrns::MacGrid2D& g,
                                          const std::function<double(double, double)>& f) {
    hrns::ScalarField p(g);
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) p.p(i, j) = f((i + 0.5) * g.h, (j + 0.5) * g.h);
    return p;
}

/// 1D nodal samples of f on a line grid, endpoints included.
inline std::vector<double> sampled_line(const hrns::Grid1D& g,
                                        const std::function<double(double)>& f) {
    std::vector<double> u(std::size_t(g.n_nodes()), 0.0);
    for (int i = 0; i < g.n_nodes(); ++i) u[std::size_t(i)] = f(g.x(i));
    return u;
}

// ============================================================================
// Small numeric utilities.
// ============================================================================

inline double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(1e-300, std::abs(want));
}

inline double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

/// Max-norm distance between two velocity fields.
inline double field_dist_inf(const hrns::VelocityField& a, const hrns::VelocityField& b) {
    hrns::VelocityField d = a;
    d -= b;
    return hrns::norm_inf(d);
}

} // namespace testutil
