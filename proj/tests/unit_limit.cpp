/// @file unit_limit.cpp
/// @brief Singular-limit machinery: the boundary-layer corrector, the
///        remainder evaluation, log-log rate fits, and a reduced epsilon
///        sweep through run_limit_study.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "hrns/limit.hpp"
#include "hrns/models.hpp"
#include "hrns/stokes.hpp"

using namespace hrns;

TEST_SUITE("limit") {

// ============================================================================
// Boundary-layer corrector
// ============================================================================

TEST_CASE("layer term: vanishes at t = 0 and saturates at eps * delta") {
    const MacGrid2D g = make_mac_grid(16);
    StokesContext ctx(g);
    const VelocityField delta = testutil::random_solenoidal(ctx, 61);
    const double eps = 0.02;

    CHECK(norm_l2(boundary_layer_term(delta, eps, 0.0)) == 0.0);

    VelocityField z(g);
    CHECK(norm_l2(boundary_layer_term(z, eps, 0.7)) == 0.0);

    // Saturation: within e^{-10} of eps*delta at t = 10 eps.
    VelocityField sat = boundary_layer_term(delta, eps, 10.0 * eps);
    VelocityField lim = eps * delta;
    VelocityField gap = sat;
    gap -= lim;
    CHECK(norm_l2(gap) <= std::exp(-10.0) * norm_l2(lim) * (1.0 + 1e-12));

    // d/dt of the corrector is delta * e^{-t/eps}.
    const double t = 3.0 * eps;
    VelocityField dtv = boundary_layer_term_dt(delta, eps, t);
    VelocityField want = std::exp(-t / eps) * delta;
    CHECK(testutil::field_dist_inf(dtv, want) <= 1e-12 * norm_inf(want));

    // Consistency: finite difference of the term matches the derivative.
    const double dh = 1e-6;
    VelocityField fd = boundary_layer_term(delta, eps, t + dh);
    fd -= boundary_layer_term(delta, eps, t - dh);
    fd *= 1.0 / (2.0 * dh);
    fd -= dtv;
    CHECK(norm_l2(fd) <= 1e-6 * norm_l2(dtv));
}

// ============================================================================
// Remainder evaluation
// ============================================================================

TEST_CASE("remainder: exact zero when the pair matches the limit") {
    const MacGrid2D g = make_mac_grid(16);
    StokesContext ctx(g);
    const VelocityField gf = testutil::random_solenoidal(ctx, 62);
    const VelocityField v = testutil::random_solenoidal(ctx, 63);
    const VelocityField fv = hns_rhs(ctx, v, gf);
    VelocityField zero_delta(g);

    const LimitStudyPoint pt =
        limit_remainder_at(ctx, v, fv, v, gf, zero_delta, 0.01, 1.0);
    CHECK(pt.eps == 0.01);
    CHECK(pt.w_l2 <= 1e-13);
    CHECK(pt.wbar_em1 <= 1e-12);
}

TEST_CASE("remainder: corrector removes exactly the injected layer") {
    const MacGrid2D g = make_mac_grid(16);
    StokesContext ctx(g);
    const VelocityField gf = testutil::random_solenoidal(ctx, 64);
    const VelocityField v = testutil::random_solenoidal(ctx, 65);
    const VelocityField fv = hns_rhs(ctx, v, gf);
    const VelocityField delta = testutil::random_solenoidal(ctx, 66);
    const double eps = 0.05, tstar = 0.3;

    // Manufacture u_eps = v + layer(delta), ut_eps = F(v) + layer'(delta):
    // the corrected remainder must vanish while the raw one does not.
    VelocityField ue = v;
    ue += boundary_layer_term(delta, eps, tstar);
    VelocityField ute = fv;
    ute += boundary_layer_term_dt(delta, eps, tstar);

    const LimitStudyPoint pt = limit_remainder_at(ctx, ue, ute, v, gf, delta, eps, tstar);
    CHECK(pt.w_l2 > 1e-6);   // raw remainder sees the layer
    CHECK(pt.wbar_em1 <= 1e-9 * norm_l2(delta));
}

// ============================================================================
// Rate fits
// ============================================================================

TEST_CASE("rate_fit: recovers synthetic power laws") {
    const std::vector<double> eps{4e-2, 1e-2, 2.5e-3, 6.25e-4};
    std::vector<double> lin, sqr;
    for (double e : eps) {
        lin.push_back(3.0 * e);
        sqr.push_back(2.0 * std::sqrt(e));
    }
    const RateFit fl = rate_fit(eps, lin);
    CHECK(fl.slope == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::exp(fl.intercept) == doctest::Approx(3.0).epsilon(1e-10));
    const RateFit fs = rate_fit(eps, sqr);
    CHECK(fs.slope == doctest::Approx(0.5).epsilon(1e-12));

    CHECK_THROWS_AS((void)rate_fit({1e-2}, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS((void)rate_fit({1e-2, 1e-3}, {1.0, 0.0}), std::invalid_argument);
}

// ============================================================================
// Reduced sweep
// ============================================================================

TEST_CASE("limit study: reduced sweep produces the paper-shaped rates") {
    const MacGrid2D g = make_mac_grid(16);
    StokesContext ctx(g);
    LimitStudyConfig cfg;
    cfg.n = 16;
    cfg.eps_list = {4e-2, 1e-2, 2.5e-3};
    cfg.t_star = 0.5;
    cfg.dt = 1.0 / 128.0;
    cfg.seed = 7;
    cfg.initial = {"random_smooth", 0.5};
    cfg.forcing = {"zero", 0.0};
    cfg.u0prime_kind = "perturbed";
    cfg.u0prime_amplitude = 0.5;

    const LimitStudyResult res = run_limit_study(ctx, cfg);
    REQUIRE(res.points.size() == 3);
    for (std::size_t k = 0; k < res.points.size(); ++k) {
        CHECK(res.points[k].eps == cfg.eps_list[k]);
        CHECK(std::isfinite(res.points[k].w_l2));
        CHECK(std::isfinite(res.points[k].wbar_em1));
        CHECK(res.points[k].w_l2 > 0.0);
        CHECK(res.points[k].wbar_em1 > 0.0);
    }
    // Remainders shrink with eps; rates near the sqrt(eps) / eps pair.
    CHECK(res.points[0].w_l2 > res.points[2].w_l2);
    CHECK(res.slope_w > 0.3);
    CHECK(res.slope_wbar > 0.7);
    CHECK(res.t_star == 0.5);
    CHECK(res.c_fit_w > 0.0);
    CHECK(res.c_fit_wbar > 0.0);

    // The corrected remainder per eps stays bounded (ratio column), and the
    // sweep records whether it is non-increasing within the 20% tolerance.
    CHECK(res.ratio_monotone);
}

TEST_CASE("limit study: well-prepared data needs no corrector") {
    const MacGrid2D g = make_mac_grid(16);
    StokesContext ctx(g);
    LimitStudyConfig cfg;
    cfg.n = 16;
    cfg.eps_list = {4e-2, 1e-2, 2.5e-3};
    cfg.t_star = 0.25;
    cfg.dt = 1.0 / 128.0;
    cfg.seed = 11;
    cfg.initial = {"random_smooth", 0.5};
    cfg.forcing = {"zero", 0.0};
    cfg.u0prime_kind = "well_prepared";
    cfg.u0prime_amplitude = 0.0;

    const LimitStudyResult res = run_limit_study(ctx, cfg);
    REQUIRE(res.points.size() == 3);
    // No injected layer: both remainders already decay, slope_w >= ~1/2.
    CHECK(res.slope_w > 0.3);
    for (const LimitStudyPoint& pt : res.points) CHECK(std::isfinite(pt.wbar_em1));
}

} // TEST_SUITE("limit")
