/// @file limit.hpp
/// @brief Singular-limit (eps -> 0) remainder machinery: initial-layer
///        corrector, weak-norm remainders at a fixed time, and log-log rate
///        fits across an eps sweep.
///
/// For ill-prepared data the velocity derivative carries an initial layer
/// delta * e^{-t/eps} with delta = ut(0) - F(v(0)); integrating it once gives
/// the position-level corrector eps * delta * (1 - e^{-t/eps}).  The corrected
/// remainder wbar = u_eps - v - layer starts at exactly zero and its pair
/// (wbar, d/dt wbar) is measured in the full E^{-1} norm, where the
/// convergence is first order in eps uniformly in the data preparation.

#pragma once

#include <cstdint>
#include <vector>

#include "hrns/energy.hpp"
#include "hrns/models.hpp"
#include "hrns/stokes.hpp"

namespace hrns {

/// eps * delta * (1 - e^{-t/eps}).
VelocityField boundary_layer_term(const VelocityField& delta, double eps, double t);

/// Time derivative of the layer: delta * e^{-t/eps}.
VelocityField boundary_layer_term_dt(const VelocityField& delta, double eps, double t);

struct LimitStudyPoint {
    double eps = 0.0;
    double w_l2 = 0.0;     // ||u_eps(t*) - v(t*)||_{L^2}
    double wbar_em1 = 0.0; // ||(wbar, d/dt wbar)(t*)||_{E^{-1}_eps}
};

/// Remainders of one hyperbolic state against the limit state at time t_star.
/// delta is the layer amplitude ut_eps(0) - F(v(0)); ut_eps and F(v) enter the
/// corrected pair, the layer and its derivative are analytic.
LimitStudyPoint limit_remainder_at(const StokesContext& ctx, const VelocityField& u_eps,
                                   const VelocityField& ut_eps, const VelocityField& v,
                                   const VelocityField& g, const VelocityField& delta, double eps,
                                   double t_star);

/// Least-squares slope of log(err) against log(eps); requires >= 2 positive
/// samples (std::invalid_argument otherwise).
struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
};
RateFit rate_fit(const std::vector<double>& eps, const std::vector<double>& err);

struct LimitStudyConfig {
    int n = 32;
    std::vector<double> eps_list = {4e-2, 1e-2, 2.5e-3, 6.25e-4};
    double t_star = 1.0;
    double dt = 1.0 / 256.0; // fixed step shared by every run of the sweep
    std::uint64_t seed = 7;
    DataSpec initial{"random_smooth", 0.5};
    DataSpec forcing{"zero", 0.0};
    // Ill-prepared by default: ut(0) = F(u0) + O(1) smooth perturbation.
    std::string u0prime_kind = "perturbed";
    double u0prime_amplitude = 0.5;
};

struct LimitStudyResult {
    // Ordered as eps_list.  A member that destabilizes (non-finite fields)
    // records NaN norms; slopes are fitted over the clean members only and
    // are NaN when fewer than two remain.
    std::vector<LimitStudyPoint> points;
    double slope_w = 0.0;
    double slope_wbar = 0.0;
    double t_star = 0.0;
    // Upper-bound constants at the theoretical rates: max of w/sqrt(eps) and
    // of wbar/eps over the sweep.
    double c_fit_w = 0.0;
    double c_fit_wbar = 0.0;
    // ||xi_wbar||/eps must not grow (within 20% pairwise) as eps decreases.
    bool ratio_monotone = true;
};

/// Integrate the limit equation once and the hyperbolic model per eps (same
/// fixed dt throughout), then fit both convergence slopes at t_star.
/// Requires >= 3 eps values, sorted descending.
LimitStudyResult run_limit_study(const StokesContext& ctx, const LimitStudyConfig& cfg);

} // namespace hrns
