/// @file limit.cpp
/// @brief Layer corrector, weak-norm remainders and the eps-sweep study.

#include "hrns/limit.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hrns {

VelocityField boundary_layer_term(const VelocityField& delta, double eps, double t) {
    VelocityField out = delta;
    out *= eps * (-std::expm1(-t / eps));
    return out;
}

VelocityField boundary_layer_term_dt(const VelocityField& delta, double eps, double t) {
    VelocityField out = delta;
    out *= std::exp(-t / eps);
    return out;
}

LimitStudyPoint limit_remainder_at(const StokesContext& ctx, const VelocityField& u_eps,
                                   const VelocityField& ut_eps, const VelocityField& v,
                                   const VelocityField& g, const VelocityField& delta, double eps,
                                   double t_star) {
    LimitStudyPoint pt;
    pt.eps = eps;

    VelocityField w = u_eps;
    w -= v;
    pt.w_l2 = norm_l2(w);

    VelocityField wbar = w;
    wbar -= boundary_layer_term(delta, eps, t_star);
    VelocityField wbar_t = ut_eps;
    wbar_t -= hns_rhs(ctx, v, g, false); // limit-equation time derivative at v
    wbar_t -= boundary_layer_term_dt(delta, eps, t_star);

    XiPair xi{wbar, wbar_t, eps};
    pt.wbar_em1 = full_norm(ctx, xi, -1);
    return pt;
}

RateFit rate_fit(const std::vector<double>& eps, const std::vector<double>& err) {
    if (eps.size() != err.size() || eps.size() < 2)
        throw std::invalid_argument("rate_fit: need >= 2 matched samples");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double m = double(eps.size());
    for (std::size_t k = 0; k < eps.size(); ++k) {
        if (!(eps[k] > 0.0) || !(err[k] > 0.0))
            throw std::invalid_argument("rate_fit: samples must be positive");
        const double x = std::log(eps[k]);
        const double y = std::log(err[k]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = m * sxx - sx * sx;
    if (std::abs(denom) < 1e-14 * m * sxx)
        throw std::invalid_argument("rate_fit: eps values must be distinct");
    RateFit fit;
    fit.slope = (m * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / m;
    return fit;
}

LimitStudyResult run_limit_study(const StokesContext& ctx, const LimitStudyConfig& cfg) {
    if (ctx.grid().n != cfg.n)
        throw std::invalid_argument("run_limit_study: context grid does not match config n");
    if (cfg.eps_list.size() < 3)
        throw std::invalid_argument("run_limit_study: need >= 3 eps values");
    for (std::size_t k = 0; k + 1 < cfg.eps_list.size(); ++k)
        if (!(cfg.eps_list[k] > cfg.eps_list[k + 1]))
            throw std::invalid_argument("run_limit_study: eps_list must be strictly decreasing");
    if (!(cfg.dt > 0.0) || !(cfg.t_star > 0.0))
        throw std::invalid_argument("run_limit_study: dt and t_star must be positive");

    VelocityField u0 = make_initial_field(ctx, cfg.initial, cfg.seed);
    u0 = leray_project(ctx, u0);
    VelocityField g = make_initial_field(ctx, cfg.forcing, cfg.seed ^ kForcingSeedOffset);
    if (cfg.forcing.kind != "zero") g = leray_project(ctx, g);

    auto integrate_to_t_star = [&](auto&& step_once) {
        double t = 0.0;
        while (t < cfg.t_star - 1e-12) {
            const double dt = std::min(cfg.dt, cfg.t_star - t);
            step_once(dt);
            t += dt;
        }
    };

    NsState vs;
    vs.v = u0;
    integrate_to_t_star([&](double dt) { ns_limit_step(ctx, vs, dt, g); });
    const VelocityField v_star = vs.v;

    const VelocityField f_v0 = hns_rhs(ctx, u0, g, false);

    VelocityField delta(ctx.grid()); // ut(0) - F(v(0))
    VelocityField ut0 = f_v0;
    if (cfg.u0prime_kind == "well_prepared") {
        // delta stays zero
    } else if (cfg.u0prime_kind == "zero") {
        ut0 = VelocityField(ctx.grid());
        delta = f_v0;
        delta *= -1.0;
    } else if (cfg.u0prime_kind == "perturbed") {
        DataSpec pspec{"random_smooth", cfg.u0prime_amplitude};
        delta = make_initial_field(ctx, pspec, cfg.seed ^ kPerturbSeedOffset);
        ut0 += delta;
    } else {
        throw std::invalid_argument("run_limit_study: unknown u0prime_kind '" + cfg.u0prime_kind +
                                    "'");
    }

    const double nan = std::numeric_limits<double>::quiet_NaN();
    LimitStudyResult result;
    result.t_star = cfg.t_star;
    for (double eps : cfg.eps_list) {
        LimitStudyPoint pt;
        pt.eps = eps;
        pt.w_l2 = pt.wbar_em1 = nan;
        // A destabilized member (eps too large for the data) surfaces as
        // non-finite fields or a Stokes-residual throw; record it as NaN and
        // keep sweeping so the study can report which members failed.
        try {
            HnsState hs;
            hs.eps = eps;
            hs.u = u0;
            hs.ut = ut0;
            integrate_to_t_star([&](double dt) { hns_step(ctx, hs, dt, g, false); });
            pt = limit_remainder_at(ctx, hs.u, hs.ut, v_star, g, delta, eps, cfg.t_star);
        } catch (const std::exception&) {
        }
        result.points.push_back(pt);
    }

    std::vector<double> eps_w, w_v, eps_wb, wbar_v;
    for (const LimitStudyPoint& pt : result.points) {
        if (std::isfinite(pt.w_l2) && pt.w_l2 > 0.0) {
            eps_w.push_back(pt.eps);
            w_v.push_back(pt.w_l2);
        }
        if (std::isfinite(pt.wbar_em1) && pt.wbar_em1 > 0.0) {
            eps_wb.push_back(pt.eps);
            wbar_v.push_back(pt.wbar_em1);
        }
    }
    result.slope_w = eps_w.size() >= 2 ? rate_fit(eps_w, w_v).slope : nan;
    result.slope_wbar = eps_wb.size() >= 2 ? rate_fit(eps_wb, wbar_v).slope : nan;
    if (eps_w.size() != result.points.size() || eps_wb.size() != result.points.size())
        result.ratio_monotone = false;
    for (const LimitStudyPoint& pt : result.points) {
        if (!std::isfinite(pt.w_l2) || !std::isfinite(pt.wbar_em1)) continue;
        result.c_fit_w = std::max(result.c_fit_w, pt.w_l2 / std::sqrt(pt.eps));
        result.c_fit_wbar = std::max(result.c_fit_wbar, pt.wbar_em1 / pt.eps);
    }
    for (std::size_t k = 0; k + 1 < result.points.size(); ++k) {
        const double r0 = result.points[k].wbar_em1 / result.points[k].eps;
        const double r1 = result.points[k + 1].wbar_em1 / result.points[k + 1].eps;
        if (!(r1 <= 1.2 * r0)) result.ratio_monotone = false;
    }
    return result;
}

} // namespace hrns
