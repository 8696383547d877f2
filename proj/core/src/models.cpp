/// @file models.cpp
/// @brief IMEX integrators (trapezoid on linear terms, Heun on advection) and
///        the trace-producing run driver.

#include "hrns/models.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace hrns {

namespace {

// out = a*x + b*y over the three stress components.
SymTensorField tensor_combo(double a, const SymTensorField& x, double b, const SymTensorField& y) {
    SymTensorField out(x.grid);
    const std::size_t m = out.s11.size();
    for (std::size_t k = 0; k < m; ++k) {
        out.s11[k] = a * x.s11[k] + b * y.s11[k];
        out.s12[k] = a * x.s12[k] + b * y.s12[k];
        out.s22[k] = a * x.s22[k] + b * y.s22[k];
    }
    return out;
}

bool field_flagged(const VelocityField& u) {
    const double m = norm_inf(u);
    return !std::isfinite(m) || m > 1e6;
}

double div_residual_of(const VelocityField& u) {
    const double nu = norm_l2(u);
    return norm_l2(discrete_divergence(u)) / (nu > 0.0 ? nu : 1.0);
}

} // namespace

// ---- right-hand sides and single steps -------------------------------------

VelocityField hns_rhs(const StokesContext& ctx, const VelocityField& u, const VelocityField& g,
                      bool linearized) {
    // P(lap u - div(u x u)) + g: one fused projection covers -A u and the
    // advection term.
    VelocityField w = laplacian_velocity(u);
    if (!linearized) w -= advect_conservative(u);
    VelocityField out = leray_project(ctx, w);
    out += g;
    return out;
}

VelocityField time_derivative_initial(const StokesContext& ctx, const VelocityField& u0,
                                      const VelocityField& g) {
    return hns_rhs(ctx, u0, g, false);
}

void hns_step(const StokesContext& ctx, HnsState& s, double dt, const VelocityField& g,
              bool linearized) {
    if (!(dt > 0.0)) throw std::invalid_argument("hns_step: dt must be positive");
    const double eps = s.eps;
    if (!(eps > 0.0)) throw std::invalid_argument("hns_step: eps must be positive");

    // Eliminating u^{n+1} = ubar + (dt/2) v^{n+1} from the trapezoid rule gives
    //   M v^{n+1} = (eps - dt/2) v - (dt/2) A (u + ubar) + dt (N + g),
    //   M = (eps + dt/2) I + (dt^2/4) A.
    VelocityField ubar = s.u;
    axpy(0.5 * dt, s.ut, ubar);

    VelocityField w = s.u;
    w += ubar; // 2u + (dt/2) v
    VelocityField Aw = apply_stokes(ctx, w);

    VelocityField rhs_lin = s.ut;
    rhs_lin *= (eps - 0.5 * dt);
    axpy(-0.5 * dt, Aw, rhs_lin);

    auto apply_m = [&](const VelocityField& x) {
        VelocityField y = stokes_matvec(ctx, x);
        y *= 0.25 * dt * dt;
        axpy(eps + 0.5 * dt, x, y);
        return y;
    };

    VelocityField n1(s.u.grid());
    if (!linearized) {
        n1 = leray_project(ctx, advect_conservative(s.u));
        n1 *= -1.0;
    }

    // Stage 1: advection frozen at u^n.
    VelocityField rhs = rhs_lin;
    axpy(dt, n1, rhs);
    axpy(dt, g, rhs);
    VelocityField vstar = s.ut; // warm start
    cg_velocity(apply_m, rhs, vstar, ctx.stokes_tol, ctx.max_iters());

    // Stage 2: Heun average of the advection.
    VelocityField s2 = n1;
    if (!linearized) {
        VelocityField ustar = ubar;
        axpy(0.5 * dt, vstar, ustar);
        VelocityField n2 = leray_project(ctx, advect_conservative(ustar));
        n2 *= -1.0;
        s2 += n2;
        s2 *= 0.5;
    }
    rhs = rhs_lin;
    axpy(dt, s2, rhs);
    axpy(dt, g, rhs);
    VelocityField vnew = vstar;
    cg_velocity(apply_m, rhs, vnew, ctx.stokes_tol, ctx.max_iters());

    s.u = ubar;
    axpy(0.5 * dt, vnew, s.u);
    s.ut = vnew;
    s.u = leray_project(ctx, s.u);
    s.ut = leray_project(ctx, s.ut);
    s.t += dt;
}

void ns_limit_step(const StokesContext& ctx, NsState& s, double dt, const VelocityField& g,
                   bool linearized) {
    if (!(dt > 0.0)) throw std::invalid_argument("ns_limit_step: dt must be positive");

    // (I + (dt/2) A) v^{n+1} = (I - (dt/2) A) v + dt (N + g).
    VelocityField Av = apply_stokes(ctx, s.v);
    VelocityField rhs_lin = s.v;
    axpy(-0.5 * dt, Av, rhs_lin);

    auto apply_m = [&](const VelocityField& x) {
        VelocityField y = stokes_matvec(ctx, x);
        y *= 0.5 * dt;
        y += x;
        return y;
    };
    auto nonlin = [&](const VelocityField& v) {
        if (linearized) return VelocityField(ctx.grid());
        VelocityField w = leray_project(ctx, advect_conservative(v));
        w *= -1.0;
        return w;
    };

    VelocityField n1 = nonlin(s.v);

    VelocityField rhs = rhs_lin;
    axpy(dt, n1, rhs);
    axpy(dt, g, rhs);
    VelocityField vstar = s.v;
    cg_velocity(apply_m, rhs, vstar, ctx.stokes_tol, ctx.max_iters());

    VelocityField n2 = nonlin(vstar);
    VelocityField s2 = n1;
    s2 += n2;
    s2 *= 0.5;

    rhs = rhs_lin;
    axpy(dt, s2, rhs);
    axpy(dt, g, rhs);
    VelocityField vnew = vstar;
    cg_velocity(apply_m, rhs, vnew, ctx.stokes_tol, ctx.max_iters());

    s.v = leray_project(ctx, vnew);
    s.t += dt;
}

void jeffrey_step(const StokesContext& ctx, JeffreyState& s, double dt, const VelocityField& g,
                  bool freeze_u) {
    if (!(dt > 0.0)) throw std::invalid_argument("jeffrey_step: dt must be positive");
    if (!(s.eps > 0.0)) throw std::invalid_argument("jeffrey_step: eps must be positive");

    const double r = dt / s.eps;
    const double em1 = -std::expm1(-r); // 1 - exp(-dt/eps), accurate for small r
    const double decay = 1.0 - em1;     // exp(-dt/eps)
    const double phi2 = 1.0 - em1 / r;  // second-order exponential weight

    SymTensorField gam_n = strain_rate(s.u);

    if (freeze_u) {
        // sigma(t+dt) = e^{-dt/eps} sigma + (1 - e^{-dt/eps}) gamma(u): exact.
        s.sigma = tensor_combo(decay, s.sigma, em1, gam_n);
        s.t += dt;
        return;
    }

    auto velocity_rhs = [&](const VelocityField& u, const SymTensorField& sig) {
        VelocityField w = div_tensor(sig);
        w -= advect_conservative(u);
        VelocityField out = leray_project(ctx, w);
        out += g;
        return out;
    };

    VelocityField f1 = velocity_rhs(s.u, s.sigma);
    VelocityField ustar = s.u;
    axpy(dt, f1, ustar);
    ustar = leray_project(ctx, ustar);
    SymTensorField sigstar = tensor_combo(decay, s.sigma, em1, gam_n);

    SymTensorField gam_star = strain_rate(ustar);
    VelocityField f2 = velocity_rhs(ustar, sigstar);

    VelocityField unew = s.u;
    axpy(0.5 * dt, f1, unew);
    axpy(0.5 * dt, f2, unew);
    s.u = leray_project(ctx, unew);

    // sigma^{n+1} = e^{-r} sigma + (1-e^{-r}) gamma^n + phi2 (gamma^* - gamma^n)
    s.sigma = tensor_combo(decay, s.sigma, em1 - phi2, gam_n);
    axpy(phi2, gam_star, s.sigma);
    s.t += dt;
}

void penalized_step(PenalizedState& s, double dt, const VelocityField& g, bool linearized) {
    if (!(dt > 0.0)) throw std::invalid_argument("penalized_step: dt must be positive");
    if (!(s.eps > 0.0)) throw std::invalid_argument("penalized_step: eps must be positive");
    if (!(s.alpha_pen > 0.0)) throw std::invalid_argument("penalized_step: alpha_pen must be positive");
    const double h = s.u.grid().h;
    const double wave_sq = (1.0 + 1.0 / s.alpha_pen) / s.eps;
    if (dt > 0.4 * h / std::sqrt(wave_sq) * (1.0 + 1e-9))
        throw std::invalid_argument("penalized_step: dt violates the wave CFL bound");

    const double eps = s.eps;
    const double ia = 1.0 / s.alpha_pen;

    auto apply_l = [&](const VelocityField& x) {
        // L x = -lap x - (1/alpha) grad(div x); SPD with Dirichlet walls.
        VelocityField y = laplacian_velocity(x);
        axpy(ia, grad_div(x), y);
        y *= -1.0;
        return y;
    };

    VelocityField ubar = s.u;
    axpy(0.5 * dt, s.ut, ubar);

    VelocityField w = s.u;
    w += ubar;
    VelocityField Lw = apply_l(w);

    VelocityField rhs_lin = s.ut;
    rhs_lin *= (eps - 0.5 * dt);
    axpy(-0.5 * dt, Lw, rhs_lin);

    auto apply_m = [&](const VelocityField& x) {
        VelocityField y = apply_l(x);
        y *= 0.25 * dt * dt;
        axpy(eps + 0.5 * dt, x, y);
        return y;
    };

    VelocityField n1 = linearized ? VelocityField(s.u.grid()) : advect_conservative(s.u);
    n1 *= -1.0;

    VelocityField rhs = rhs_lin;
    axpy(dt, n1, rhs);
    axpy(dt, g, rhs);
    VelocityField vstar = s.ut;
    cg_velocity(apply_m, rhs, vstar, 1e-10, 10 * s.u.grid().n * s.u.grid().n);

    VelocityField ustar = ubar;
    axpy(0.5 * dt, vstar, ustar);
    VelocityField n2 = linearized ? VelocityField(s.u.grid()) : advect_conservative(ustar);
    n2 *= -1.0;
    VelocityField s2 = n1;
    s2 += n2;
    s2 *= 0.5;

    rhs = rhs_lin;
    axpy(dt, s2, rhs);
    axpy(dt, g, rhs);
    VelocityField vnew = vstar;
    cg_velocity(apply_m, rhs, vnew, 1e-10, 10 * s.u.grid().n * s.u.grid().n);

    s.u = ubar;
    axpy(0.5 * dt, vnew, s.u);
    s.ut = vnew;
    s.t += dt;
}

// ---- run driver ------------------------------------------------------------

DtRule parse_dt_rule(const std::string& s) {
    const auto colon = s.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("dt_rule must be 'fixed:<dt>' or 'cfl:<factor>', got '" + s + "'");
    const std::string head = s.substr(0, colon);
    const std::string tail = s.substr(colon + 1);
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(tail, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("dt_rule value is not a number: '" + s + "'");
    }
    if (used != tail.size() || !(value > 0.0) || !std::isfinite(value))
        throw std::invalid_argument("dt_rule value must be a positive number: '" + s + "'");
    DtRule rule;
    rule.value = value;
    if (head == "fixed") rule.fixed = true;
    else if (head == "cfl") rule.fixed = false;
    else throw std::invalid_argument("dt_rule must start with 'fixed:' or 'cfl:', got '" + s + "'");
    return rule;
}

namespace {

struct RunCommon {
    const StokesContext& ctx;
    const RunConfig& cfg;
    DtRule rule;
    VelocityField forcing;
    RunTrace trace;
    int step = 0;
    double last_dt = 0.0;

    RunCommon(const StokesContext& c, const RunConfig& f, DtRule r, VelocityField g)
        : ctx(c), cfg(f), rule(r), forcing(std::move(g)) {
        trace.layer_margin = -std::numeric_limits<double>::infinity();
    }

    // One uniform time loop shared by all models.  `pick_dt` returns the CFL
    // step (ignored under a fixed rule), `advance` performs one step, and
    // `sample` appends a trace row for the current state.
    template <class PickDt, class Advance, class Sample, class Flagged>
    void drive(double& t, PickDt&& pick_dt, Advance&& advance, Sample&& sample,
               Flagged&& is_flagged) {
        sample(0);
        while (t < cfg.horizon - 1e-12) {
            double dt = rule.fixed ? rule.value : pick_dt();
            if (!(dt > 1e-12)) { // CFL collapse counts as blow-up
                trace.blew_up = true;
                sample(1);
                break;
            }
            if (t + dt > cfg.horizon) dt = cfg.horizon - t;
            ++step;
            advance(dt);
            last_dt = dt;
            const bool finished = t >= cfg.horizon - 1e-12;
            const bool bad = is_flagged();
            if (bad) trace.blew_up = true;
            if (step % cfg.sample_stride == 0 || finished || bad) sample(bad ? 1 : 0);
            if (bad) break;
        }
        trace.t_end = t;
        trace.dt_last = last_dt;
    }
};

RunTrace run_hyperbolic(const StokesContext& ctx, const RunConfig& cfg, DtRule rule,
                        VelocityField u0, VelocityField gf) {
    HnsState s;
    s.eps = cfg.eps;
    s.u = std::move(u0);
    s.t = 0.0;
    if (cfg.u0prime_kind == "well_prepared") {
        s.ut = hns_rhs(ctx, s.u, gf, cfg.linearized);
    } else if (cfg.u0prime_kind == "zero") {
        s.ut = VelocityField(ctx.grid());
    } else if (cfg.u0prime_kind == "perturbed") {
        s.ut = hns_rhs(ctx, s.u, gf, cfg.linearized);
        DataSpec pspec;
        pspec.kind = "random_smooth";
        pspec.amplitude = cfg.u0prime_amplitude;
        s.ut += make_initial_field(ctx, pspec, cfg.seed ^ kPerturbSeedOffset);
    } else {
        throw std::invalid_argument("unknown u0prime_kind '" + cfg.u0prime_kind + "'");
    }

    RunCommon rc(ctx, cfg, rule, std::move(gf));
    const double h = ctx.grid().h;
    const double ut0_norm = norm_l2(s.ut);
    double max_f = 0.0;

    auto sample = [&](int flag) {
        TraceSample row;
        row.t = s.t;
        XiPair xi{s.u, s.ut, s.eps};
        row.norm_e1_full = full_norm(ctx, xi, 1);
        row.norm_e1_trunc = trunc_norm(ctx, xi, 1);
        row.u_inf = norm_inf(s.u);
        row.div_residual = div_residual_of(s.u);
        row.flag = flag;
        rc.trace.samples.push_back(row);
        if (flag == 0) {
            // damping-envelope monitor ||ut|| <= ||ut(0)|| e^{-t/eps} + 1.05 max||F||
            max_f = std::max(max_f, norm_l2(hns_rhs(ctx, s.u, rc.forcing, cfg.linearized)));
            const double bound = ut0_norm * std::exp(-s.t / s.eps) + 1.05 * max_f;
            rc.trace.layer_margin = std::max(rc.trace.layer_margin, norm_l2(s.ut) - bound);
        }
        if (cfg.store_fields) {
            rc.trace.field_times.push_back(s.t);
            rc.trace.u_fields.push_back(s.u);
            rc.trace.ut_fields.push_back(s.ut);
        }
    };
    auto pick_dt = [&]() { return rule.value * h / std::max(1.0, norm_inf(s.u)); };
    auto advance = [&](double dt) { hns_step(ctx, s, dt, rc.forcing, cfg.linearized); };
    auto bad = [&]() { return field_flagged(s.u) || field_flagged(s.ut); };
    rc.drive(s.t, pick_dt, advance, sample, bad);
    return std::move(rc.trace);
}

RunTrace run_limit(const StokesContext& ctx, const RunConfig& cfg, DtRule rule, VelocityField u0,
                   VelocityField gf) {
    NsState s;
    s.v = std::move(u0);
    s.t = 0.0;

    RunCommon rc(ctx, cfg, rule, std::move(gf));
    const double h = ctx.grid().h;

    auto sample = [&](int flag) {
        TraceSample row;
        row.t = s.t;
        // eps = 0 pair (v, F(v)): full = sqrt(||F(v)||^2 + ||v||_{H^2}^2),
        // trunc = ||v||_{H^2} -- the limit of the hyperbolic columns.
        XiPair xi{s.v, hns_rhs(ctx, s.v, rc.forcing, cfg.linearized), 0.0};
        row.norm_e1_full = full_norm(ctx, xi, 1);
        row.norm_e1_trunc = trunc_norm(ctx, xi, 1);
        row.u_inf = norm_inf(s.v);
        row.div_residual = div_residual_of(s.v);
        row.flag = flag;
        rc.trace.samples.push_back(row);
        if (cfg.store_fields) {
            rc.trace.field_times.push_back(s.t);
            rc.trace.u_fields.push_back(s.v);
        }
    };
    auto pick_dt = [&]() { return rule.value * h / std::max(1.0, norm_inf(s.v)); };
    auto advance = [&](double dt) { ns_limit_step(ctx, s, dt, rc.forcing, cfg.linearized); };
    auto bad = [&]() { return field_flagged(s.v); };
    rc.drive(s.t, pick_dt, advance, sample, bad);
    return std::move(rc.trace);
}

RunTrace run_jeffrey(const StokesContext& ctx, const RunConfig& cfg, DtRule rule, VelocityField u0,
                     VelocityField gf) {
    JeffreyState s;
    s.eps = cfg.eps;
    s.u = std::move(u0);
    s.sigma = strain_rate(s.u); // relaxed (equilibrium) initial stress
    s.t = 0.0;

    RunCommon rc(ctx, cfg, rule, std::move(gf));
    const double h = ctx.grid().h;

    auto sample = [&](int flag) {
        TraceSample row;
        row.t = s.t;
        const double uu = norm_l2(s.u);
        const double ss = norm_l2(s.sigma);
        row.norm_e1_full = std::sqrt(uu * uu + s.eps * ss * ss); // Jeffrey energy
        row.norm_e1_trunc = uu;
        row.u_inf = norm_inf(s.u);
        row.div_residual = div_residual_of(s.u);
        row.flag = flag;
        rc.trace.samples.push_back(row);
        if (cfg.store_fields) {
            rc.trace.field_times.push_back(s.t);
            rc.trace.jeffrey_fields.push_back(JeffreySample{s.u, s.sigma});
        }
    };
    auto pick_dt = [&]() {
        return rule.value * std::min(h / std::max(1.0, norm_inf(s.u)), h * std::sqrt(s.eps));
    };
    auto advance = [&](double dt) { jeffrey_step(ctx, s, dt, rc.forcing, false); };
    auto bad = [&]() { return field_flagged(s.u); };
    rc.drive(s.t, pick_dt, advance, sample, bad);
    return std::move(rc.trace);
}

RunTrace run_penalized(const StokesContext& ctx, const RunConfig& cfg, DtRule rule,
                       VelocityField u0, VelocityField gf) {
    PenalizedState s;
    s.eps = cfg.eps;
    s.alpha_pen = *cfg.alpha_pen;
    s.u = std::move(u0);
    s.t = 0.0;
    auto prepared_ut = [&]() {
        // Parabolic-limit right-hand side of the penalized system.
        VelocityField f = laplacian_velocity(s.u);
        axpy(1.0 / s.alpha_pen, grad_div(s.u), f);
        if (!cfg.linearized) f -= advect_conservative(s.u);
        f += gf;
        return f;
    };
    if (cfg.u0prime_kind == "well_prepared") {
        s.ut = prepared_ut();
    } else if (cfg.u0prime_kind == "zero") {
        s.ut = VelocityField(ctx.grid());
    } else if (cfg.u0prime_kind == "perturbed") {
        VelocityField f = prepared_ut();
        DataSpec pspec;
        pspec.kind = "random_smooth";
        pspec.amplitude = cfg.u0prime_amplitude;
        f += make_initial_field(ctx, pspec, cfg.seed ^ kPerturbSeedOffset);
        s.ut = f;
    } else {
        throw std::invalid_argument("unknown u0prime_kind '" + cfg.u0prime_kind + "'");
    }

    RunCommon rc(ctx, cfg, rule, std::move(gf));
    const double h = ctx.grid().h;
    const double wave = std::sqrt((1.0 + 1.0 / s.alpha_pen) / s.eps);

    auto sample = [&](int flag) {
        TraceSample row;
        row.t = s.t;
        // Dirichlet analogs of the s = 1 norms (u is not solenoidal here):
        // full^2 = eps*||ut||_{H^1}^2 + ||ut||^2 + ||lap u||^2, trunc drops the
        // middle term.
        VelocityField lap_ut = laplacian_velocity(s.ut);
        VelocityField lap_u = laplacian_velocity(s.u);
        const double h1_ut_sq = -dot(lap_ut, s.ut);
        const double mid = norm_l2(s.ut);
        const double h2_u = norm_l2(lap_u);
        row.norm_e1_full = std::sqrt(s.eps * h1_ut_sq + mid * mid + h2_u * h2_u);
        row.norm_e1_trunc = std::sqrt(s.eps * h1_ut_sq + h2_u * h2_u);
        row.u_inf = norm_inf(s.u);
        row.div_residual = div_residual_of(s.u);
        row.flag = flag;
        rc.trace.samples.push_back(row);
        if (cfg.store_fields) {
            rc.trace.field_times.push_back(s.t);
            rc.trace.u_fields.push_back(s.u);
            rc.trace.ut_fields.push_back(s.ut);
        }
    };
    auto pick_dt = [&]() {
        return rule.value * std::min(h / std::max(1.0, norm_inf(s.u)), h / wave);
    };
    auto advance = [&](double dt) { penalized_step(s, dt, rc.forcing, cfg.linearized); };
    auto bad = [&]() { return field_flagged(s.u) || field_flagged(s.ut); };
    rc.drive(s.t, pick_dt, advance, sample, bad);
    return std::move(rc.trace);
}

} // namespace

RunTrace run_model(const StokesContext& ctx, const RunConfig& cfg) {
    if (ctx.grid().n != cfg.n)
        throw std::invalid_argument("run_model: context grid does not match config n");
    if (!(cfg.horizon >= 0.0))
        throw std::invalid_argument("run_model: horizon must be nonnegative");
    if (cfg.sample_stride < 1)
        throw std::invalid_argument("run_model: sample_stride must be >= 1");
    if (cfg.model != "limit" && !(cfg.eps > 0.0))
        throw std::invalid_argument("run_model: eps must be positive");

    const DtRule rule = parse_dt_rule(cfg.dt_rule);
    const bool projected = cfg.model != "penalized";

    VelocityField gf = make_initial_field(ctx, cfg.forcing, cfg.seed ^ kForcingSeedOffset);
    if (projected && cfg.forcing.kind != "zero") gf = leray_project(ctx, gf);

    VelocityField u0 = make_initial_field(ctx, cfg.initial, cfg.seed);
    if (projected && cfg.initial.kind != "zero") u0 = leray_project(ctx, u0);

    if (cfg.model == "hyperbolic")
        return run_hyperbolic(ctx, cfg, rule, std::move(u0), std::move(gf));
    if (cfg.model == "limit") return run_limit(ctx, cfg, rule, std::move(u0), std::move(gf));
    if (cfg.model == "jeffrey") return run_jeffrey(ctx, cfg, rule, std::move(u0), std::move(gf));
    if (cfg.model == "penalized") {
        if (!cfg.alpha_pen.has_value())
            throw std::invalid_argument("run_model: penalized model requires alpha_pen");
        if (!(*cfg.alpha_pen > 0.0))
            throw std::invalid_argument("run_model: alpha_pen must be positive");
        return run_penalized(ctx, cfg, rule, std::move(u0), std::move(gf));
    }
    throw std::invalid_argument("run_model: unknown model '" + cfg.model + "'");
}

} // namespace hrns
