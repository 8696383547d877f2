/// @file energy.cpp

#include "hrns/energy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hrns {

namespace {

// ||v||^2_{D(A^{s/2})} for s in {-2,...,2}; z_cache (A^{-1} v) is computed at
// most once and shared between the s=-1 and s=-2 branches of one call site.
double dnorm_sq(const StokesContext& ctx, const VelocityField& v, int s) {
    switch (s) {
        case 0:
            return dot(v, v);
        case 1: {
            VelocityField lap = laplacian_velocity(v);
            return std::max(0.0, -dot(lap, v));
        }
        case 2: {
            VelocityField av = apply_stokes(ctx, v);
            return dot(av, av);
        }
        case -1: {
            VelocityField z = solve_stokes(ctx, v);
            return std::max(0.0, dot(z, v));
        }
        case -2: {
            VelocityField z = solve_stokes(ctx, v);
            return dot(z, z);
        }
        default:
            throw std::invalid_argument("dnorm_sq: unsupported exponent");
    }
}

void check_pair(const XiPair& xi) {
    if (!(xi.u.grid() == xi.ut.grid()))
        throw std::invalid_argument("XiPair: u and ut live on different grids");
    // eps == 0 is the limit pair (v, F(v)): the eps-weighted terms drop out.
    if (xi.eps < 0.0) throw std::invalid_argument("XiPair: eps must be nonnegative");
}

void check_s(int s) {
    if (s < -1 || s > 1)
        throw std::invalid_argument("energy norm: s must be in {-1,0,1}, got " + std::to_string(s));
}

} // namespace

double full_norm(const StokesContext& ctx, const XiPair& xi, int s) {
    check_pair(xi);
    check_s(s);
    if (s == -1) {
        // One Stokes solve serves both ut terms: eps*<z,ut> + <z,z>.
        VelocityField z = solve_stokes(ctx, xi.ut);
        const double sq = xi.eps * std::max(0.0, dot(z, xi.ut)) + dot(z, z) + dot(xi.u, xi.u);
        return std::sqrt(sq);
    }
    const double sq = xi.eps * dnorm_sq(ctx, xi.ut, s) + dnorm_sq(ctx, xi.ut, s - 1) +
                      dnorm_sq(ctx, xi.u, s + 1);
    return std::sqrt(sq);
}

double trunc_norm(const StokesContext& ctx, const XiPair& xi, int s) {
    check_pair(xi);
    check_s(s);
    return std::sqrt(xi.eps * dnorm_sq(ctx, xi.ut, s) + dnorm_sq(ctx, xi.u, s + 1));
}

double default_alpha(const StokesContext& ctx, double eps) {
    const double l1 = estimate_lambda1(ctx).lambda;
    return std::min(0.25 * l1, 0.25 / eps);
}

EMinus1Value e_minus1_functional(const StokesContext& ctx, const XiPair& xi, double alpha) {
    check_pair(xi);
    if (alpha <= 0.0) alpha = default_alpha(ctx, xi.eps);
    const double eps = xi.eps;

    VelocityField zu = solve_stokes(ctx, xi.u);   // A^{-1} u
    VelocityField zt = solve_stokes(ctx, xi.ut);  // A^{-1} ut
    const double u_hm1_sq = std::max(0.0, dot(zu, xi.u));
    const double ut_hm1_sq = std::max(0.0, dot(zt, xi.ut));
    const double cross_m1 = dot(zu, xi.ut); // (u, ut)_{-1}

    const double trunc_sq = eps * ut_hm1_sq + dot(xi.u, xi.u);
    const double value = trunc_sq + alpha * u_hm1_sq + 2.0 * eps * alpha * cross_m1;
    if (value < 0.0) throw std::domain_error("alpha too large for positivity");

    // Two-sided constants from Young (theta = 1/2) and the Poincare bound
    // ||u||^2_{H^-1} <= ||u||^2 / lambda1.
    const double l1 = estimate_lambda1(ctx).lambda;
    const double margin = alpha - 2.0 * eps * alpha * alpha; // >= alpha/2 for default alpha
    const double c1 = std::min(0.5, 1.0 + std::min(0.0, margin) / l1);
    const double c2 = std::max(1.5, 1.0 + (alpha + 2.0 * eps * alpha * alpha) / l1);
    return {value, trunc_sq, c1, c2};
}

Ebar1Value ebar1_functional(const StokesContext& ctx, const XiPair& xi, double gweight) {
    check_pair(xi);
    const double eps = xi.eps;
    VelocityField au = apply_stokes(ctx, xi.u);
    VelocityField lap_ut = laplacian_velocity(xi.ut);
    const double e1 = eps * std::max(0.0, -dot(lap_ut, xi.ut)) + dot(au, au);
    const double u_h1_sq = dot(au, xi.u); // <A u, u>
    const double cross = dot(xi.ut, au);  // (ut, A u)
    const double value = e1 + gweight * (2.0 * eps * cross + u_h1_sq);
    const double ratio = (e1 > 0.0) ? value / e1 : 1.0;
    const bool comparable = (ratio >= 0.1 && ratio <= 10.0);
    return {value, e1, ratio, comparable};
}

EnvelopeFit fit_dissipative_envelope(const std::vector<double>& times,
                                     const std::vector<double>& values) {
    const std::size_t K = times.size();
    if (K != values.size() || K < 10)
        throw std::invalid_argument("fit_dissipative_envelope: need >= 10 aligned samples");
    for (std::size_t k = 1; k < K; ++k)
        if (!(times[k] > times[k - 1]))
            throw std::invalid_argument("fit_dissipative_envelope: times must increase");

    const std::size_t tail = K - std::max<std::size_t>(1, K / 5);
    double qg = values[tail];
    for (std::size_t k = tail; k < K; ++k) qg = std::max(qg, values[k]);

    double peak_excess = 0.0;
    for (std::size_t k = 0; k < K; ++k) peak_excess = std::max(peak_excess, values[k] - qg);
    if (peak_excess <= 0.0) throw std::runtime_error("no dissipative envelope");

    // Transient window: leading samples with excess above 10% of the peak.
    std::vector<double> ts, ls;
    for (std::size_t k = 0; k < K; ++k) {
        const double ex = values[k] - qg;
        if (ex <= 0.1 * peak_excess) break;
        ts.push_back(times[k]);
        ls.push_back(std::log(ex));
    }
    if (ts.size() < 3) throw std::runtime_error("no dissipative envelope");

    // Least squares ln(excess) = b - alpha * t.
    const double m = double(ts.size());
    double st = 0, sl = 0, stt = 0, stl = 0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        st += ts[k];
        sl += ls[k];
        stt += ts[k] * ts[k];
        stl += ts[k] * ls[k];
    }
    const double denom = m * stt - st * st;
    if (denom <= 0.0) throw std::runtime_error("no dissipative envelope");
    const double slope = (m * stl - st * sl) / denom;
    const double alpha = -slope;
    if (!(alpha > 0.0)) throw std::runtime_error("no dissipative envelope");

    // Raise the prefactor until the envelope dominates the transient window.
    double q0 = 0.0;
    for (std::size_t k = 0; k < ts.size(); ++k)
        q0 = std::max(q0, std::exp(ls[k] + alpha * ts[k]));
    return {q0, qg, alpha};
}

JeffreyResidual jeffrey_energy_residual(const std::vector<JeffreySample>& samples,
                                        const VelocityField& g, double eps, double dt) {
    if (samples.size() < 3)
        throw std::invalid_argument("jeffrey_energy_residual: need at least 3 samples");
    if (dt <= 0.0) throw std::invalid_argument("jeffrey_energy_residual: dt must be positive");

    const std::size_t K = samples.size();
    std::vector<double> theta(K);
    for (std::size_t k = 0; k < K; ++k)
        theta[k] = 0.5 * (dot(samples[k].u, samples[k].u) +
                          eps * dot(samples[k].sigma, samples[k].sigma));

    JeffreyResidual out;
    out.t.reserve(K - 2);
    out.residual.reserve(K - 2);
    out.residual_div_sigma.reserve(K - 2);
    for (std::size_t k = 1; k + 1 < K; ++k) {
        const double dtheta = (theta[k + 1] - theta[k - 1]) / (2.0 * dt);
        const double ssq = dot(samples[k].sigma, samples[k].sigma);
        const double work = dot(samples[k].u, g);
        VelocityField ds = div_tensor(samples[k].sigma);
        out.t.push_back(double(k) * dt);
        out.residual.push_back(dtheta + ssq - work);
        out.residual_div_sigma.push_back(dtheta + dot(ds, ds) - work);
    }
    return out;
}

EnergyReport build_energy_report(const StokesContext& ctx, const std::vector<double>& times,
                                 const std::vector<XiPair>& xis) {
    if (times.size() != xis.size())
        throw std::invalid_argument("build_energy_report: times/states size mismatch");
    EnergyReport rep;
    rep.times = times;
    rep.full_e1.reserve(xis.size());
    rep.trunc_e1.reserve(xis.size());
    rep.e_minus1.reserve(xis.size());
    for (const XiPair& xi : xis) {
        const double fn = full_norm(ctx, xi, 1);
        const double tn = trunc_norm(ctx, xi, 1);
        rep.full_e1.push_back(fn * fn);
        rep.trunc_e1.push_back(tn * tn);
        rep.e_minus1.push_back(e_minus1_functional(ctx, xi).value);
    }
    std::vector<double> series(rep.full_e1.size());
    for (std::size_t k = 0; k < series.size(); ++k) series[k] = std::sqrt(rep.full_e1[k]);
    try {
        const EnvelopeFit fit = fit_dissipative_envelope(times, series);
        rep.Q_fit = fit.Q0;
        rep.Qg_fit = fit.Qg;
        rep.alpha_fit = fit.alpha;
    } catch (const std::exception&) {
        // Non-decaying or too-short series: report the norms anyway,
        // alpha_fit = 0 marks the missing envelope.
    }
    return rep;
}

} // namespace hrns
