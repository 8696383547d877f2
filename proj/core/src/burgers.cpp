/// @file burgers.cpp
/// @brief 1D relaxation integrator, moment/support diagnostics, comparison ODE
///        and the blow-up certificate.

#include "hrns/burgers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hrns {

namespace {

constexpr double kBlowupInf = 1e6;

/// Solve the constant-coefficient tridiagonal system (diag, off) x = b on the
/// interior nodes 1..n-1 (Dirichlet zeros at the ends) by the Thomas sweep.
void thomas_constant(double diag, double off, std::vector<double>& b) {
    const std::size_t m = b.size();
    if (m == 0) return;
    std::vector<double> c(m);
    c[0] = off / diag;
    b[0] /= diag;
    for (std::size_t k = 1; k < m; ++k) {
        const double denom = diag - off * c[k - 1];
        c[k] = off / denom;
        b[k] = (b[k] - off * b[k - 1]) / denom;
    }
    for (std::size_t k = m - 1; k-- > 0;) b[k] -= c[k] * b[k + 1];
}

} // namespace

Grid1D make_line_grid(double half, int n) {
    if (!(half > 0.0)) throw std::invalid_argument("make_line_grid: half-width must be positive");
    if (n < 8) throw std::invalid_argument("make_line_grid: need at least 8 intervals");
    Grid1D g;
    g.x0 = -half;
    g.length = 2.0 * half;
    g.n = n;
    g.h = g.length / n;
    return g;
}

std::vector<double> burgers_initial(const Grid1D& g, const std::string& kind, double amplitude,
                                    double center, double radius) {
    std::vector<double> u(std::size_t(g.n) + 1, 0.0);
    if (kind == "zero") return u;
    for (int i = 0; i <= g.n; ++i) {
        const double x = g.x(i);
        if (kind == "blowup") {
            const double q = 1.0 - x * x;
            u[i] = q > 0.0 ? amplitude * q * std::exp(-x) : 0.0;
        } else if (kind == "bump") {
            const double s = (x - center) / radius;
            const double q = 1.0 - s * s;
            u[i] = q > 0.0 ? amplitude * q * q * q : 0.0;
        } else {
            throw std::invalid_argument("burgers_initial: unknown kind '" + kind + "'");
        }
    }
    u.front() = 0.0;
    u.back() = 0.0;
    return u;
}

void burgers_step(BurgersState& s, double dt, const std::vector<double>* forcing,
                  bool linearized) {
    if (!(dt > 0.0)) throw std::invalid_argument("burgers_step: dt must be positive");
    if (!(s.eps > 0.0)) throw std::invalid_argument("burgers_step: eps must be positive");
    const int n = s.grid.n;
    const double h = s.grid.h;
    const double ih2 = 1.0 / (h * h);
    const double eps = s.eps;
    const std::size_t m = std::size_t(n) - 1; // interior count

    // M = (eps + dt/2) I + (dt^2/4) L1, L1 w = -(w_{i-1} - 2 w_i + w_{i+1})/h^2.
    const double diag = (eps + 0.5 * dt) + 0.25 * dt * dt * 2.0 * ih2;
    const double off = -0.25 * dt * dt * ih2;

    // rhs_lin = (eps - dt/2) v - (dt/2) L1 (u + ubar), ubar = u + (dt/2) v.
    std::vector<double> ubar(s.u);
    for (std::size_t k = 0; k < ubar.size(); ++k) ubar[k] += 0.5 * dt * s.ut[k];
    ubar.front() = ubar.back() = 0.0;

    std::vector<double> rhs_lin(m);
    for (std::size_t k = 0; k < m; ++k) {
        const int i = int(k) + 1;
        const double w = s.u[i] + ubar[i];
        const double wl = s.u[i - 1] + ubar[i - 1];
        const double wr = s.u[i + 1] + ubar[i + 1];
        const double l1w = -(wl - 2.0 * w + wr) * ih2;
        rhs_lin[k] = (eps - 0.5 * dt) * s.ut[i] - 0.5 * dt * l1w;
    }

    auto flux = [&](const std::vector<double>& u, std::vector<double>& out) {
        // N(u)_i = -((u_{i+1})^2 - (u_{i-1})^2) / (2h) on interior nodes.
        if (linearized) {
            std::fill(out.begin(), out.end(), 0.0);
            return;
        }
        for (std::size_t k = 0; k < m; ++k) {
            const int i = int(k) + 1;
            out[k] = -(u[i + 1] * u[i + 1] - u[i - 1] * u[i - 1]) / (2.0 * h);
        }
    };

    std::vector<double> n1(m), rhs(m);
    flux(s.u, n1);
    for (std::size_t k = 0; k < m; ++k) {
        rhs[k] = rhs_lin[k] + dt * n1[k];
        if (forcing) rhs[k] += dt * (*forcing)[k + 1];
    }
    thomas_constant(diag, off, rhs); // rhs is now v* on interior nodes

    std::vector<double> ustar(ubar);
    for (std::size_t k = 0; k < m; ++k) ustar[k + 1] += 0.5 * dt * rhs[k];

    std::vector<double> n2(m);
    flux(ustar, n2);
    std::vector<double> rhs2(m);
    for (std::size_t k = 0; k < m; ++k) {
        rhs2[k] = rhs_lin[k] + dt * 0.5 * (n1[k] + n2[k]);
        if (forcing) rhs2[k] += dt * (*forcing)[k + 1];
    }
    thomas_constant(diag, off, rhs2); // v^{n+1}

    for (std::size_t k = 0; k < m; ++k) {
        const int i = int(k) + 1;
        s.ut[i] = rhs2[k];
        s.u[i] = ubar[i] + 0.5 * dt * rhs2[k];
    }
    s.u.front() = s.u.back() = 0.0;
    s.ut.front() = s.ut.back() = 0.0;
    s.t += dt;
}

void burgers_limit_step(BurgersState& s, double dt, const std::vector<double>* forcing) {
    if (!(dt > 0.0)) throw std::invalid_argument("burgers_limit_step: dt must be positive");
    const int n = s.grid.n;
    const double h = s.grid.h;
    const double ih2 = 1.0 / (h * h);
    const std::size_t m = std::size_t(n) - 1;

    // (I + (dt/2) L1) u+ = (I - (dt/2) L1) u + dt (Nbar + g).
    const double diag = 1.0 + dt * ih2;
    const double off = -0.5 * dt * ih2;

    auto flux = [&](const std::vector<double>& u, std::vector<double>& out) {
        for (std::size_t k = 0; k < m; ++k) {
            const int i = int(k) + 1;
            out[k] = -(u[i + 1] * u[i + 1] - u[i - 1] * u[i - 1]) / (2.0 * h);
        }
    };
    auto l1 = [&](const std::vector<double>& u, int i) {
        return -(u[i - 1] - 2.0 * u[i] + u[i + 1]) * ih2;
    };

    std::vector<double> n1(m);
    flux(s.u, n1);
    std::vector<double> pred(s.u);
    for (std::size_t k = 0; k < m; ++k) {
        const int i = int(k) + 1;
        pred[i] = s.u[i] + dt * (-l1(s.u, i) + n1[k] + (forcing ? (*forcing)[i] : 0.0));
    }
    pred.front() = pred.back() = 0.0;
    std::vector<double> n2(m);
    flux(pred, n2);

    std::vector<double> rhs(m);
    for (std::size_t k = 0; k < m; ++k) {
        const int i = int(k) + 1;
        rhs[k] = s.u[i] - 0.5 * dt * l1(s.u, i) + dt * 0.5 * (n1[k] + n2[k]);
        if (forcing) rhs[k] += dt * (*forcing)[i];
    }
    thomas_constant(diag, off, rhs);
    for (std::size_t k = 0; k < m; ++k) s.u[k + 1] = rhs[k];
    s.u.front() = s.u.back() = 0.0;
    s.t += dt;
}

double burgers_cfl_dt(const BurgersState& s, double factor) {
    double umax = 0.0;
    for (double x : s.u) umax = std::max(umax, std::abs(x));
    if (!std::isfinite(umax)) return 0.0;
    const double h = s.grid.h;
    return factor * std::min(h / std::max(1.0, umax), h * std::sqrt(s.eps));
}

double moment_y(const Grid1D& g, const std::vector<double>& u) {
    // Weight e^{+x}: integrating the divergence-form flux +d/dx(u^2) against
    // e^{+x} by parts gives +int e^x u^2 >= 0, which is what makes the moment
    // dominate the quadratic comparison ODE (with e^{-x} the quadratic term
    // would flip sign and damp instead).
    double acc = 0.0;
    for (int i = 0; i <= g.n; ++i) {
        const double w = (i == 0 || i == g.n) ? 0.5 : 1.0;
        acc += w * std::exp(g.x(i)) * u[i];
    }
    return acc * g.h;
}

SupportInterval support_interval(const Grid1D& g, const std::vector<double>& u, double threshold) {
    SupportInterval s;
    for (int i = 0; i <= g.n; ++i) {
        if (std::abs(u[i]) > threshold) {
            if (s.empty) {
                s.empty = false;
                s.left = g.x(i);
            }
            s.right = g.x(i);
        }
    }
    return s;
}

double cone_energy(const Grid1D& g, const std::vector<double>& u, const std::vector<double>& ut,
                   double radius) {
    if (radius <= 0.0) throw std::domain_error("cone_energy: section is empty (t >= R)");
    // Section energy e = int (u_t^2 + u_x^2) over |x| <= radius.
    auto dudx = [&](int i) {
        if (i == 0) return (u[1] - u[0]) / g.h;
        if (i == g.n) return (u[g.n] - u[g.n - 1]) / g.h;
        return (u[i + 1] - u[i - 1]) / (2.0 * g.h);
    };
    int i0 = -1, i1 = -1;
    for (int i = 0; i <= g.n; ++i)
        if (std::abs(g.x(i)) <= radius) {
            if (i0 < 0) i0 = i;
            i1 = i;
        }
    if (i0 < 0 || i1 == i0) return 0.0; // no interval inside the section
    double acc = 0.0;
    for (int i = i0; i <= i1; ++i) {
        const double w = (i == i0 || i == i1) ? 0.5 : 1.0;
        const double du = dudx(i);
        acc += w * (ut[i] * ut[i] + du * du);
    }
    return acc * g.h;
}

// ---- comparison ODE ---------------------------------------------------------

double comparison_c(double horizon) {
    if (!(horizon >= 0.0))
        throw std::invalid_argument("comparison_c: horizon must be nonnegative");
    return std::exp(-(horizon + 1.0)) / (2.0 * (horizon + 1.0));
}

bool ode_advance(OdeState& s, double dt, double c) {
    if (std::abs(s.z) >= kBlowupInf || !std::isfinite(s.z)) return false;
    auto f = [c](double z, double w, double& dz, double& dw) {
        dz = w;
        dw = -w + z + c * z * z;
    };
    double remaining = dt;
    while (remaining > 0.0) {
        // Local step shrinks with the stiffness scale |z''/z'| ~ 1 + c|z|.
        const double scale = 1.0 + c * std::abs(s.z) + std::abs(s.w) / (1.0 + std::abs(s.z));
        const double hstep = std::min(remaining, 0.05 / scale);
        double k1z, k1w, k2z, k2w, k3z, k3w, k4z, k4w;
        f(s.z, s.w, k1z, k1w);
        f(s.z + 0.5 * hstep * k1z, s.w + 0.5 * hstep * k1w, k2z, k2w);
        f(s.z + 0.5 * hstep * k2z, s.w + 0.5 * hstep * k2w, k3z, k3w);
        f(s.z + hstep * k3z, s.w + hstep * k3w, k4z, k4w);
        s.z += hstep / 6.0 * (k1z + 2.0 * k2z + 2.0 * k3z + k4z);
        s.w += hstep / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
        remaining -= hstep;
        if (std::abs(s.z) >= kBlowupInf || !std::isfinite(s.z)) return false;
    }
    return true;
}

std::optional<double> ode_escape_time(double z0, double c, double horizon) {
    OdeState s;
    s.z = z0;
    double t = 0.0;
    const double dt = 1e-3;
    while (t < horizon) {
        const double step = std::min(dt, horizon - t);
        if (!ode_advance(s, step, c)) return t + step;
        t += step;
    }
    return std::nullopt;
}

// ---- run driver --------------------------------------------------------------

BurgersRun run_burgers(const BurgersConfig& cfg) {
    if (!(cfg.horizon >= 0.0))
        throw std::invalid_argument("run_burgers: horizon must be nonnegative");
    if (cfg.sample_stride < 1)
        throw std::invalid_argument("run_burgers: sample_stride must be >= 1");
    const double half = cfg.horizon + cfg.window_pad;

    BurgersState s;
    s.grid = make_line_grid(half, cfg.n);
    s.u = burgers_initial(s.grid, cfg.kind, cfg.amplitude, cfg.center, cfg.radius);
    s.ut.assign(s.u.size(), 0.0);
    s.eps = cfg.eps;

    const double c = comparison_c(cfg.horizon);
    OdeState ode;
    ode.z = moment_y(s.grid, s.u);
    bool ode_alive = std::abs(ode.z) < kBlowupInf;

    BurgersRun run;
    run.t_blow = std::numeric_limits<double>::infinity();
    const double edge_margin = 2.0 * s.grid.h;

    auto u_inf = [&]() {
        double m = 0.0;
        for (double x : s.u) m = std::max(m, std::abs(x));
        return m;
    };
    std::vector<double> pair_abs(s.u.size());
    auto sample = [&](int flag) {
        BurgersRow row;
        row.t = s.t;
        row.y = moment_y(s.grid, s.u);
        row.z = ode.z;
        row.u_inf = u_inf();
        // Support of the pair (u, ut), per the finite-propagation property.
        for (std::size_t k = 0; k < s.u.size(); ++k)
            pair_abs[k] = std::max(std::abs(s.u[k]), std::abs(s.ut[k]));
        const SupportInterval si = support_interval(s.grid, pair_abs, cfg.support_threshold);
        if (!si.empty) {
            row.support_left = si.left;
            row.support_right = si.right;
            if (si.left < s.grid.x0 + edge_margin ||
                si.right > s.grid.x0 + s.grid.length - edge_margin)
                throw std::runtime_error("domain too small for cone test");
        }
        const double section = cfg.cone_radius - cfg.cone_speed * s.t;
        row.cone_energy =
            (cfg.cone_radius > 0.0 && section > 0.0) ? cone_energy(s.grid, s.u, s.ut, section) : 0.0;
        row.flag = flag;
        if (ode_alive && std::isfinite(row.y)) {
            // Moment ordering: y must dominate z up to a small slack.
            if (row.y < ode.z - 1e-3 * (1.0 + std::abs(ode.z))) run.ordering_ok = false;
        }
        run.rows.push_back(row);
    };

    int step = 0;
    sample(0);
    while (s.t < cfg.horizon - 1e-12) {
        double dt = cfg.fixed_dt ? *cfg.fixed_dt : burgers_cfl_dt(s, cfg.cfl);
        if (!(dt > 1e-12)) {
            run.blew_up = true;
            run.t_blow = std::min(run.t_blow, s.t);
            sample(1);
            break;
        }
        if (s.t + dt > cfg.horizon) dt = cfg.horizon - s.t;
        ++step;
        burgers_step(s, dt, nullptr, cfg.linearized);
        if (ode_alive) ode_alive = ode_advance(ode, dt, c);
        run.dt_last = dt;
        const double m = u_inf();
        const bool bad = !std::isfinite(m) || m > kBlowupInf;
        const bool finished = s.t >= cfg.horizon - 1e-12;
        if (bad) {
            run.blew_up = true;
            run.t_blow = std::min(run.t_blow, s.t);
        }
        if (step % cfg.sample_stride == 0 || finished || bad) sample(bad ? 1 : 0);
        if (bad) break;
    }
    run.t_end = s.t;
    return run;
}

BlowupCertificate blowup_certificate(double eps, double horizon, int nodes_per_unit) {
    BlowupCertificate cert;
    cert.eps = eps;
    cert.horizon = horizon;
    cert.cT = comparison_c(horizon);

    // Bisection on the amplitude M of the blow-up data; the exponential factor
    // cancels against the moment weight, so y(0) = 4M/3 exactly.
    auto escapes = [&](double m) {
        return ode_escape_time(4.0 * m / 3.0, cert.cT, horizon).has_value();
    };
    double hi = 1.0;
    int doublings = 0;
    while (!escapes(hi)) {
        hi *= 2.0;
        if (++doublings > 60) return cert; // never fires at this horizon
    }
    double lo = hi > 1.0 ? hi / 2.0 : 0.0;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (escapes(mid) ? hi : lo) = mid;
    }
    cert.fired = true;
    cert.m_threshold = hi; // upper bracket: guaranteed to escape
    cert.y0 = 4.0 * hi / 3.0;
    cert.yp0 = 0.0; // ut(0) = 0 in the certificate run
    cert.t_blow_comparison = *ode_escape_time(cert.y0, cert.cT, horizon);

    BurgersConfig cfg;
    cfg.eps = eps;
    cfg.horizon = horizon;
    cfg.kind = "blowup";
    cfg.amplitude = hi;
    cfg.n = std::max(256, int(std::lround(2.0 * (horizon + cfg.window_pad) * nodes_per_unit)));
    cfg.sample_stride = 4;
    BurgersRun run = run_burgers(cfg);

    if (!run.ordering_ok) throw std::runtime_error("comparison violated");
    cert.t_blow_observed =
        run.blew_up ? run.t_blow : std::numeric_limits<double>::infinity();
    double dt_report = 0.0; // coarsest sampling gap
    for (std::size_t k = 1; k < run.rows.size(); ++k)
        dt_report = std::max(dt_report, run.rows[k].t - run.rows[k - 1].t);
    cert.ordering_ok =
        run.blew_up && cert.t_blow_observed <= cert.t_blow_comparison + dt_report;
    return cert;
}

} // namespace hrns
