/// @file burgers.hpp
/// @brief 1D hyperbolic Burgers relaxation on a line window, with the moment
///        functional, support/cone diagnostics and the blow-up certificate.
///
/// Model: u_t = v,  eps v_t = -v - (u^2)_x + u_xx (+ forcing), Dirichlet ends.
/// The scheme mirrors the 2D integrators: implicit trapezoid on -v + u_xx
/// (tridiagonal Thomas solve), explicit Heun on the central-difference flux.
///
/// Blow-up machinery: the weighted moment y(t) = int e^{+x} u dx obeys
/// y'' + y' = y + int e^x u^2 (integrate the equation against e^x; the
/// divergence-form flux contributes the positive quadratic term), so with
/// supp u(t) in [-(T+1), T+1] it dominates the comparison ODE
/// z'' + z' = z + c z^2, c = e^{-(T+1)} / (2 (T+1)).  For the data family
/// M (1-x^2)_+ e^{-x} one has y(0) = 4M/3, y'(0) = 0, and once z escapes the
/// PDE solution must blow up no later.  blowup_certificate() finds the
/// smallest bracketed M whose comparison solution escapes by the horizon and
/// verifies the ordering against the computed PDE run.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hrns/grid.hpp"

namespace hrns {

// ---- state and stepping ----------------------------------------------------

struct BurgersState {
    Grid1D grid;
    std::vector<double> u, ut; // node values, u = ut = 0 at both ends
    double t = 0.0;
    double eps = 1.0;
};

/// Symmetric window [-(half), half] with n intervals.
Grid1D make_line_grid(double half, int n);

/// Initial data on the nodes.
///   blowup: amplitude * max(0, 1-x^2) * e^{-x}   (the certificate family)
///   bump:   amplitude * max(0, 1-((x-center)/radius)^2)^3
std::vector<double> burgers_initial(const Grid1D& g, const std::string& kind, double amplitude,
                                    double center = 0.0, double radius = 1.0);

/// One IMEX step (Thomas solve per stage); zero forcing when null.
/// linearized drops the quadratic flux (closed-form oracle mode).
void burgers_step(BurgersState& s, double dt, const std::vector<double>* forcing = nullptr,
                  bool linearized = false);

/// One step of the parabolic (eps = 0) path u' = u_xx - (u^2)_x + g: implicit
/// trapezoid on the diffusion, explicit Heun on the flux.  Ignores s.ut.
void burgers_limit_step(BurgersState& s, double dt, const std::vector<double>* forcing = nullptr);

/// factor * min(h / max(1, ||u||_inf), h * sqrt(eps)).
double burgers_cfl_dt(const BurgersState& s, double factor);

// ---- diagnostics -----------------------------------------------------------

/// Trapezoid quadrature of e^{+x} u over the window (the orientation under
/// which the divergence-form flux feeds the moment a positive u^2 term).
double moment_y(const Grid1D& g, const std::vector<double>& u);

/// Smallest interval containing all nodes with |u| > threshold.
struct SupportInterval {
    bool empty = true;
    double left = 0.0, right = 0.0;
};
SupportInterval support_interval(const Grid1D& g, const std::vector<double>& u, double threshold);

/// Energy of the cone section: trapezoid of ut^2 + (du/dx)^2 over |x| <= radius
/// (centered differences interior, one-sided at the window ends).  The section
/// must be nonempty: radius <= 0 throws std::domain_error.
double cone_energy(const Grid1D& g, const std::vector<double>& u, const std::vector<double>& ut,
                   double radius);

// ---- comparison ODE and certificate ----------------------------------------

/// c(T) = e^{-(T+1)} / (2 (T+1)).
double comparison_c(double horizon);

struct OdeState {
    double z = 0.0, w = 0.0; // z and z'
};

/// Advance z'' + z' = z + c z^2 by RK4 with internal substepping that shrinks
/// near escape; freezes (returns false) once |z| exceeds 1e6.
bool ode_advance(OdeState& s, double dt, double c);

/// Escape time of the comparison ODE from z(0) = z0, z'(0) = 0 (|z| > 1e6),
/// or nullopt if it never escapes before the horizon.
std::optional<double> ode_escape_time(double z0, double c, double horizon);

// ---- run driver -------------------------------------------------------------

struct BurgersConfig {
    int n = 4096;      // intervals across the window
    double eps = 0.01;
    double horizon = 5.0;
    double cfl = 0.4;
    std::optional<double> fixed_dt;
    double window_pad = 8.0; // window half-width = horizon + pad
    std::string kind = "blowup";
    double amplitude = 1.0;
    double center = 0.0, radius = 1.0; // bump placement
    int sample_stride = 16;
    double support_threshold = 1e-8;
    double cone_radius = 0.0; // cone column integrates |x| <= cone_radius - cone_speed*t
    double cone_speed = 0.0;
    bool linearized = false; // drop the quadratic flux
};

struct BurgersRow {
    double t = 0.0;
    double y = 0.0, z = 0.0; // moment and comparison ODE
    double u_inf = 0.0;
    double support_left = 0.0, support_right = 0.0;
    double cone_energy = 0.0;
    int flag = 0;
};

struct BurgersRun {
    std::vector<BurgersRow> rows;
    bool blew_up = false;
    double t_end = 0.0;
    double dt_last = 0.0;
    double t_blow = 0.0;     // valid when blew_up
    bool ordering_ok = true; // y >= z - 1e-3 (1+|z|) while z alive
};

/// Run the 1D model on [-(horizon+pad), horizon+pad], co-integrating the
/// comparison ODE from z(0) = y(0), z'(0) = 0.  Blow-up (||u||_inf > 1e6,
/// CFL collapse or non-finite values) stops the run and records t_blow.
/// Support is tracked on max(|u|,|ut|); if it comes within 2h of the window
/// edge the finite-propagation premise is broken and the run throws
/// std::runtime_error("domain too small for cone test").
BurgersRun run_burgers(const BurgersConfig& cfg);

struct BlowupCertificate {
    double eps = 0.0, horizon = 0.0;
    double y0 = 0.0, yp0 = 0.0; // initial moment and derivative at m_threshold
    double cT = 0.0;            // comparison coefficient c(T)
    double m_threshold = 0.0;   // bracketed amplitude whose ODE escapes by T
    double t_blow_comparison = 0.0;
    double t_blow_observed = 0.0;
    bool fired = false;       // a finite escaping bracket was found
    bool ordering_ok = false; // observed blow-up no later than comparison + gap
};

/// Bisect the data amplitude to the comparison-ODE escape threshold, run the
/// PDE at the bracketed amplitude and check both orderings.  nodes_per_unit
/// controls the spatial resolution of the verification run.  If the computed
/// moment drops below the comparison solution (y < z - tol at a sample) the
/// premise is broken: throws std::runtime_error("comparison violated").
BlowupCertificate blowup_certificate(double eps, double horizon, int nodes_per_unit = 128);

} // namespace hrns
