/// @file models.hpp
/// @brief Time integrators for the 2D models and the shared run driver.
///
/// All models advance with one scheme family: implicit trapezoid on every
/// linear term (including the 1/eps damping) and explicit Heun on the
/// conservative-form advection.  The trapezoid keeps the eps-sweep affordable
/// (an explicit treatment of the damping would force dt ~ eps) and, being a
/// quadrature rule, it integrates the initial-layer impulse exactly, so
/// measurements at fixed t > 0 are clean even when dt >> eps.
///
/// Models:
///   hyperbolic  eps u_tt + u_t + P div(u x u) = -A u + g
///   limit       v_t + P div(v x v) = -A v + g
///   jeffrey     u_t + P div(u x u) = P div(sigma) + g,  eps sigma_t + sigma = gamma(u)
///   penalized   eps u_tt + u_t + div(u x u) = lap u + (1/alpha) grad div u + g
///
/// The Jeffrey stress relaxes with the exact exponential factor exp(-dt/eps)
/// (second-order exponential integrator), so a frozen-u step reproduces the
/// closed-form relaxation to gamma(u) exactly.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hrns/energy.hpp"
#include "hrns/initial_data.hpp"
#include "hrns/stokes.hpp"

namespace hrns {

// Seed-space offsets decorrelating the forcing and u0' perturbation draws
// from the initial-data draw at the same user seed.
inline constexpr std::uint64_t kForcingSeedOffset = 0x9E3779B97F4A7C15ULL;
inline constexpr std::uint64_t kPerturbSeedOffset = 0x517CC1B727220A95ULL;

// ---- states ----------------------------------------------------------------

struct HnsState {
    VelocityField u, ut;
    double t = 0.0;
    double eps = 1.0;
};

struct NsState {
    VelocityField v;
    double t = 0.0;
};

struct JeffreyState {
    VelocityField u;
    SymTensorField sigma;
    double t = 0.0;
    double eps = 1.0;
};

struct PenalizedState {
    VelocityField u, ut;
    double t = 0.0;
    double eps = 1.0;
    double alpha_pen = 0.1;
};

// ---- single steps ----------------------------------------------------------

/// F(u) = P(-div(u x u)) - A u + g, the velocity equation's u-dependent
/// right-hand side (one fused projection).  g must already be solenoidal.
VelocityField hns_rhs(const StokesContext& ctx, const VelocityField& u, const VelocityField& g,
                      bool linearized = false);

/// One IMEX step of the hyperbolic model; re-projects (u, ut) on exit.
void hns_step(const StokesContext& ctx, HnsState& s, double dt, const VelocityField& g,
              bool linearized = false);

/// One IMEX step of the limit (parabolic) model.
void ns_limit_step(const StokesContext& ctx, NsState& s, double dt, const VelocityField& g,
                   bool linearized = false);

/// Well-prepared initial du/dt: the limit equation's right-hand side at u0.
VelocityField time_derivative_initial(const StokesContext& ctx, const VelocityField& u0,
                                      const VelocityField& g);

/// One Jeffrey step.  freeze_u holds the velocity fixed (stress-relaxation
/// oracle mode).
void jeffrey_step(const StokesContext& ctx, JeffreyState& s, double dt, const VelocityField& g,
                  bool freeze_u = false);

/// One penalized step (no projection; full Dirichlet walls).  Enforces the
/// wave CFL dt <= 0.4 h sqrt(eps/(1 + 1/alpha)) as a precondition.
void penalized_step(PenalizedState& s, double dt, const VelocityField& g, bool linearized = false);

// ---- run driver ------------------------------------------------------------

struct DtRule {
    bool fixed = false;
    double value = 0.4; // dt if fixed, otherwise the CFL factor
};

/// "fixed:<dt>" or "cfl:<factor>".
DtRule parse_dt_rule(const std::string& s);

struct RunConfig {
    std::string model = "hyperbolic"; // hyperbolic | limit | jeffrey | penalized
    int n = 32;
    double eps = 1.0;
    std::optional<double> alpha_pen;
    double horizon = 1.0;
    std::string dt_rule = "cfl:0.4";
    std::uint64_t seed = 1;
    DataSpec initial;
    DataSpec forcing;
    int sample_stride = 8;

    // extensions beyond the common schema
    std::string u0prime_kind = "well_prepared"; // well_prepared | zero | perturbed
    double u0prime_amplitude = 0.0;
    bool linearized = false;
    bool store_fields = false;

    // burgers-only knobs (ignored by the 2D models)
    double window_pad = 8.0;
    double cone_radius = 0.0;
    double cone_speed = 0.0;
};

struct TraceSample {
    double t = 0.0;
    double norm_e1_full = 0.0;
    double norm_e1_trunc = 0.0;
    double u_inf = 0.0;
    double div_residual = 0.0;
    int flag = 0; // 1 once blow-up is detected
};

struct RunTrace {
    std::vector<TraceSample> samples;
    bool blew_up = false;
    double t_end = 0.0;
    double dt_last = 0.0;

    // Filled when store_fields is set: fields at the sampled times.
    std::vector<double> field_times;
    std::vector<VelocityField> u_fields;
    std::vector<VelocityField> ut_fields;      // hyperbolic only
    std::vector<JeffreySample> jeffrey_fields; // jeffrey only

    // Hyperbolic runs track the damping envelope
    //   ||ut(t)|| <= ||ut(0)|| exp(-t/eps) + 1.05 * max_s ||F(s)||;
    // layer_margin is the worst sampled (lhs - rhs), <= 0 when the bound held.
    double layer_margin = 0.0;
};

/// Drive one model from a config; samples every sample_stride steps (plus the
/// initial and final states).  Blow-up (non-finite values or ||u||_inf > 1e6)
/// stops the run and flags the trace rather than throwing.
RunTrace run_model(const StokesContext& ctx, const RunConfig& cfg);

} // namespace hrns
