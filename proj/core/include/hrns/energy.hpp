/// @file energy.hpp
/// @brief Relaxation energy norms, Lyapunov-type functionals, the dissipative
///        envelope fit, and the Jeffrey energy-identity residual.
///
/// For a pair xi = (u, du/dt) and s in {-1, 0, 1} the full norm is
///     ||xi||^2 = eps*||ut||^2_{D(A^{s/2})} + ||ut||^2_{D(A^{(s-1)/2})}
///                + ||u||^2_{D(A^{(s+1)/2})},
/// and the truncated norm drops the middle term.  At s = -1 the middle term
/// is a D(A^{-1}) norm; it is computed from a single Stokes solve per field
/// (z = A^{-1} ut gives both <z, ut> and <z, z>).

#pragma once

#include <vector>

#include "hrns/stokes.hpp"

namespace hrns {

/// State pair (u, du/dt) at fixed relaxation parameter eps.  Both are fields
/// on the same grid and are expected to be discretely divergence-free.
/// eps == 0 is legal and denotes the limit pair (v, F(v)): every eps-weighted
/// term in the functionals drops out.
struct XiPair {
    VelocityField u;
    VelocityField ut;
    double eps = 1.0;
};

double full_norm(const StokesContext& ctx, const XiPair& xi, int s);
double trunc_norm(const StokesContext& ctx, const XiPair& xi, int s);

/// Module default alpha = min(lambda1/4, 1/(4 eps)); the cap by 1/(4 eps) is
/// what keeps the quadratic form below positive definite once eps*lambda1
/// exceeds one (on the unit square lambda1 ~ 52, so the cap is active for
/// eps > ~0.02).
double default_alpha(const StokesContext& ctx, double eps);

struct EMinus1Value {
    double value;      // the quadratic form
    double trunc_sq;   // ||xi||^2 truncated at s = -1, for reference
    double c1, c2;     // analytic two-sided equivalence constants
};

/// E^{-1}_eps(xi) = ||xi||^2_{trunc,-1} + alpha*||u||^2_{H^-1}
///                  + 2*eps*alpha*(u, ut)_{-1}.
/// Pass alpha <= 0 to use the module default.  Throws std::domain_error
/// ("alpha too large for positivity") if the form evaluates negative.
EMinus1Value e_minus1_functional(const StokesContext& ctx, const XiPair& xi, double alpha = 0.0);

struct Ebar1Value {
    double value;
    double e1;           // the gweight = 0 contribution
    double ratio;        // value / e1 (comparability witness)
    bool comparable;     // ratio within [1/10, 10]
};

/// bar E^1_eps(xi) = E^1_eps(xi) + gweight*(2*eps*(ut, A u) + ||u||^2_{H^1}),
/// with E^1_eps the truncated square at s = 1.  gweight is the forcing weight
/// Q(||g||); the returned ratio witnesses two-sided comparability with E^1.
Ebar1Value ebar1_functional(const StokesContext& ctx, const XiPair& xi, double gweight);

struct EnvelopeFit {
    double Q0;    // decaying prefactor: value(t) <= Q0*exp(-alpha*t) + Qg
    double Qg;    // plateau level (max over the final 20% of samples)
    double alpha; // fitted decay rate, > 0
};

/// Fit the tightest exponential-plus-plateau envelope to a decaying series.
/// Qg is the max over the final fifth of the samples; alpha comes from a
/// log-linear least-squares fit of (value - Qg)_+ over the initial transient
/// (samples with excess above 10% of the peak excess); Q0 is then raised so
/// the envelope dominates the transient.  Throws std::runtime_error
/// ("no dissipative envelope") for non-decaying input.
EnvelopeFit fit_dissipative_envelope(const std::vector<double>& times,
                                     const std::vector<double>& values);

/// One stored sample of a Jeffrey run.
struct JeffreySample {
    VelocityField u;
    SymTensorField sigma;
};

struct JeffreyResidual {
    std::vector<double> t;                  // interior sample times
    std::vector<double> residual;           // with ||sigma||^2 (the identity)
    std::vector<double> residual_div_sigma; // variant with ||div sigma||^2
};

/// Residual of (1/2) d/dt (||u||^2 + eps*||sigma||^2) + ||sigma||^2 - (u, g)
/// along uniformly spaced samples, d/dt by centered differences.  The variant
/// array replaces ||sigma||^2 by ||div sigma||^2 and is reported as a
/// secondary diagnostic only (it is not an identity of the discrete system).
JeffreyResidual jeffrey_energy_residual(const std::vector<JeffreySample>& samples,
                                        const VelocityField& g, double eps, double dt);

/// Per-sample norm arrays plus the fitted envelope of sqrt(full_e1).
struct EnergyReport {
    std::vector<double> times;
    std::vector<double> full_e1;   // ||xi||^2, full norm at s = 1
    std::vector<double> trunc_e1;  // truncated square at s = 1
    std::vector<double> e_minus1;  // E^{-1} functional, module-default alpha
    double Q_fit = 0.0;
    double Qg_fit = 0.0;
    double alpha_fit = 0.0;
};

/// Tabulate the three energy functionals along a sampled trajectory and fit
/// the dissipative envelope to sqrt(full_e1).  A non-decaying series leaves
/// the fit fields at zero (alpha_fit == 0 means "no envelope").
EnergyReport build_energy_report(const StokesContext& ctx, const std::vector<double>& times,
                                 const std::vector<XiPair>& xis);

} // namespace hrns
