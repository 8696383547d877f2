/// @file io.hpp
/// @brief Deterministic CSV/JSON report writers.  Every file starts with a
///        header block carrying the tool version and the config hash so runs
///        can be traced back to their exact inputs.

#pragma once

#include <string>
#include <vector>

#include "hrns/burgers.hpp"
#include "hrns/config.hpp"
#include "hrns/energy.hpp"
#include "hrns/limit.hpp"
#include "hrns/models.hpp"

namespace hrns {

/// Version string embedded in every output header.
const char* tool_version();

/// One cell of a stability map: outcome of a single (amplitude, eps) run.
struct StabilityCell {
    double amplitude = 0.0;
    double eps = 0.0;
    std::string outcome;    ///< "dissipative" | "blow-up" | "indeterminate"
    double alpha_fit = 0.0; ///< fitted decay rate when dissipative, else 0
    double t_end = 0.0;
};

/// 2D trace: t,norm_E1_full,norm_E1_trunc,u_inf,div_residual,flag per sample.
void write_trace_csv(const std::string& path, const RunTrace& trace, const ConfigStamp& stamp);

/// 1D trace: t,y,z,u_inf,support_left,support_right,cone_energy per sample.
void write_burgers_csv(const std::string& path, const BurgersRun& run, const ConfigStamp& stamp);

void write_energy_report_json(const std::string& path, const EnergyReport& report,
                              bool envelope_ok, const ConfigStamp& stamp);

/// {"eps":[...],"w_h":[...],"wbar_em1":[...],"slope_w":...,"slope_wbar":...,
///  "t_star":...} plus rate-constant and monotonicity diagnostics.
void write_limit_study_json(const std::string& path, const LimitStudyResult& result,
                            const ConfigStamp& stamp);

void write_certificate_json(const std::string& path, const BlowupCertificate& cert,
                            const ConfigStamp& stamp);

/// amplitude,eps,outcome,alpha_fit,t_end per cell, row-major over the grid.
void write_stability_csv(const std::string& path, const std::vector<StabilityCell>& cells,
                         const ConfigStamp& stamp);

} // namespace hrns
