/// @file io.cpp
/// @brief Report writers: fixed column orders, %.17g doubles, stamped headers.

#include "hrns/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "hrns/version.hpp"
#include "json.hpp"

namespace hrns {

namespace {

using nlohmann::json;

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
    return out;
}

void write_header(std::ofstream& out, const ConfigStamp& stamp) {
    out << "# hrns " << tool_version() << "\n";
    out << "# config " << hash_hex(stamp.hash) << "\n";
}

void write_json(const std::string& path, json& obj, const ConfigStamp& stamp) {
    obj["tool_version"] = tool_version();
    obj["config_hash"] = hash_hex(stamp.hash);
    auto out = open_out(path);
    out << obj.dump(2) << "\n";
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

} // namespace

const char* tool_version() { return kToolVersion; }

void write_trace_csv(const std::string& path, const RunTrace& trace, const ConfigStamp& stamp) {
    auto out = open_out(path);
    write_header(out, stamp);
    out << "t,norm_E1_full,norm_E1_trunc,u_inf,div_residual,flag\n";
    for (const TraceSample& s : trace.samples)
        out << fmt(s.t) << ',' << fmt(s.norm_e1_full) << ',' << fmt(s.norm_e1_trunc) << ','
            << fmt(s.u_inf) << ',' << fmt(s.div_residual) << ',' << s.flag << "\n";
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

void write_burgers_csv(const std::string& path, const BurgersRun& run, const ConfigStamp& stamp) {
    auto out = open_out(path);
    write_header(out, stamp);
    out << "t,y,z,u_inf,support_left,support_right,cone_energy\n";
    for (const BurgersRow& r : run.rows)
        out << fmt(r.t) << ',' << fmt(r.y) << ',' << fmt(r.z) << ',' << fmt(r.u_inf) << ','
            << fmt(r.support_left) << ',' << fmt(r.support_right) << ',' << fmt(r.cone_energy)
            << "\n";
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

void write_energy_report_json(const std::string& path, const EnergyReport& report,
                              bool envelope_ok, const ConfigStamp& stamp) {
    json obj;
    obj["times"] = report.times;
    obj["full_e1"] = report.full_e1;
    obj["trunc_e1"] = report.trunc_e1;
    obj["e_minus1"] = report.e_minus1;
    obj["envelope_ok"] = envelope_ok;
    obj["Q_fit"] = report.Q_fit;
    obj["Qg_fit"] = report.Qg_fit;
    obj["alpha_fit"] = report.alpha_fit;
    write_json(path, obj, stamp);
}

void write_limit_study_json(const std::string& path, const LimitStudyResult& result,
                            const ConfigStamp& stamp) {
    json obj;
    std::vector<double> eps, w_h, wbar;
    for (const LimitStudyPoint& p : result.points) {
        eps.push_back(p.eps);
        w_h.push_back(p.w_l2);
        wbar.push_back(p.wbar_em1);
    }
    obj["eps"] = eps;
    obj["w_h"] = w_h;
    obj["wbar_em1"] = wbar;
    obj["slope_w"] = result.slope_w;
    obj["slope_wbar"] = result.slope_wbar;
    obj["t_star"] = result.t_star;
    obj["c_w"] = result.c_fit_w;
    obj["c_wbar"] = result.c_fit_wbar;
    obj["ratio_monotone"] = result.ratio_monotone;
    write_json(path, obj, stamp);
}

void write_certificate_json(const std::string& path, const BlowupCertificate& cert,
                            const ConfigStamp& stamp) {
    json obj;
    obj["eps"] = cert.eps;
    obj["horizon"] = cert.horizon;
    obj["cT"] = cert.cT;
    obj["m_threshold"] = cert.m_threshold;
    obj["y0"] = cert.y0;
    obj["yp0"] = cert.yp0;
    obj["t_blow_comparison"] = cert.t_blow_comparison;
    obj["t_blow_observed"] = cert.t_blow_observed;
    obj["fired"] = cert.fired;
    obj["ordering_ok"] = cert.ordering_ok;
    write_json(path, obj, stamp);
}

void write_stability_csv(const std::string& path, const std::vector<StabilityCell>& cells,
                         const ConfigStamp& stamp) {
    auto out = open_out(path);
    write_header(out, stamp);
    out << "amplitude,eps,outcome,alpha_fit,t_end\n";
    for (const StabilityCell& c : cells)
        out << fmt(c.amplitude) << ',' << fmt(c.eps) << ',' << c.outcome << ','
            << fmt(c.alpha_fit) << ',' << fmt(c.t_end) << "\n";
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

} // namespace hrns
