#include "gravosc/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "nlohmann/json.hpp"

namespace gravosc {

std::string format_full(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

const char* status_name(ConstraintStatus s) {
    switch (s) {
        case ConstraintStatus::Pass: return "pass";
        case ConstraintStatus::Marginal: return "marginal";
        case ConstraintStatus::Fail: return "fail";
    }
    return "?";
}

std::string curve_csv(const std::vector<CurvePoint>& rows) {
    std::ostringstream os;
    os << "L_m,P_isolated,P_shifted,P_joint,P_marginal\n";
    for (const auto& r : rows) {
        os << format_full(r.L) << ',' << format_full(r.p_isolated) << ','
           << format_full(r.p_shifted) << ',' << format_full(r.p_joint) << ','
           << format_full(r.p_marginal) << '\n';
    }
    return os.str();
}

std::string events_csv(const std::vector<EventSample>& rows) {
    std::ostringstream os;
    os << "L_bin_m,n_pairs,n_double,n_single\n";
    for (const auto& r : rows) {
        os << format_full(r.L_bin) << ',' << r.n_pairs_emitted << ',' << r.n_double_hits << ','
           << r.n_single_hits << '\n';
    }
    return os.str();
}

std::string entanglement_csv(const std::vector<EntanglementPoint>& rows) {
    std::ostringstream os;
    os << "tau_s,L_m,concurrence,negativity,entropy_bits,phi_E_reduced_rad\n";
    for (const auto& r : rows) {
        os << format_full(r.tau) << ',' << format_full(r.L) << ',' << format_full(r.concurrence)
           << ',' << format_full(r.negativity) << ',' << format_full(r.entropy_bits) << ','
           << format_full(r.phi_E_reduced) << '\n';
    }
    return os.str();
}

std::string scan_csv(const ScanGrid& grid, const std::vector<ScanRow>& rows) {
    std::ostringstream os;
    for (const auto& a : grid.axes) os << scan_param_name(a.param) << ',';
    os << "lambda_m,phi_G_rad,phi_E_rad,wl_pass,spread_pass,bg_pass,"
          "spread_margin,wl_margin,bg_margin\n";
    for (const auto& r : rows) {
        for (double v : r.values) os << format_full(v) << ',';
        const auto& rep = r.report;
        os << format_full(rep.lambda) << ',' << format_full(rep.grav_phase) << ','
           << format_full(rep.entangling_phase) << ',' << (rep.wavelength.pass ? 1 : 0) << ','
           << (rep.spreading.pass ? 1 : 0) << ',' << (rep.background.pass ? 1 : 0) << ','
           << format_full(rep.spreading.margin_ratio) << ','
           << format_full(rep.wavelength.margin_ratio) << ','
           << format_full(rep.background.margin_ratio) << '\n';
    }
    return os.str();
}

namespace {

nlohmann::json check_to_json(const ConstraintCheck& c) {
    nlohmann::json j;
    j["name"] = c.name;
    j["lhs"] = c.lhs;
    j["rhs"] = c.rhs;
    j["margin_ratio"] = c.margin_ratio;
    j["pass"] = c.pass;
    j["status"] = status_name(c.status);
    return j;
}

}  // namespace

std::string scan_json(const ScanGrid& grid, const std::vector<ScanRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json j;
        for (std::size_t a = 0; a < grid.axes.size(); ++a)
            j[scan_param_name(grid.axes[a].param)] = r.values[a];
        const auto& rep = r.report;
        j["lambda_m"] = rep.lambda;
        j["phi_G_rad"] = rep.grav_phase;
        j["phi_E_rad"] = rep.entangling_phase;
        j["wl_pass"] = rep.wavelength.pass;
        j["spread_pass"] = rep.spreading.pass;
        j["bg_pass"] = rep.background.pass;
        j["spread_margin"] = rep.spreading.margin_ratio;
        j["wl_margin"] = rep.wavelength.margin_ratio;
        j["bg_margin"] = rep.background.margin_ratio;
        arr.push_back(std::move(j));
    }
    return arr.dump(2) + "\n";
}

std::string report_json(const FeasibilityReport& r) {
    nlohmann::json j;
    j["constraints"] = {check_to_json(r.wavelength), check_to_json(r.spreading),
                        check_to_json(r.background)};
    j["lambda_m"] = r.lambda;
    j["phi_rad"] = r.free_phase;
    j["phi_G_rad"] = r.grav_phase;
    j["phi_E_rad"] = r.entangling_phase;
    j["optimal_spread_m"] = r.optimal_spread;
    j["note"] = r.note;
    return j.dump(2) + "\n";
}

std::string report_text(const FeasibilityReport& r) {
    std::ostringstream os;
    auto line = [&os](const ConstraintCheck& c) {
        os << "  " << c.name << ": lhs=" << format_full(c.lhs) << " rhs=" << format_full(c.rhs)
           << " margin=" << format_full(c.margin_ratio) << " [" << status_name(c.status) << "]\n";
    };
    os << "feasibility report\n";
    line(r.wavelength);
    line(r.spreading);
    line(r.background);
    os << "  lambda = " << format_full(r.lambda) << " m\n";
    os << "  Phi = " << format_full(r.free_phase) << " rad (unreduced)\n";
    os << "  Phi_G = " << format_full(r.grav_phase) << " rad\n";
    os << "  phi_E = " << format_full(r.entangling_phase) << " rad\n";
    os << "  optimal spread = " << format_full(r.optimal_spread) << " m\n";
    os << "  note: " << r.note << "\n";
    return os.str();
}

std::string manifest_json(const RunManifest& m) {
    nlohmann::json j;
    j["config"] = m.config_path;
    j["command"] = m.command;
    j["outputs"] = m.outputs;
    if (m.seeded) j["seed"] = m.seed;
    j["tool_version"] = m.tool_version;
    j["constants"] = m.constants_tag;
    j["duration_s"] = m.duration_s;
    return j.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << content;
    if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace gravosc
