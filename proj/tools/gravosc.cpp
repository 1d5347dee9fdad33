// gravosc: survival curves, entanglement traces, feasibility checks and
// scans, event simulation, and statistical-power estimates for a pair of
// mass-superposed particles coupled by their mutual gravitational phase.
//
// Exit codes: 0 success, 2 usage/config error, 3 feasible but marginal,
// 4 infeasible, 5 signal not resolvable, 1 internal error.

#include <chrono>
#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gravosc/entanglement.hpp"
#include "gravosc/evolution.hpp"
#include "gravosc/feasibility.hpp"
#include "gravosc/io.hpp"
#include "gravosc/model.hpp"
#include "gravosc/observables.hpp"
#include "gravosc/power.hpp"

namespace {

constexpr char kToolVersion[] = "1.0.0";

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;
constexpr int kExitMarginal = 3;
constexpr int kExitInfeasible = 4;
constexpr int kExitNotResolvable = 5;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Overrides {
    std::optional<double> m1, m2, dm, theta, d, L, gamma, M, R, delta;
};

struct Common {
    std::string config_path;
    std::string out_path;
    std::uint64_t seed = 0;
    std::size_t points = 1000;
    std::string format = "csv";
    Overrides ov;
};

void add_common(CLI::App* cmd, Common& c, bool with_points = true) {
    cmd->add_option("--config", c.config_path, "JSON config file")->required();
    cmd->add_option("--out", c.out_path, "output file path");
    cmd->add_option("--seed", c.seed, "64-bit RNG seed");
    if (with_points) cmd->add_option("--points", c.points, "grid point count");
    cmd->add_option("--format", c.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));

    auto* m2 = cmd->add_option("--m2", c.ov.m2, "override m2 [kg]");
    auto* dm = cmd->add_option("--dm", c.ov.dm, "override mass gap m2-m1 [kg]");
    m2->excludes(dm);
    cmd->add_option("--m1", c.ov.m1, "override m1 [kg]");
    cmd->add_option("--theta", c.ov.theta, "override mixing angle [rad]");
    cmd->add_option("--d", c.ov.d, "override separation d [m]");
    cmd->add_option("--L", c.ov.L, "override baseline L [m]");
    cmd->add_option("--gamma", c.ov.gamma, "override Lorentz factor");
    cmd->add_option("--M", c.ov.M, "override background mass [kg]");
    cmd->add_option("--R", c.ov.R, "override background distance [m]");
    cmd->add_option("--delta", c.ov.delta, "override wave-packet spread [m]");
}

gravosc::ModelInput load_input(const Common& c) {
    gravosc::ModelInput in;
    try {
        in = gravosc::load_config(c.config_path);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const Overrides& o = c.ov;
    if (o.m1) in.particle.m1 = *o.m1;
    if (o.m2) in.particle.dm = *o.m2 - in.particle.m1;
    if (o.dm) in.particle.dm = *o.dm;
    if (o.theta) in.particle.theta = *o.theta;
    if (o.d) in.config.d = *o.d;
    if (o.L) in.config.L = *o.L;
    if (o.gamma) in.config.gamma = *o.gamma;
    if (o.M) in.config.M = *o.M;
    if (o.R) in.config.R = *o.R;
    if (o.delta) in.config.delta = *o.delta;

    auto issues = gravosc::validate(in.particle, in.config);
    if (!issues.empty()) throw UsageError("invalid configuration:\n" + gravosc::describe(issues));
    return in;
}

class ManifestClock {
public:
    explicit ManifestClock(const Common& c, std::string command)
        : start_(std::chrono::steady_clock::now()) {
        manifest_.config_path = c.config_path;
        manifest_.command = std::move(command);
        manifest_.seed = c.seed;
        manifest_.tool_version = kToolVersion;
        manifest_.constants_tag = gravosc::kConstantsTag;
    }

    void finish(const std::string& out_path, bool seeded) {
        if (out_path.empty()) return;
        manifest_.outputs = {out_path};
        manifest_.seeded = seeded;
        manifest_.duration_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        gravosc::write_text_file(out_path + ".manifest.json", gravosc::manifest_json(manifest_));
    }

private:
    gravosc::RunManifest manifest_;
    std::chrono::steady_clock::time_point start_;
};

void emit(const Common& c, const std::string& payload) {
    if (c.out_path.empty())
        std::cout << payload;
    else
        gravosc::write_text_file(c.out_path, payload);
}

gravosc::ScanAxis parse_axis(const std::string& text) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (true) {
        std::size_t colon = text.find(':', pos);
        parts.push_back(text.substr(pos, colon == std::string::npos ? colon : colon - pos));
        if (colon == std::string::npos) break;
        pos = colon + 1;
    }
    if (parts.size() != 5)
        throw UsageError("axis format is name:min:max:points:lin|log, got " + text);
    gravosc::ScanAxis axis;
    try {
        axis.param = gravosc::scan_param_from_name(parts[0]);
        axis.min = std::stod(parts[1]);
        axis.max = std::stod(parts[2]);
        axis.points = static_cast<std::size_t>(std::stoull(parts[3]));
    } catch (const std::exception&) {
        throw UsageError("cannot parse axis: " + text);
    }
    if (parts[4] == "log")
        axis.log_spacing = true;
    else if (parts[4] != "lin")
        throw UsageError("axis spacing must be lin or log: " + text);
    return axis;
}

int run(int argc, char** argv) {
    CLI::App app{"two-particle gravitational-phase oscillation toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    Common curve_c;
    double curve_lmin = 0.0, curve_lmax = -1.0;
    auto* curve = app.add_subcommand("curve", "survival probabilities vs baseline L");
    add_common(curve, curve_c);
    curve->add_option("--L-min", curve_lmin, "window start [m]");
    curve->add_option("--L-max", curve_lmax, "window end [m] (default: config L)");

    Common ent_c;
    double tau_min = 0.0, tau_max = -1.0;
    bool no_gravity = false;
    auto* ent = app.add_subcommand("entangle", "entanglement measures vs proper time");
    add_common(ent, ent_c);
    ent->add_option("--tau-min", tau_min, "window start [s]");
    ent->add_option("--tau-max", tau_max,
                    "window end [s] (default: one entangling-phase period)");
    ent->add_flag("--no-gravity", no_gravity, "disable the pair coupling (G = 0)");

    Common check_c;
    auto* check = app.add_subcommand("check", "feasibility constraints with margins");
    add_common(check, check_c, false);

    Common scan_c;
    std::vector<std::string> axis_specs;
    auto* scn = app.add_subcommand("scan", "feasibility over a parameter grid");
    add_common(scn, scan_c, false);
    scn->add_option("--axis", axis_specs, "axis as name:min:max:points:lin|log (1-4 times)")
        ->required();

    Common ev_c;
    std::uint64_t n_pairs = 100000;
    double fraction = 0.5;
    std::size_t n_bins = 100;
    double ev_lmin = 0.0, ev_lmax = -1.0;
    auto* events = app.add_subcommand("events", "seeded detector-event counts per L bin");
    add_common(events, ev_c, false);
    events->add_option("--n-pairs", n_pairs, "pairs emitted per bin");
    events->add_option("--fraction", fraction, "gravitationally affected fraction");
    events->add_option("--bins", n_bins, "bin count");
    events->add_option("--L-min", ev_lmin, "window start [m]");
    events->add_option("--L-max", ev_lmax, "window end [m] (default: config L)");

    Common pow_c;
    double confidence = 0.95;
    gravosc::PowerOptions pow_opt;
    auto* pow = app.add_subcommand("power", "events needed to resolve the phase shift");
    add_common(pow, pow_c, false);
    pow->add_option("--confidence", confidence, "two-sided test confidence");
    pow->add_option("--trials", pow_opt.trials, "Monte-Carlo trials per candidate n");
    pow->add_option("--power-target", pow_opt.power_target, "required detection power");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*curve) {
            auto in = load_input(curve_c);
            ManifestClock mc(curve_c, "curve");
            if (curve_lmax < 0.0) curve_lmax = in.config.L;
            if (curve_c.format != "csv") throw UsageError("curve supports only csv output");
            auto rows = gravosc::survival_curve(in.particle, in.config, curve_lmin, curve_lmax,
                                                curve_c.points);
            emit(curve_c, gravosc::curve_csv(rows));
            mc.finish(curve_c.out_path, false);
            return kExitOk;
        }
        if (*ent) {
            auto in = load_input(ent_c);
            ManifestClock mc(ent_c, "entangle");
            gravosc::Constants k = no_gravity ? gravosc::no_gravity() : gravosc::codata2018();
            if (tau_max < 0.0) {
                if (no_gravity)
                    tau_max = gravosc::proper_time(in.config);
                else
                    tau_max = 2.0 * 3.141592653589793 * in.config.d * k.hbar /
                              (k.G * in.particle.dm * in.particle.dm);
            }
            if (ent_c.format != "csv") throw UsageError("entangle supports only csv output");
            auto rows = gravosc::entanglement_trace(in.particle, in.config, tau_min, tau_max,
                                                    ent_c.points, k);
            emit(ent_c, gravosc::entanglement_csv(rows));
            mc.finish(ent_c.out_path, false);
            return kExitOk;
        }
        if (*check) {
            auto in = load_input(check_c);
            ManifestClock mc(check_c, "check");
            auto report = gravosc::check_constraints(in.particle, in.config);
            std::cout << gravosc::report_text(report);
            std::string payload = gravosc::report_json(report);
            if (check_c.format == "json" && check_c.out_path.empty()) std::cout << payload;
            if (!check_c.out_path.empty()) {
                gravosc::write_text_file(check_c.out_path, payload);
                mc.finish(check_c.out_path, false);
            }
            if (report.any_hard_fail()) return kExitInfeasible;
            if (!report.all_strict()) return kExitMarginal;
            return kExitOk;
        }
        if (*scn) {
            auto in = load_input(scan_c);
            ManifestClock mc(scan_c, "scan");
            gravosc::ScanGrid grid;
            for (const auto& s : axis_specs) grid.axes.push_back(parse_axis(s));
            auto rows = gravosc::scan(in.particle, in.config, grid);
            emit(scan_c, scan_c.format == "json" ? gravosc::scan_json(grid, rows)
                                                 : gravosc::scan_csv(grid, rows));
            mc.finish(scan_c.out_path, false);
            return kExitOk;
        }
        if (*events) {
            auto in = load_input(ev_c);
            ManifestClock mc(ev_c, "events");
            if (ev_lmax < 0.0) ev_lmax = in.config.L;
            if (ev_c.format != "csv") throw UsageError("events supports only csv output");
            gravosc::LBins bins{ev_lmin, ev_lmax, n_bins};
            auto rows = gravosc::simulate_events(in.particle, in.config, fraction, n_pairs,
                                                 ev_c.seed, bins);
            emit(ev_c, gravosc::events_csv(rows));
            mc.finish(ev_c.out_path, true);
            return kExitOk;
        }
        if (*pow) {
            auto in = load_input(pow_c);
            ManifestClock mc(pow_c, "power");
            auto est = gravosc::required_events(in.particle, in.config, confidence, pow_c.seed,
                                                gravosc::codata2018(), pow_opt);
            std::string payload = gravosc::power_to_json(est);
            emit(pow_c, payload);
            mc.finish(pow_c.out_path, true);
            if (!est.resolvable) {
                std::cerr << "signal not resolvable: " << est.method << "\n";
                return kExitNotResolvable;
            }
            return kExitOk;
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::length_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitInternal;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
