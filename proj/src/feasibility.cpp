#include "gravosc/feasibility.hpp"

#include <cmath>
#include <stdexcept>

#include "gravosc/evolution.hpp"
#include "gravosc/observables.hpp"

namespace gravosc {

namespace {

constexpr double kHalfPi = 1.5707963267948966;

ConstraintCheck make_check(const char* name, double lhs, double rhs) {
    ConstraintCheck c;
    c.name = name;
    c.lhs = lhs;
    c.rhs = rhs;
    double ratio = lhs > 0.0 ? rhs / lhs : kMarginCap;
    if (!(ratio < kMarginCap)) ratio = kMarginCap;
    c.margin_ratio = ratio;
    c.pass = lhs < rhs;
    if (ratio >= 10.0)
        c.status = ConstraintStatus::Pass;
    else if (ratio >= 0.1)
        c.status = ConstraintStatus::Marginal;
    else
        c.status = ConstraintStatus::Fail;
    return c;
}

}  // namespace

bool FeasibilityReport::all_strict() const {
    return wavelength.status == ConstraintStatus::Pass &&
           spreading.status == ConstraintStatus::Pass &&
           background.status == ConstraintStatus::Pass && wavelength.pass && spreading.pass &&
           background.pass;
}

bool FeasibilityReport::any_hard_fail() const {
    return wavelength.status == ConstraintStatus::Fail ||
           spreading.status == ConstraintStatus::Fail ||
           background.status == ConstraintStatus::Fail;
}

FeasibilityReport check_constraints(const ParticleSpec& p, const ExperimentConfig& c,
                                    const Constants& k) {
    double tau = proper_time(c, k);
    PhaseBundle b = phase_bundle_at_tau(p, c.d, tau, k);

    FeasibilityReport r;
    r.lambda = oscillation_wavelength(p, c.gamma, k);
    r.free_phase = b.free_phase.to_double();
    r.grav_phase = b.grav_phase.to_double();
    r.entangling_phase = b.entangling_phase.to_double();
    r.optimal_spread = 2.0 * std::sqrt(k.hbar * tau / p.m1);

    double spread = c.delta ? *c.delta + k.hbar * tau / (p.m1 * *c.delta) : r.optimal_spread;
    double bg_rhs = c.M > 0.0 ? p.m1 / c.M : kMarginCap;

    r.wavelength = make_check("wavelength", c.d, r.lambda);
    r.spreading = make_check("spreading", spread, 0.5 * c.d);
    r.background = make_check("background", (c.d / c.R) * (c.d / c.R), bg_rhs);
    r.note = "weak-interaction range (~1e-18 m) is negligible at separation d; not modeled";
    return r;
}

const char* scan_param_name(ScanParam p) {
    switch (p) {
        case ScanParam::M1: return "m1";
        case ScanParam::Dm: return "dm";
        case ScanParam::Theta: return "theta";
        case ScanParam::D: return "d";
        case ScanParam::L: return "L";
        case ScanParam::Gamma: return "gamma";
        case ScanParam::M: return "M";
        case ScanParam::R: return "R";
    }
    return "?";
}

ScanParam scan_param_from_name(const std::string& name) {
    for (ScanParam p : {ScanParam::M1, ScanParam::Dm, ScanParam::Theta, ScanParam::D,
                        ScanParam::L, ScanParam::Gamma, ScanParam::M, ScanParam::R}) {
        if (name == scan_param_name(p)) return p;
    }
    throw std::invalid_argument("unknown scan parameter: " + name);
}

std::size_t ScanGrid::total_points() const {
    double total = axes.empty() ? 0.0 : 1.0;
    for (const auto& a : axes) total *= static_cast<double>(a.points);
    if (total > 1e18) return static_cast<std::size_t>(-1);
    return static_cast<std::size_t>(total);
}

namespace {

void check_axis_domain(const ScanAxis& a) {
    double lo = a.min;
    bool ok = true;
    switch (a.param) {
        case ScanParam::M1:
        case ScanParam::Dm:
        case ScanParam::D:
        case ScanParam::R: ok = lo > 0.0; break;
        case ScanParam::Theta: ok = lo >= 0.0 && a.max <= kHalfPi; break;
        case ScanParam::L:
        case ScanParam::M: ok = lo >= 0.0; break;
        case ScanParam::Gamma: ok = lo >= 1.0; break;
    }
    if (!ok)
        throw std::invalid_argument(std::string("axis range outside validity domain for ") +
                                    scan_param_name(a.param));
}

void apply_param(ScanParam param, double v, ParticleSpec& p, ExperimentConfig& c) {
    switch (param) {
        case ScanParam::M1: p.m1 = v; break;
        case ScanParam::Dm: p.dm = v; break;
        case ScanParam::Theta: p.theta = v; break;
        case ScanParam::D: c.d = v; break;
        case ScanParam::L: c.L = v; break;
        case ScanParam::Gamma: c.gamma = v; break;
        case ScanParam::M: c.M = v; break;
        case ScanParam::R: c.R = v; break;
    }
}

double axis_value(const ScanAxis& a, std::size_t i) {
    double f = static_cast<double>(i) / static_cast<double>(a.points - 1);
    if (a.log_spacing) return std::exp(std::log(a.min) + (std::log(a.max) - std::log(a.min)) * f);
    return a.min + (a.max - a.min) * f;
}

}  // namespace

std::vector<ScanRow> scan(const ParticleSpec& p, const ExperimentConfig& c, const ScanGrid& grid,
                          const Constants& k) {
    if (grid.axes.empty() || grid.axes.size() > 4)
        throw std::invalid_argument("scan grid needs 1 to 4 axes");
    for (const auto& a : grid.axes) {
        if (a.points < 2) throw std::invalid_argument("each scan axis needs at least 2 points");
        if (!(std::isfinite(a.min) && std::isfinite(a.max) && a.min < a.max))
            throw std::invalid_argument("scan axis needs finite min < max");
        if (a.log_spacing && !(a.min > 0.0))
            throw std::invalid_argument("log-spaced axis needs min > 0");
        check_axis_domain(a);
    }
    std::size_t total = grid.total_points();
    if (total > 100000000ull)
        throw std::length_error("scan grid exceeds the 1e8-point budget");

    std::vector<ScanRow> rows;
    rows.reserve(total);
    std::vector<std::size_t> idx(grid.axes.size(), 0);
    for (std::size_t flat = 0; flat < total; ++flat) {
        ParticleSpec pp = p;
        ExperimentConfig cc = c;
        ScanRow row;
        row.values.resize(grid.axes.size());
        for (std::size_t a = 0; a < grid.axes.size(); ++a) {
            double v = axis_value(grid.axes[a], idx[a]);
            row.values[a] = v;
            apply_param(grid.axes[a].param, v, pp, cc);
        }
        row.report = check_constraints(pp, cc, k);
        rows.push_back(std::move(row));

        // odometer, last axis fastest
        for (std::size_t a = grid.axes.size(); a-- > 0;) {
            if (++idx[a] < grid.axes[a].points) break;
            idx[a] = 0;
        }
    }
    return rows;
}

}  // namespace gravosc
