#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "gravosc/model.hpp"

namespace gravosc {

// Pass: comfortably satisfied (margin >= 10). Marginal: within a factor of
// 10 of the boundary on either side. Fail: short by more than 10x.
enum class ConstraintStatus { Pass, Marginal, Fail };

struct ConstraintCheck {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin_ratio = 0.0;  // rhs/lhs; > 1 means the inequality holds
    bool pass = false;          // strict lhs < rhs
    ConstraintStatus status = ConstraintStatus::Fail;
};

// Infinite margins (e.g. no background mass) are capped here.
inline constexpr double kMarginCap = 1e300;

struct FeasibilityReport {
    ConstraintCheck wavelength;  // d < lambda
    ConstraintCheck spreading;   // wave-packet spread < d/2
    ConstraintCheck background;  // d^2/R^2 < m1/M
    double lambda = 0.0;         // m
    double free_phase = 0.0;     // rad, unreduced
    double grav_phase = 0.0;     // rad, unreduced
    double entangling_phase = 0.0;  // rad, unreduced
    double optimal_spread = 0.0;    // m, 2 sqrt(hbar tau / m1)
    std::string note;

    bool all_strict() const;
    bool any_hard_fail() const;
};

// Evaluates the three detectability constraints with numeric margins.
// The spreading check uses the explicit spread delta + hbar tau/(m1 delta)
// when config.delta is set, the optimum 2 sqrt(hbar tau/m1) otherwise.
FeasibilityReport check_constraints(const ParticleSpec& p, const ExperimentConfig& c,
                                    const Constants& k = codata2018());

enum class ScanParam { M1, Dm, Theta, D, L, Gamma, M, R };

const char* scan_param_name(ScanParam p);
// Accepts the names m1, dm, theta, d, L, gamma, M, R. Throws on others.
ScanParam scan_param_from_name(const std::string& name);

struct ScanAxis {
    ScanParam param = ScanParam::M1;
    double min = 0.0;
    double max = 0.0;
    std::size_t points = 0;
    bool log_spacing = false;
};

struct ScanGrid {
    std::vector<ScanAxis> axes;
    std::size_t total_points() const;
};

struct ScanRow {
    std::vector<double> values;  // one per axis, in axis order
    FeasibilityReport report;
};

// Row-major sweep (last axis fastest) over 1-4 axes, each point evaluated
// by check_constraints on a copy of the templates. Deterministic ordering
// and values. Throws std::invalid_argument for a malformed grid and
// std::length_error when the grid exceeds 1e8 points.
std::vector<ScanRow> scan(const ParticleSpec& p, const ExperimentConfig& c, const ScanGrid& grid,
                          const Constants& k = codata2018());

}  // namespace gravosc
