#pragma once

#include <optional>
#include <string>
#include <vector>

namespace gravosc {

// CODATA 2018. Value type, immutable by convention: every routine takes it
// by const reference and never writes it.
struct Constants {
    double G = 6.67430e-11;         // m^3 kg^-1 s^-2
    double hbar = 1.054571817e-34;  // J s
    double c = 2.99792458e8;        // m/s, exact by definition
};

inline constexpr char kConstantsTag[] = "CODATA-2018";

inline Constants codata2018() { return {}; }
// Test hook: switches the pair coupling off while keeping kinematics.
inline Constants no_gravity() { return Constants{.G = 0.0}; }

// Two-flavour particle: superposition of mass eigenstates m1 < m2 = m1 + dm.
// The gap dm is stored explicitly because dm/m1 can be ~1e-17, far below
// 1 ulp of m1; a stored m2 would silently collapse onto m1.
struct ParticleSpec {
    double m1 = 0.0;     // kg, lighter eigenstate
    double dm = 0.0;     // kg, mass gap m2 - m1
    double theta = 0.0;  // rad, mixing angle in [0, pi/2]

    double m2() const { return m1 + dm; }
};

ParticleSpec particle_from_masses(double m1, double m2, double theta);
ParticleSpec particle_from_gap(double m1, double dm, double theta);

// Geometry and kinematics of one run.
struct ExperimentConfig {
    double d = 0.0;      // m, pair separation; also source/detector size
    double L = 0.0;      // m, baseline
    double gamma = 1.0;  // Lorentz factor
    double M = 0.0;      // kg, background mass (0 = absent)
    double R = 0.0;      // m, distance to the background mass
    std::optional<double> delta;  // m, initial wave-packet spread; optimal if absent
};

struct ValidationIssue {
    std::string field;
    std::string message;
};

// Every violated invariant, empty when the pair is valid. L = 0 and M = 0
// are legal (detector at the source, no background mass).
std::vector<ValidationIssue> validate(const ParticleSpec& p, const ExperimentConfig& c);
std::string describe(const std::vector<ValidationIssue>& issues);

// v = c*sqrt(1 - 1/gamma^2). Strictly increasing, v(1) = 0, v < c always.
double speed_from_gamma(double gamma, const Constants& k = codata2018());

struct ModelInput {
    ParticleSpec particle;
    ExperimentConfig config;
};

// JSON schema: {m1_kg, m2_kg | dm_kg, theta_rad, d_m, L_m, gamma, M_kg, R_m,
// delta_m?}. Exactly one of m2_kg/dm_kg; unknown keys rejected. Values must
// be finite JSON numbers. Throws std::invalid_argument with the full issue
// list. Parsing does not run validate(); callers decide when to.
ModelInput parse_config(const std::string& json_text);
ModelInput load_config(const std::string& path);
std::string config_to_json(const ModelInput& in);
void save_config(const ModelInput& in, const std::string& path);

}  // namespace gravosc
