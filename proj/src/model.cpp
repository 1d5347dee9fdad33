#include "gravosc/model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "nlohmann/json.hpp"

namespace gravosc {

namespace {

constexpr double kHalfPi = 1.5707963267948966;

void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + " must be finite");
}

}  // namespace

ParticleSpec particle_from_masses(double m1, double m2, double theta) {
    require_finite(m1, "m1");
    require_finite(m2, "m2");
    return ParticleSpec{m1, m2 - m1, theta};
}

ParticleSpec particle_from_gap(double m1, double dm, double theta) {
    require_finite(m1, "m1");
    require_finite(dm, "dm");
    return ParticleSpec{m1, dm, theta};
}

std::vector<ValidationIssue> validate(const ParticleSpec& p, const ExperimentConfig& c) {
    std::vector<ValidationIssue> out;
    auto bad = [&out](const char* field, double v, const char* why) {
        std::ostringstream os;
        os << why << " (got " << v << ")";
        out.push_back({field, os.str()});
    };

    if (!(std::isfinite(p.m1) && p.m1 > 0.0)) bad("m1", p.m1, "mass m1 must be finite and > 0");
    if (!(std::isfinite(p.dm) && p.dm > 0.0)) bad("dm", p.dm, "mass gap m2 - m1 must be finite and > 0");
    if (!(std::isfinite(p.theta) && p.theta >= 0.0 && p.theta <= kHalfPi))
        bad("theta", p.theta, "mixing angle must lie in [0, pi/2]");

    if (!(std::isfinite(c.d) && c.d > 0.0)) bad("d", c.d, "separation d must be finite and > 0");
    if (!(std::isfinite(c.L) && c.L >= 0.0)) bad("L", c.L, "baseline L must be finite and >= 0");
    if (!(std::isfinite(c.gamma) && c.gamma >= 1.0)) bad("gamma", c.gamma, "Lorentz factor must be >= 1");
    if (!(std::isfinite(c.M) && c.M >= 0.0)) bad("M", c.M, "background mass M must be finite and >= 0");
    if (!(std::isfinite(c.R) && c.R > 0.0)) bad("R", c.R, "background distance R must be finite and > 0");
    if (c.delta && !(std::isfinite(*c.delta) && *c.delta > 0.0))
        bad("delta", *c.delta, "wave-packet spread must be finite and > 0");

    return out;
}

std::string describe(const std::vector<ValidationIssue>& issues) {
    std::ostringstream os;
    for (const auto& it : issues) os << it.field << ": " << it.message << "\n";
    return os.str();
}

double speed_from_gamma(double gamma, const Constants& k) {
    if (!(std::isfinite(gamma) && gamma >= 1.0))
        throw std::invalid_argument("speed_from_gamma: gamma must be finite and >= 1");
    double inv = 1.0 / gamma;
    // (1 - 1/g)(1 + 1/g) avoids the rounding plateau of 1 - 1/g^2 near g = 1.
    return k.c * std::sqrt((1.0 - inv) * (1.0 + inv));
}

namespace {

using nlohmann::json;

double pull_number(const json& j, const char* key) {
    const auto& v = j.at(key);
    if (!v.is_number()) throw std::invalid_argument(std::string("config key ") + key + " must be a number");
    double x = v.get<double>();
    if (!std::isfinite(x)) throw std::invalid_argument(std::string("config key ") + key + " must be finite");
    return x;
}

}  // namespace

ModelInput parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("config root must be a JSON object");

    static const char* known[] = {"m1_kg", "m2_kg", "dm_kg", "theta_rad", "d_m",
                                  "L_m",   "gamma", "M_kg",  "R_m",       "delta_m"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : known) ok = ok || it.key() == k;
        if (!ok) throw std::invalid_argument("unknown config key: " + it.key());
    }
    for (const char* k : {"m1_kg", "theta_rad", "d_m", "L_m", "gamma", "M_kg", "R_m"}) {
        if (!j.contains(k)) throw std::invalid_argument(std::string("missing config key: ") + k);
    }
    bool has_m2 = j.contains("m2_kg");
    bool has_dm = j.contains("dm_kg");
    if (has_m2 == has_dm)
        throw std::invalid_argument("config needs exactly one of m2_kg or dm_kg");

    ModelInput in;
    double m1 = pull_number(j, "m1_kg");
    double theta = pull_number(j, "theta_rad");
    in.particle = has_dm ? particle_from_gap(m1, pull_number(j, "dm_kg"), theta)
                         : particle_from_masses(m1, pull_number(j, "m2_kg"), theta);
    in.config.d = pull_number(j, "d_m");
    in.config.L = pull_number(j, "L_m");
    in.config.gamma = pull_number(j, "gamma");
    in.config.M = pull_number(j, "M_kg");
    in.config.R = pull_number(j, "R_m");
    if (j.contains("delta_m")) in.config.delta = pull_number(j, "delta_m");
    return in;
}

ModelInput load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open config file: " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_config(buf.str());
}

std::string config_to_json(const ModelInput& in) {
    json j;
    j["m1_kg"] = in.particle.m1;
    j["dm_kg"] = in.particle.dm;  // exact gap; m2_kg could not round-trip it
    j["theta_rad"] = in.particle.theta;
    j["d_m"] = in.config.d;
    j["L_m"] = in.config.L;
    j["gamma"] = in.config.gamma;
    j["M_kg"] = in.config.M;
    j["R_m"] = in.config.R;
    if (in.config.delta) j["delta_m"] = *in.config.delta;
    return j.dump(2) + "\n";
}

void save_config(const ModelInput& in, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot write config file: " + path);
    f << config_to_json(in);
}

}  // namespace gravosc
