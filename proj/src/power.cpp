#include "gravosc/power.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nlohmann/json.hpp"

#include "gravosc/evolution.hpp"
#include "gravosc/observables.hpp"
#include "gravosc/phase_kernel.hpp"
#include "gravosc/rng.hpp"

namespace gravosc {

namespace {

double trial_power(double p1, double p0, double z_crit, std::uint64_t n, std::uint64_t seed,
                   int trials) {
    int rejected = 0;
    double nd = static_cast<double>(n);
    for (int t = 0; t < trials; ++t) {
        CounterRng rng(seed, static_cast<std::uint64_t>(t));
        double x1 = static_cast<double>(binomial_draw(n, p1, rng));
        double x0 = static_cast<double>(binomial_draw(n, p0, rng));
        double pooled = (x1 + x0) / (2.0 * nd);
        double var = pooled * (1.0 - pooled) * 2.0 / nd;
        if (var <= 0.0) continue;  // both arms all-0 or all-n: indistinguishable
        double z = (x1 - x0) / (nd * std::sqrt(var));
        if (std::abs(z) > z_crit) ++rejected;
    }
    return static_cast<double>(rejected) / static_cast<double>(trials);
}

}  // namespace

PowerEstimate required_events_for_rates(double p_signal, double p_control, double confidence,
                                        std::uint64_t seed, const PowerOptions& opt) {
    if (!(confidence > 0.0 && confidence < 1.0))
        throw std::invalid_argument("confidence must lie in (0, 1)");
    if (!(p_signal >= 0.0 && p_signal <= 1.0 && p_control >= 0.0 && p_control <= 1.0))
        throw std::invalid_argument("rates must lie in [0, 1]");
    if (opt.trials < 1 || !(opt.power_target > 0.0 && opt.power_target < 1.0))
        throw std::invalid_argument("bad power options");

    PowerEstimate est;
    est.confidence = confidence;
    est.trials = opt.trials;
    est.method = "two-proportion-z-mc";

    double gap = std::abs(p_signal - p_control);
    if (gap < 1e-12) {
        est.method = "identical-rates";
        return est;
    }

    double z_crit = normal_quantile(1.0 - (1.0 - confidence) / 2.0);
    double z_power = normal_quantile(opt.power_target);
    double pbar = 0.5 * (p_signal + p_control);
    double var_pooled = 2.0 * pbar * (1.0 - pbar);
    double var_split = p_signal * (1.0 - p_signal) + p_control * (1.0 - p_control);
    double analytic =
        std::pow(z_crit * std::sqrt(var_pooled) + z_power * std::sqrt(var_split), 2) / (gap * gap);

    auto power_at = [&](std::uint64_t n) {
        return trial_power(p_signal, p_control, z_crit, n, seed, opt.trials);
    };

    // Bracket upward from a quarter of the analytic estimate.
    std::uint64_t n = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(analytic / 4.0));
    while (n <= opt.n_cap && power_at(n) < opt.power_target) n *= 2;
    if (n > opt.n_cap) {
        est.method = "exceeds-search-cap";
        return est;
    }

    std::uint64_t lo = n / 2;  // power(lo) < target (or lo = 0)
    std::uint64_t hi = n;
    while (lo + 1 < hi) {
        std::uint64_t mid = lo + (hi - lo) / 2;
        if (power_at(mid) >= opt.power_target)
            hi = mid;
        else
            lo = mid;
    }

    est.resolvable = true;
    est.n_required = hi;
    est.power = power_at(hi);
    return est;
}

PowerEstimate required_events(const ParticleSpec& p, const ExperimentConfig& c, double confidence,
                              std::uint64_t seed, const Constants& k, const PowerOptions& opt) {
    PhaseBundle at_config = phase_bundle(p, c, k);
    double r = reduce_mod_2pi(at_config.grav_phase);
    double from_zero = std::min(r, 6.283185307179586 - r);
    if (from_zero <= 1e-6) {
        PowerEstimate est;
        est.confidence = confidence;
        est.trials = opt.trials;
        est.phase_resolution = from_zero;
        est.method = "phase-below-resolution";
        return est;
    }

    auto baselines = out_of_phase_baselines(p, c, 0, k);
    double v = speed_from_gamma(c.gamma, k);
    double tau0 = baselines[0].L / (c.gamma * v);
    double p_signal = survival_joint(p, c.d, tau0, k);
    double p_control = survival_isolated(p, tau0, k);

    PowerEstimate est = required_events_for_rates(p_signal, p_control, confidence, seed, opt);
    double r0 = reduce_mod_2pi(PrecisePhase(baselines[0].grav_phase));
    est.phase_resolution = std::min(r0, 6.283185307179586 - r0);
    return est;
}

std::string power_to_json(const PowerEstimate& e) {
    nlohmann::json j;
    j["resolvable"] = e.resolvable;
    j["n_required"] = e.n_required;
    j["confidence"] = e.confidence;
    j["phase_resolution_rad"] = e.phase_resolution;
    j["trials"] = e.trials;
    j["power"] = e.power;
    j["method"] = e.method;
    return j.dump(2) + "\n";
}

}  // namespace gravosc
