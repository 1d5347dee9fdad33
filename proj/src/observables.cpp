#include "gravosc/observables.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gravosc/rng.hpp"

namespace gravosc {

namespace {

constexpr double kPi = 3.141592653589793;

double clamp_probability(double p) { return std::clamp(p, 0.0, 1.0); }

double survival_from_arg(double theta, double reduced_arg) {
    double s2t = std::sin(2.0 * theta);
    double s = std::sin(reduced_arg);
    return clamp_probability(1.0 - s2t * s2t * s * s);
}

}  // namespace

double survival_isolated(const ParticleSpec& p, double tau, const Constants& k) {
    if (!(std::isfinite(tau) && tau >= 0.0))
        throw std::invalid_argument("tau must be finite and >= 0");
    PrecisePhase arg = PrecisePhase::product({p.dm, k.c, k.c, tau}).times(0.5).divided_by(k.hbar);
    return survival_from_arg(p.theta, reduce_mod_2pi(arg));
}

double survival_shifted(const ParticleSpec& p, double d, double tau, const Constants& k) {
    PhaseBundle b = phase_bundle_at_tau(p, d, tau, k);
    return survival_from_arg(p.theta, reduce_mod_2pi(b.free_phase + b.grav_phase));
}

double survival_joint(double theta, const TwoParticleAmplitudes& amps) {
    double c1 = std::cos(theta);
    double c2 = std::sin(theta);
    std::complex<double> s = c1 * c1 * amps.a11 + c1 * c2 * (amps.a12 + amps.a21) +
                             c2 * c2 * amps.a22;
    return clamp_probability(std::norm(s));
}

double survival_joint(const ParticleSpec& p, double d, double tau, const Constants& k) {
    return survival_joint(p.theta, two_particle_amplitudes(p, d, tau, k));
}

double survival_marginal(double theta, const TwoParticleAmplitudes& amps) {
    // rho_A = Tr_B |psi><psi| contracted against |nu1> = (cos, sin).
    double c1 = std::cos(theta);
    double c2 = std::sin(theta);
    double rho00 = std::norm(amps.a11) + std::norm(amps.a12);
    double rho11 = std::norm(amps.a21) + std::norm(amps.a22);
    std::complex<double> rho01 = amps.a11 * std::conj(amps.a21) + amps.a12 * std::conj(amps.a22);
    return clamp_probability(c1 * c1 * rho00 + 2.0 * c1 * c2 * rho01.real() + c2 * c2 * rho11);
}

double survival_marginal(const ParticleSpec& p, double d, double tau, const Constants& k) {
    return survival_marginal(p.theta, two_particle_amplitudes(p, d, tau, k));
}

double oscillation_wavelength(const ParticleSpec& p, double gamma, const Constants& k) {
    if (!(std::isfinite(gamma) && gamma >= 1.0))
        throw std::invalid_argument("gamma must be >= 1");
    if (!(p.dm > 0.0)) throw std::invalid_argument("mass gap must be > 0");
    return 4.0 * kPi * k.hbar * gamma / (p.dm * k.c);
}

std::vector<OutOfPhaseBaseline> out_of_phase_baselines(const ParticleSpec& p,
                                                       const ExperimentConfig& c, int n_max,
                                                       const Constants& k) {
    if (n_max < 0) throw std::invalid_argument("n_max must be >= 0");
    double denom = k.G * p.m1 * p.dm;
    if (!(denom > 0.0))
        throw std::invalid_argument("out-of-phase baselines need G, m1, dm all > 0");
    double v = speed_from_gamma(c.gamma, k);
    double unit = kPi * c.d * k.hbar * c.gamma * v / denom;  // L where Phi_G = pi
    std::vector<OutOfPhaseBaseline> out;
    out.reserve(static_cast<std::size_t>(n_max) + 1);
    for (int n = 0; n <= n_max; ++n) {
        double L = (n + 0.5) * unit;
        double tau = L / (c.gamma * v);
        PhaseBundle b = phase_bundle_at_tau(p, c.d, tau, k);
        out.push_back({n, L, b.grav_phase.to_double()});
    }
    return out;
}

LBins default_bins(const ExperimentConfig& c, std::size_t max_bins) {
    if (!(c.d > 0.0 && c.L > 0.0)) throw std::invalid_argument("default bins need d > 0, L > 0");
    double n = std::ceil(c.L / c.d);
    if (!(n <= static_cast<double>(max_bins)))
        throw std::length_error("width-d binning would need an intractable bin count; pass explicit bins");
    return {0.0, c.L, static_cast<std::size_t>(n)};
}

std::vector<EventSample> simulate_events(const ParticleSpec& p, const ExperimentConfig& c,
                                         double affected_fraction, std::uint64_t n_pairs,
                                         std::uint64_t seed, const LBins& bins,
                                         const Constants& k) {
    if (!(affected_fraction >= 0.0 && affected_fraction <= 1.0))
        throw std::invalid_argument("affected_fraction must lie in [0, 1]");
    if (n_pairs == 0) throw std::invalid_argument("n_pairs must be >= 1");
    if (bins.count == 0) throw std::invalid_argument("bin count must be >= 1");
    if (!(std::isfinite(bins.L_min) && std::isfinite(bins.L_max) && bins.L_min < bins.L_max))
        throw std::invalid_argument("bin range must satisfy L_min < L_max");

    double v = speed_from_gamma(c.gamma, k);
    if (v == 0.0) throw std::invalid_argument("simulate_events: gamma must exceed 1");
    double width = (bins.L_max - bins.L_min) / static_cast<double>(bins.count);

    std::vector<EventSample> out(bins.count);
    for (std::size_t i = 0; i < bins.count; ++i) {
        double L = bins.L_min + (static_cast<double>(i) + 0.5) * width;
        double tau = L / (c.gamma * v);
        double p_double = survival_joint(p, c.d, tau, k);
        double p_single = survival_isolated(p, tau, k);

        CounterRng rng(seed, static_cast<std::uint64_t>(i));
        std::uint64_t n_affected = binomial_draw(n_pairs, affected_fraction, rng);
        std::uint64_t n_double = binomial_draw(n_affected, p_double, rng);
        std::uint64_t n_single = binomial_draw(n_pairs - n_affected, p_single, rng);
        out[i] = {L, n_pairs, n_double, n_single, seed};
    }
    return out;
}

std::vector<CurvePoint> survival_curve(const ParticleSpec& p, const ExperimentConfig& c,
                                       double L_min, double L_max, std::size_t points,
                                       const Constants& k) {
    if (points < 2) throw std::invalid_argument("curve needs at least 2 points");
    if (!(std::isfinite(L_min) && std::isfinite(L_max) && L_min <= L_max))
        throw std::invalid_argument("curve range must satisfy L_min <= L_max");
    double v = speed_from_gamma(c.gamma, k);
    if (v == 0.0) throw std::invalid_argument("survival_curve: gamma must exceed 1");

    std::vector<CurvePoint> out(points);
    for (std::size_t i = 0; i < points; ++i) {
        double frac = static_cast<double>(i) / static_cast<double>(points - 1);
        double L = L_min + (L_max - L_min) * frac;
        double tau = L / (c.gamma * v);
        TwoParticleAmplitudes amps = two_particle_amplitudes(p, c.d, tau, k);
        out[i] = {L, survival_isolated(p, tau, k), survival_shifted(p, c.d, tau, k),
                  survival_joint(p.theta, amps), survival_marginal(p.theta, amps)};
    }
    return out;
}

}  // namespace gravosc
