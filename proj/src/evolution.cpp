#include "gravosc/evolution.hpp"

#include <cmath>
#include <stdexcept>

namespace gravosc {

namespace {

void check_tau(double tau) {
    if (!(std::isfinite(tau) && tau >= 0.0))
        throw std::invalid_argument("tau must be finite and >= 0");
}

void check_separation(double d) {
    if (d == 0.0) throw std::domain_error("singular separation: d must be nonzero");
    if (!(std::isfinite(d) && d > 0.0))
        throw std::invalid_argument("separation d must be finite and > 0");
}

}  // namespace

double proper_time(const ExperimentConfig& c, const Constants& k) {
    if (c.L == 0.0) return 0.0;
    double v = speed_from_gamma(c.gamma, k);
    if (v == 0.0) throw std::invalid_argument("proper_time: gamma must exceed 1 when L > 0");
    return c.L / (c.gamma * v);
}

std::array<std::complex<double>, 2> single_particle_state(const ParticleSpec& p, double tau,
                                                          const Constants& k) {
    check_tau(tau);
    PrecisePhase rel = PrecisePhase::product({p.dm, k.c, k.c, tau}).divided_by(k.hbar);
    double phi = reduce_mod_2pi(rel);
    return {std::complex<double>(std::cos(p.theta), 0.0),
            std::sin(p.theta) * std::polar(1.0, -phi)};
}

double TwoParticleAmplitudes::norm_sq() const {
    return std::norm(a11) + std::norm(a12) + std::norm(a21) + std::norm(a22);
}

PairPhases pair_relative_phases(const ParticleSpec& p, double d, double tau, const Constants& k) {
    check_separation(d);
    check_tau(tau);
    PrecisePhase kin = PrecisePhase::product({p.dm, k.c, k.c, tau}).divided_by(k.hbar);
    PrecisePhase pot = PrecisePhase::product({k.G, p.m1, p.dm, tau}).divided_by(d).divided_by(k.hbar);
    PrecisePhase self = PrecisePhase::product({k.G, p.dm, p.dm, tau}).divided_by(d).divided_by(k.hbar);
    PairPhases out;
    out.delta12 = kin + pot;
    out.delta22 = kin.times(2.0) + pot.times(2.0) + self;
    return out;
}

TwoParticleAmplitudes two_particle_amplitudes(const ParticleSpec& p, double d, double tau,
                                              const Constants& k) {
    PairPhases ph = pair_relative_phases(p, d, tau, k);
    double c1 = std::cos(p.theta);
    double c2 = std::sin(p.theta);
    std::complex<double> off = c1 * c2 * std::polar(1.0, -reduce_mod_2pi(ph.delta12));
    TwoParticleAmplitudes a;
    a.a11 = {c1 * c1, 0.0};
    a.a12 = off;
    a.a21 = off;
    a.a22 = c2 * c2 * std::polar(1.0, -reduce_mod_2pi(ph.delta22));
    return a;
}

PhaseBundle phase_bundle_at_tau(const ParticleSpec& p, double d, double tau, const Constants& k) {
    check_separation(d);
    check_tau(tau);
    PhaseBundle b;
    b.tau = tau;
    b.free_phase = PrecisePhase::product({p.dm, k.c, k.c, tau}).times(0.5).divided_by(k.hbar);
    b.grav_phase = PrecisePhase::product({k.G, p.m1, p.dm, tau}).divided_by(d).divided_by(k.hbar);
    b.entangling_phase =
        PrecisePhase::product({k.G, p.dm, p.dm, tau}).divided_by(d).divided_by(k.hbar);
    return b;
}

PhaseBundle phase_bundle(const ParticleSpec& p, const ExperimentConfig& c, const Constants& k) {
    return phase_bundle_at_tau(p, c.d, proper_time(c, k), k);
}

}  // namespace gravosc
