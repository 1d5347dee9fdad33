#pragma once

#include <array>
#include <complex>

#include "gravosc/model.hpp"
#include "gravosc/phase_kernel.hpp"

namespace gravosc {

// Rest-frame flight duration tau = L/(gamma*v). Zero baseline gives zero.
// Throws std::invalid_argument when L > 0 but gamma = 1 (the pair never
// reaches the detector).
double proper_time(const ExperimentConfig& c, const Constants& k = codata2018());

// Flavour-basis-free amplitudes over {|m1>, |m2>} after proper time tau,
// with the global m1-branch phase factored out: (cos(theta), sin(theta)*
// e^{-i dm c^2 tau/hbar}).
std::array<std::complex<double>, 2> single_particle_state(const ParticleSpec& p, double tau,
                                                          const Constants& k = codata2018());

// Pair state amplitudes a_ij = c_i c_j alpha_ij in the mass x mass basis,
// divided through by alpha_11 so that stored phases are the two relative
// phases below. a12 == a21 by construction.
struct TwoParticleAmplitudes {
    std::complex<double> a11, a12, a21, a22;
    double norm_sq() const;
};

// delta12 = phase(alpha_12) - phase(alpha_11) = (dm c^2 + G m1 dm/d) tau/hbar
// delta22 = phase(alpha_22) - phase(alpha_11)
//         = (2 dm c^2 + G(2 m1 + dm) dm/d) tau/hbar
// delta22 - 2*delta12 equals the entangling phase G dm^2 tau/(d hbar) to
// ~1e-100 relative (limited only by extended-precision division).
struct PairPhases {
    PrecisePhase delta12;
    PrecisePhase delta22;
};
PairPhases pair_relative_phases(const ParticleSpec& p, double d, double tau,
                                const Constants& k = codata2018());

TwoParticleAmplitudes two_particle_amplitudes(const ParticleSpec& p, double d, double tau,
                                              const Constants& k = codata2018());

// The three accumulated phases every observable is built from.
struct PhaseBundle {
    PrecisePhase free_phase;        // dm c^2 tau / (2 hbar)
    PrecisePhase grav_phase;        // G m1 dm tau / (d hbar)
    PrecisePhase entangling_phase;  // G dm^2 tau / (d hbar)
    double tau = 0.0;
};

// Throws std::domain_error on d = 0 (singular separation).
PhaseBundle phase_bundle_at_tau(const ParticleSpec& p, double d, double tau,
                                const Constants& k = codata2018());
PhaseBundle phase_bundle(const ParticleSpec& p, const ExperimentConfig& c,
                         const Constants& k = codata2018());

}  // namespace gravosc
