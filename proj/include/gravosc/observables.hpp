#pragma once

#include <cstdint>
#include <vector>

#include "gravosc/evolution.hpp"
#include "gravosc/model.hpp"

namespace gravosc {

// P = 1 - sin^2(2 theta) sin^2(dm c^2 tau / (2 hbar)): one free particle.
double survival_isolated(const ParticleSpec& p, double tau, const Constants& k = codata2018());

// The closed-form pair-modified survival: the isolated formula with the
// gravitational phase G m1 dm tau/(d hbar) added to the oscillation
// argument. Throws std::domain_error on d = 0.
double survival_shifted(const ParticleSpec& p, double d, double tau,
                        const Constants& k = codata2018());

// |<nu1 nu1|psi>|^2: both partners detected in the original flavour.
double survival_joint(double theta, const TwoParticleAmplitudes& amps);
double survival_joint(const ParticleSpec& p, double d, double tau,
                      const Constants& k = codata2018());

// <nu1| Tr_B(|psi><psi|) |nu1>: one partner detected, the other traced out.
double survival_marginal(double theta, const TwoParticleAmplitudes& amps);
double survival_marginal(const ParticleSpec& p, double d, double tau,
                         const Constants& k = codata2018());

// Lab-frame spatial period of the detection probability: 4 pi hbar gamma/(dm c).
double oscillation_wavelength(const ParticleSpec& p, double gamma,
                              const Constants& k = codata2018());

// Baselines where the gravitational phase hits (n + 1/2) pi, so phased and
// unphased oscillation patterns are maximally distinct.
struct OutOfPhaseBaseline {
    int n;
    double L;           // m
    double grav_phase;  // G m1 dm tau(L)/(d hbar), for round-trip checking
};
std::vector<OutOfPhaseBaseline> out_of_phase_baselines(const ParticleSpec& p,
                                                       const ExperimentConfig& c, int n_max,
                                                       const Constants& k = codata2018());

// Uniform binning of the baseline axis. Explicit rather than the detector
// width d: at the regimes of interest L/d overflows any addressable count.
struct LBins {
    double L_min = 0.0;
    double L_max = 0.0;
    std::size_t count = 0;
};
// Width-d bins over [0, L] when that yields a tractable count.
LBins default_bins(const ExperimentConfig& c, std::size_t max_bins = 1u << 20);

struct EventSample {
    double L_bin = 0.0;  // bin center, m
    std::uint64_t n_pairs_emitted = 0;
    std::uint64_t n_double_hits = 0;
    std::uint64_t n_single_hits = 0;
    std::uint64_t rng_seed = 0;
};

// Per bin: affected pairs (fraction `affected_fraction`) double-hit with
// probability survival_joint; the unaffected rest single-hit with
// probability survival_isolated. Counts come from Philox substream
// (seed, bin index), so results are bit-reproducible in any evaluation
// order. n_double_hits + n_single_hits <= n_pairs_emitted.
std::vector<EventSample> simulate_events(const ParticleSpec& p, const ExperimentConfig& c,
                                         double affected_fraction, std::uint64_t n_pairs,
                                         std::uint64_t seed, const LBins& bins,
                                         const Constants& k = codata2018());

struct CurvePoint {
    double L = 0.0;
    double p_isolated = 0.0;
    double p_shifted = 0.0;
    double p_joint = 0.0;
    double p_marginal = 0.0;
};

// The four survival probabilities on a uniform L grid (points >= 2).
std::vector<CurvePoint> survival_curve(const ParticleSpec& p, const ExperimentConfig& c,
                                       double L_min, double L_max, std::size_t points,
                                       const Constants& k = codata2018());

}  // namespace gravosc
