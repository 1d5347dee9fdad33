#pragma once

#include <cstdint>
#include <string>

#include "gravosc/model.hpp"

namespace gravosc {

struct PowerOptions {
    int trials = 200;
    double power_target = 0.9;
    std::uint64_t n_cap = 1ull << 30;  // search ceiling per arm
};

struct PowerEstimate {
    bool resolvable = false;
    std::uint64_t n_required = 0;      // pairs per arm; 0 when not resolvable
    double confidence = 0.0;
    double phase_resolution = 0.0;     // rad, reduced gravitational phase being resolved
    double power = 0.0;                // achieved power at n_required
    int trials = 0;
    std::string method;
};

// Smallest n (power-of-two bracket, then bisection) such that a pooled
// two-proportion z test at the given confidence separates Binomial(n, p_signal)
// from Binomial(n, p_control) in >= power_target of `trials` seeded trials.
// Deterministic per (inputs, seed). Monte-Carlo noise makes the result the
// approximate minimum, reproducible bit-for-bit for a fixed seed.
PowerEstimate required_events_for_rates(double p_signal, double p_control, double confidence,
                                        std::uint64_t seed, const PowerOptions& opt = {});

// Frames the experiment as a rate contrast at the first out-of-phase
// baseline L0: signal arm = double-hit rate survival_joint(tau(L0)),
// control arm = single-hit rate survival_isolated(tau(L0)). Returns the
// not-resolvable marker when the reduced gravitational phase at the
// configured baseline is within 1e-6 rad of zero (circularly).
PowerEstimate required_events(const ParticleSpec& p, const ExperimentConfig& c, double confidence,
                              std::uint64_t seed, const Constants& k = codata2018(),
                              const PowerOptions& opt = {});

std::string power_to_json(const PowerEstimate& e);

}  // namespace gravosc
