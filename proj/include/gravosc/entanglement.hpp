#pragma once

#include <array>
#include <complex>
#include <vector>

#include "gravosc/evolution.hpp"
#include "gravosc/model.hpp"

namespace gravosc {

// Density operator of particle A in the mass basis (rho10 = conj(rho01)).
struct ReducedState {
    std::complex<double> rho00, rho01, rho11;
};

// Partial trace over particle B. Renormalizes by the input norm; throws
// std::invalid_argument when the norm deviates from 1 by more than 1e-6.
ReducedState reduce(const TwoParticleAmplitudes& amps);

// C = 2|a11 a22 - a12 a21|, in [0, 1]. Zero iff the pure state is a product.
double concurrence(const TwoParticleAmplitudes& amps);

// Magnitude sum of the negative eigenvalues of the partial transpose of
// |psi><psi|; equals C/2 for pure two-qubit states. In [0, 1/2].
double negativity(const TwoParticleAmplitudes& amps);

// Von Neumann entropy of reduce(amps) in bits. Eigenvalues in [-1e-12, 0)
// are clipped to zero; anything lower reports a broken state.
double entanglement_entropy(const TwoParticleAmplitudes& amps);

struct EntanglementPoint {
    double tau = 0.0;
    double L = 0.0;
    double concurrence = 0.0;
    double negativity = 0.0;
    double entropy_bits = 0.0;
    double phi_E_reduced = 0.0;  // entangling phase mod 2 pi
};

// Measures of the evolved pair on a uniform tau grid (points >= 2);
// L = tau * gamma * v is carried along for plotting against distance.
std::vector<EntanglementPoint> entanglement_trace(const ParticleSpec& p,
                                                  const ExperimentConfig& c, double tau_min,
                                                  double tau_max, std::size_t points,
                                                  const Constants& k = codata2018());

}  // namespace gravosc
