#include "gravosc/entanglement.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace gravosc {

namespace {

double checked_norm(const TwoParticleAmplitudes& amps) {
    double n = amps.norm_sq();
    if (std::abs(n - 1.0) > 1e-6)
        throw std::invalid_argument("pair state is not normalized");
    return n;
}

}  // namespace

ReducedState reduce(const TwoParticleAmplitudes& a) {
    double n = checked_norm(a);
    ReducedState r;
    r.rho00 = (std::norm(a.a11) + std::norm(a.a12)) / n;
    r.rho11 = (std::norm(a.a21) + std::norm(a.a22)) / n;
    r.rho01 = (a.a11 * std::conj(a.a21) + a.a12 * std::conj(a.a22)) / n;
    return r;
}

double concurrence(const TwoParticleAmplitudes& a) {
    double n = checked_norm(a);
    double c = 2.0 * std::abs(a.a11 * a.a22 - a.a12 * a.a21) / n;
    return std::min(c, 1.0);
}

double negativity(const TwoParticleAmplitudes& a) {
    double n = std::sqrt(checked_norm(a));
    Eigen::Vector4cd psi;
    psi << a.a11 / n, a.a12 / n, a.a21 / n, a.a22 / n;
    Eigen::Matrix4cd rho = psi * psi.adjoint();

    // Partial transpose on particle B: swap the column index of B,
    // (ia),(jb) -> (ib),(ja) with composite index 2i + a.
    Eigen::Matrix4cd pt;
    for (int i = 0; i < 2; ++i)
        for (int aB = 0; aB < 2; ++aB)
            for (int j = 0; j < 2; ++j)
                for (int bB = 0; bB < 2; ++bB)
                    pt(2 * i + aB, 2 * j + bB) = rho(2 * i + bB, 2 * j + aB);

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(pt, Eigen::EigenvaluesOnly);
    double neg = 0.0;
    for (int ii = 0; ii < 4; ++ii) {
        double lam = es.eigenvalues()(ii);
        if (lam < 0.0) neg -= lam;
    }
    return neg;
}

double entanglement_entropy(const TwoParticleAmplitudes& a) {
    ReducedState r = reduce(a);
    Eigen::Matrix2cd rho;
    rho << r.rho00, r.rho01, std::conj(r.rho01), r.rho11;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(rho, Eigen::EigenvaluesOnly);
    double h = 0.0;
    for (int i = 0; i < 2; ++i) {
        double lam = es.eigenvalues()(i);
        if (lam < -1e-12)
            throw std::invalid_argument("reduced state has a significantly negative eigenvalue");
        if (lam <= 0.0) continue;
        h -= lam * std::log2(lam);
    }
    return std::max(h, 0.0);
}

std::vector<EntanglementPoint> entanglement_trace(const ParticleSpec& p,
                                                  const ExperimentConfig& c, double tau_min,
                                                  double tau_max, std::size_t points,
                                                  const Constants& k) {
    if (points < 2) throw std::invalid_argument("trace needs at least 2 points");
    if (!(std::isfinite(tau_min) && std::isfinite(tau_max) && 0.0 <= tau_min && tau_min <= tau_max))
        throw std::invalid_argument("trace range must satisfy 0 <= tau_min <= tau_max");
    double v = speed_from_gamma(c.gamma, k);

    std::vector<EntanglementPoint> out(points);
    for (std::size_t i = 0; i < points; ++i) {
        double frac = static_cast<double>(i) / static_cast<double>(points - 1);
        double tau = tau_min + (tau_max - tau_min) * frac;
        TwoParticleAmplitudes amps = two_particle_amplitudes(p, c.d, tau, k);
        PhaseBundle b = phase_bundle_at_tau(p, c.d, tau, k);
        out[i] = {tau,
                  tau * c.gamma * v,
                  concurrence(amps),
                  negativity(amps),
                  entanglement_entropy(amps),
                  reduce_mod_2pi(b.entangling_phase)};
    }
    return out;
}

}  // namespace gravosc
