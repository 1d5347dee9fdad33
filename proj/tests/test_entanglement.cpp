#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

#include "doctest.h"
#include "gravosc/entanglement.hpp"
#include "gravosc/evolution.hpp"
#include "gravosc/phase_kernel.hpp"

using namespace gravosc;

namespace {

constexpr double kPi = 3.141592653589793;

TwoParticleAmplitudes bell() {
    TwoParticleAmplitudes a;
    a.a11 = 1.0 / std::sqrt(2.0);
    a.a12 = a.a21 = 0.0;
    a.a22 = 1.0 / std::sqrt(2.0);
    return a;
}

TwoParticleAmplitudes random_state(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> un(-1.0, 1.0);
    std::complex<double> raw[4];
    double norm = 0.0;
    for (auto& z : raw) {
        z = {un(rng), un(rng)};
        norm += std::norm(z);
    }
    TwoParticleAmplitudes a;
    a.a11 = raw[0] / std::sqrt(norm);
    a.a12 = raw[1] / std::sqrt(norm);
    a.a21 = raw[2] / std::sqrt(norm);
    a.a22 = raw[3] / std::sqrt(norm);
    return a;
}

// A pair that reaches order-unity entangling phase in laboratory times.
ParticleSpec heavy_pair(double theta = kPi / 4) { return particle_from_gap(1.0, 1e-17, theta); }

}  // namespace

TEST_CASE("reduce: partial trace structure") {
    SUBCASE("product state is rank one") {
        auto amps = two_particle_amplitudes(heavy_pair(0.3), 1e-15, 1e-4, no_gravity());
        ReducedState rho = reduce(amps);
        double p00 = rho.rho00.real(), p11 = rho.rho11.real();
        CHECK(p00 + p11 == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::fabs(rho.rho00.imag()) <= 1e-12);
        // Smaller eigenvalue of [[rho00, rho01], [conj, rho11]].
        double mid = 0.5 * (p00 + p11);
        double disc = std::sqrt(0.25 * (p00 - p11) * (p00 - p11) + std::norm(rho.rho01));
        CHECK(mid - disc <= 1e-12);
        CHECK(mid - disc >= -1e-12);
    }
    SUBCASE("Bell state is maximally mixed") {
        ReducedState rho = reduce(bell());
        CHECK(rho.rho00.real() == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(rho.rho11.real() == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(std::abs(rho.rho01) <= 1e-14);
    }
    SUBCASE("dense contraction oracle on random states") {
        std::mt19937_64 rng(0x5eed0030);
        for (int i = 0; i < 500; ++i) {
            auto a = random_state(rng);
            ReducedState rho = reduce(a);

            Eigen::Vector4cd psi(a.a11, a.a12, a.a21, a.a22);
            Eigen::Matrix4cd full = psi * psi.adjoint();
            Eigen::Matrix2cd want = Eigen::Matrix2cd::Zero();
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 2; ++c)
                    for (int b = 0; b < 2; ++b) want(r, c) += full(2 * r + b, 2 * c + b);

            CHECK(std::abs(rho.rho00 - want(0, 0)) <= 1e-12);
            CHECK(std::abs(rho.rho11 - want(1, 1)) <= 1e-12);
            CHECK(std::abs(rho.rho01 - want(0, 1)) <= 1e-12);

            // ReducedState invariants: trace one, eigenvalues in [0, 1].
            double p00 = rho.rho00.real(), p11 = rho.rho11.real();
            CHECK(p00 + p11 == doctest::Approx(1.0).epsilon(1e-12));
            double mid = 0.5 * (p00 + p11);
            double disc = std::sqrt(0.25 * (p00 - p11) * (p00 - p11) + std::norm(rho.rho01));
            CHECK(mid - disc >= -1e-12);
            CHECK(mid + disc <= 1.0 + 1e-12);
        }
    }
    SUBCASE("non-normalized input is rejected") {
        auto a = bell();
        a.a11 *= 1.1;
        CHECK_THROWS_AS(reduce(a), std::invalid_argument);
        CHECK_THROWS_AS(concurrence(a), std::invalid_argument);
        CHECK_THROWS_AS(negativity(a), std::invalid_argument);
        CHECK_THROWS_AS(entanglement_entropy(a), std::invalid_argument);
    }
}

TEST_CASE("concurrence closed form") {
    CHECK(concurrence(bell()) == doctest::Approx(1.0).epsilon(1e-14));

    SUBCASE("product states carry none") {
        auto amps = two_particle_amplitudes(heavy_pair(0.4), 1e-15, 3e-4, no_gravity());
        CHECK(concurrence(amps) <= 1e-12);
    }
    SUBCASE("evolved pair matches sin^2(2 theta) |sin(phi_E/2)| over 1e4 draws") {
        std::mt19937_64 rng(0x5eed0031);
        std::uniform_real_distribution<double> uth(0.0, kPi / 2);
        std::uniform_real_distribution<double> um(-6.0, 0.0);
        std::uniform_real_distribution<double> ug(-12.0, -1.0);
        std::uniform_real_distribution<double> ud(-16.0, -10.0);
        std::uniform_real_distribution<double> uscale(-2.0, 2.0);

        for (int i = 0; i < 10000; ++i) {
            double theta = uth(rng);
            double m1 = std::pow(10.0, um(rng));
            ParticleSpec p = particle_from_gap(m1, m1 * std::pow(10.0, ug(rng)), theta);
            double d = std::pow(10.0, ud(rng));
            Constants k = codata2018();
            // Centre tau near the first concurrence maximum, then spread it
            // over four decades so phi_E spans tiny to many turns.
            double tau_star = kPi * d * k.hbar / (k.G * p.dm * p.dm);
            double tau = tau_star * std::pow(10.0, uscale(rng));

            auto amps = two_particle_amplitudes(p, d, tau);
            auto bundle = phase_bundle_at_tau(p, d, tau);
            double phi_e = reduce_mod_2pi(bundle.entangling_phase);
            double s2t = std::sin(2.0 * theta);
            double want = s2t * s2t * std::fabs(std::sin(phi_e / 2.0));
            CHECK(std::fabs(concurrence(amps) - want) <= 1e-10);
        }
    }
    SUBCASE("periodic in tau with period 2 pi d hbar / (G dm^2)") {
        Constants k = codata2018();
        ParticleSpec p = heavy_pair();
        double d = 1e-15;
        double period = 2.0 * kPi * d * k.hbar / (k.G * p.dm * p.dm);
        for (double tau : {0.1 * period, 0.23 * period, 0.41 * period}) {
            double c0 = concurrence(two_particle_amplitudes(p, d, tau));
            double c1 = concurrence(two_particle_amplitudes(p, d, tau + period));
            CHECK(std::fabs(c1 - c0) <= 1e-9);
        }
    }
}

TEST_CASE("negativity equals half the concurrence for pure states") {
    CHECK(negativity(bell()) == doctest::Approx(0.5).epsilon(1e-12));

    auto product = two_particle_amplitudes(heavy_pair(0.4), 1e-15, 3e-4, no_gravity());
    CHECK(negativity(product) <= 1e-12);

    std::mt19937_64 rng(0x5eed0032);
    for (int i = 0; i < 500; ++i) {
        auto a = random_state(rng);
        CHECK(std::fabs(negativity(a) - concurrence(a) / 2.0) <= 1e-10);
    }
}

TEST_CASE("entanglement entropy") {
    CHECK(entanglement_entropy(bell()) == doctest::Approx(1.0).epsilon(1e-12));

    auto product = two_particle_amplitudes(heavy_pair(0.4), 1e-15, 3e-4, no_gravity());
    CHECK(entanglement_entropy(product) <= 1e-12);

    SUBCASE("Schmidt weights (0.9, 0.1) carry 0.4690 bits") {
        TwoParticleAmplitudes a;
        a.a11 = std::sqrt(0.9);
        a.a12 = a.a21 = 0.0;
        a.a22 = std::sqrt(0.1);
        CHECK(entanglement_entropy(a) == doctest::Approx(0.46899559).epsilon(1e-4));
    }
    SUBCASE("entropy vanishes exactly when concurrence does") {
        std::mt19937_64 rng(0x5eed0033);
        std::uniform_real_distribution<double> ut(0.0, 1e-3);
        ParticleSpec p = heavy_pair(0.6);
        for (int i = 0; i < 200; ++i) {
            double tau = ut(rng);
            auto entangled = two_particle_amplitudes(p, 1e-15, tau);
            auto free_pair = two_particle_amplitudes(p, 1e-15, tau, no_gravity());
            // Eigenvalue rounding sets an entropy floor near 5e-15, so the
            // zero side is tested against 1e-13 rather than exact zero.
            for (const auto& amps : {entangled, free_pair}) {
                double c = concurrence(amps);
                double s = entanglement_entropy(amps);
                if (c < 1e-9) CHECK(s <= 1e-13);
                if (c > 1e-5) CHECK(s > 1e-12);
            }
        }
    }
}

TEST_CASE("phase invariances") {
    std::mt19937_64 rng(0x5eed0034);
    std::uniform_real_distribution<double> uph(0.0, 2 * kPi);
    for (int i = 0; i < 300; ++i) {
        auto a = random_state(rng);
        double c0 = concurrence(a), n0 = negativity(a), s0 = entanglement_entropy(a);

        // Global phase.
        auto g = a;
        std::complex<double> u = std::polar(1.0, uph(rng));
        g.a11 *= u;
        g.a12 *= u;
        g.a21 *= u;
        g.a22 *= u;
        CHECK(std::fabs(concurrence(g) - c0) <= 1e-12);
        CHECK(std::fabs(negativity(g) - n0) <= 1e-12);
        CHECK(std::fabs(entanglement_entropy(g) - s0) <= 1e-12);

        // Local phases e^{i beta_i} e^{i gamma_j}.
        double b1 = uph(rng), b2 = uph(rng), g1 = uph(rng), g2 = uph(rng);
        auto l = a;
        l.a11 *= std::polar(1.0, b1 + g1);
        l.a12 *= std::polar(1.0, b1 + g2);
        l.a21 *= std::polar(1.0, b2 + g1);
        l.a22 *= std::polar(1.0, b2 + g2);
        CHECK(std::fabs(concurrence(l) - c0) <= 1e-12);
        CHECK(std::fabs(negativity(l) - n0) <= 1e-12);
        CHECK(std::fabs(entanglement_entropy(l) - s0) <= 1e-12);
    }
}

TEST_CASE("zero-coupling law: G = 0 kills every measure at every tau") {
    std::mt19937_64 rng(0x5eed0035);
    std::uniform_real_distribution<double> ut(0.0, 10.0);
    ParticleSpec p = heavy_pair(0.7);
    for (int i = 0; i < 100; ++i) {
        auto amps = two_particle_amplitudes(p, 1e-15, ut(rng), no_gravity());
        CHECK(concurrence(amps) <= 1e-12);
        CHECK(negativity(amps) <= 1e-12);
        CHECK(entanglement_entropy(amps) <= 1e-12);
    }
}

TEST_CASE("entanglement_trace grid") {
    Constants k = codata2018();
    ParticleSpec p = heavy_pair();
    ExperimentConfig c;
    c.d = 1e-15;
    c.L = 3e7;
    c.gamma = 1e4;
    c.M = 6e24;
    c.R = 1e7;

    double period = 2.0 * kPi * c.d * k.hbar / (k.G * p.dm * p.dm);
    auto rows = entanglement_trace(p, c, 0.0, period, 33);
    REQUIRE(rows.size() == 33);

    CHECK(rows.front().tau == 0.0);
    CHECK(rows.front().concurrence <= 1e-12);
    CHECK(rows.back().tau == doctest::Approx(period));
    CHECK(rows.back().concurrence <= 1e-9);

    double v = speed_from_gamma(c.gamma);
    std::size_t mid = 16;  // phi_E = pi: maximal concurrence for theta = pi/4
    CHECK(rows[mid].concurrence == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(rows[mid].negativity == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(rows[mid].entropy_bits == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(rows[mid].L == doctest::Approx(rows[mid].tau * c.gamma * v).epsilon(1e-12));
    CHECK(rows[mid].phi_E_reduced == doctest::Approx(kPi).epsilon(1e-6));

    CHECK_THROWS_AS(entanglement_trace(p, c, 0.0, 1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(entanglement_trace(p, c, 2.0, 1.0, 8), std::invalid_argument);
}
