#pragma once

#include <array>
#include <cstddef>
#include <span>

namespace gravosc {

// Extended-precision scalar for accumulated quantum phases.
//
// A phase is an unevaluated sum of doubles (a Shewchuk expansion), kept
// nonoverlapping and ordered by increasing magnitude. Sums and products of
// double factors are exact up to the term cap (~2100 bits of significand);
// division is correct to ~450 bits. Both are far beyond the 40 significant
// decimal digits the observable formulas need at phase magnitudes up to
// 1e50 rad, where plain doubles lose the reduced phase entirely.
//
// All operations are value-semantic and thread-safe.
class PrecisePhase {
public:
    static constexpr int kMaxTerms = 40;

    PrecisePhase() = default;          // zero
    explicit PrecisePhase(double x);

    // Exact product of 1..8 finite double factors.
    static PrecisePhase product(std::span<const double> factors);
    static PrecisePhase product(std::initializer_list<double> factors);

    // Exact sum of arbitrary double terms (used for pinned constants).
    static PrecisePhase from_terms(std::span<const double> terms);

    PrecisePhase operator+(const PrecisePhase& rhs) const;
    PrecisePhase operator-(const PrecisePhase& rhs) const;
    PrecisePhase operator-() const;

    // Exact scaling by a finite double.
    PrecisePhase times(double factor) const;
    // Division by a finite nonzero double, relative error below 2^-430.
    PrecisePhase divided_by(double divisor) const;

    // Nearest-double estimate of the full expansion value (<= 1 ulp off).
    double to_double() const;

    bool is_zero() const { return size_ == 0; }
    int term_count() const { return size_; }
    double term(int i) const { return terms_[static_cast<std::size_t>(i)]; }

private:
    friend double reduce_mod_2pi(const PrecisePhase&);

    // increasing magnitude, nonoverlapping, no zero terms
    std::array<double, kMaxTerms> terms_{};
    int size_ = 0;
};

PrecisePhase phase_from_product(std::span<const double> factors);

inline PrecisePhase phase_from_product(std::initializer_list<double> factors) {
    return PrecisePhase::product(factors);
}

// pi and 2*pi pinned to ~130 decimal digits (8-term expansions).
const PrecisePhase& pi_phase();
const PrecisePhase& two_pi_phase();

// Largest double below the true 2*pi; reduce_mod_2pi never exceeds it.
inline constexpr double kTwoPiBelow = 6.2831853071795862320e0;

// Reduces a phase into [0, 2*pi) with absolute error < 1e-10 even at the
// 1e50 rad magnitude cap (in practice ~1e-15, limited by the double result).
// Throws std::range_error above the cap.
double reduce_mod_2pi(const PrecisePhase& phase);
double reduce_mod_2pi(double phase);

// Distance between two angles on the circle, in [0, pi].
double circular_distance(double a, double b);

}  // namespace gravosc
