#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace gravosc {
namespace detail {

// Philox4x32-10 block cipher (Salmon et al., "Parallel random numbers: as
// easy as 1, 2, 3"). Counter-based: the output depends only on (key, ctr),
// so substreams are independent of evaluation order.
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                               std::uint64_t key) {
    std::uint32_t k0 = static_cast<std::uint32_t>(key);
    std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
    for (int round = 0; round < 10; ++round) {
        std::uint64_t p0 = 0xD2511F53ull * ctr[0];
        std::uint64_t p1 = 0xCD9E8D57ull * ctr[2];
        std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
        std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
        std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
        std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ k0, lo1, hi0 ^ ctr[3] ^ k1, lo0};
        k0 += 0x9E3779B9u;
        k1 += 0xBB67AE85u;
    }
    return ctr;
}

}  // namespace detail

// Seedable, stream-addressable generator. (seed, stream) fully determines
// the sequence; distinct streams never overlap.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

    std::uint64_t next_u64() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        auto block = detail::philox4x32(
            {static_cast<std::uint32_t>(index_), static_cast<std::uint32_t>(index_ >> 32),
             static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)},
            seed_);
        ++index_;
        spare_ = (static_cast<std::uint64_t>(block[2]) << 32) | block[3];
        have_spare_ = true;
        return (static_cast<std::uint64_t>(block[0]) << 32) | block[1];
    }

    // Uniform in (0, 1), never exactly 0 or 1.
    double uniform_open() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    bool bernoulli(double p) {
        if (p <= 0.0) return false;
        if (p >= 1.0) return true;
        return next_u64() < static_cast<std::uint64_t>(p * 18446744073709551616.0);
    }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t index_ = 0;
    std::uint64_t spare_ = 0;
    bool have_spare_ = false;
};

// Standard-normal quantile: Acklam's rational approximation polished with
// one Halley step of erfc, accurate to ~1e-15 over (0, 1).
inline double normal_quantile(double p) {
    constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                            -2.759285104469687e+02, 1.383577518672690e+02,
                            -3.066479806614716e+01, 2.506628277459239e+00};
    constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                            -1.556989798598866e+02, 6.680131188771972e+01,
                            -1.328068155288572e+01};
    constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                            -2.400758277161838e+00, -2.549732539343734e+00,
                            4.374664141464968e+00,  2.938163982698783e+00};
    constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                            2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double q, x;
    if (p < p_low) {
        q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        q = p - 0.5;
        double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    double e = 0.5 * std::erfc(-x / 1.4142135623730951) - p;
    double u = e * 2.5066282746310002 * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

// Exact Bernoulli counting up to this size; Gaussian approximation above
// (relative moment error < 1e-3 there, immaterial for rate statistics).
inline constexpr std::uint64_t kExactBinomialLimit = 1u << 20;

inline std::uint64_t binomial_draw(std::uint64_t n, double p, CounterRng& rng) {
    if (n == 0 || p <= 0.0) return 0;
    if (p >= 1.0) return n;
    if (n <= kExactBinomialLimit) {
        std::uint64_t thr = static_cast<std::uint64_t>(p * 18446744073709551616.0);
        std::uint64_t count = 0;
        for (std::uint64_t i = 0; i < n; ++i) count += rng.next_u64() < thr;
        return count;
    }
    double mean = static_cast<double>(n) * p;
    double sd = std::sqrt(static_cast<double>(n) * p * (1.0 - p));
    double x = std::nearbyint(mean + sd * normal_quantile(rng.uniform_open()));
    if (x < 0.0) return 0;
    if (x >= static_cast<double>(n)) return n;
    return static_cast<std::uint64_t>(x);
}

}  // namespace gravosc
