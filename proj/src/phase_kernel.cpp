#include "gravosc/phase_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace gravosc {
namespace {

// Error-free transforms. two_sum is Knuth's branchless version; two_prod
// relies on a correctly rounded std::fma.
inline void two_sum(double a, double b, double& s, double& err) {
    s = a + b;
    double bv = s - a;
    err = (a - (s - bv)) + (b - bv);
}

// requires |a| >= |b| or a == 0
inline void fast_two_sum(double a, double b, double& s, double& err) {
    s = a + b;
    err = b - (s - a);
}

inline void two_prod(double a, double b, double& p, double& err) {
    p = a * b;
    err = std::fma(a, b, -p);
}

// Scratch expansions live on the stack. Worst-case intermediate length is
// an accumulator (capped at 120 terms) plus one scaled 40-term expansion.
constexpr int kScratch = 256;
constexpr int kAccCap = 120;

// e: n nonoverlapping terms, increasing magnitude. Appends b exactly.
// Output may contain zeros; caller compresses.
int grow_expansion(const double* e, int n, double b, double* h) {
    double q = b;
    for (int i = 0; i < n; ++i) {
        double s, err;
        two_sum(q, e[i], s, err);
        h[i] = err;
        q = s;
    }
    h[n] = q;
    return n + 1;
}

// Exact product of expansion e by scalar b, zero-eliminated
// (Shewchuk's SCALE-EXPANSION-ZEROELIM).
int scale_expansion(const double* e, int n, double b, double* h) {
    if (n == 0 || b == 0.0) return 0;
    double q, hh;
    two_prod(e[0], b, q, hh);
    int out = 0;
    if (hh != 0.0) h[out++] = hh;
    for (int i = 1; i < n; ++i) {
        double p1, p0, sum;
        two_prod(e[i], b, p1, p0);
        two_sum(q, p0, sum, hh);
        if (hh != 0.0) h[out++] = hh;
        fast_two_sum(p1, sum, q, hh);
        if (hh != 0.0) h[out++] = hh;
    }
    if (q != 0.0 || out == 0) h[out++] = q;
    return out;
}

// Shewchuk's COMPRESS: exact value, nonoverlapping, increasing, zero-free.
int compress_expansion(const double* e, int n, double* h) {
    while (n > 0 && e[n - 1] == 0.0) --n;
    if (n == 0) return 0;
    double g[kScratch];
    double q = e[n - 1];
    int bottom = n - 1;
    for (int i = n - 2; i >= 0; --i) {
        double s, err;
        fast_two_sum(q, e[i], s, err);
        if (err != 0.0) {
            g[bottom--] = s;
            q = err;
        } else {
            q = s;
        }
    }
    g[bottom] = q;
    int out = 0;
    q = g[bottom];
    for (int i = bottom + 1; i < n; ++i) {
        double s, err;
        fast_two_sum(g[i], q, s, err);
        if (err != 0.0) h[out++] = err;
        q = s;
    }
    if (q != 0.0 || out == 0) h[out++] = q;
    if (out == 1 && h[0] == 0.0) return 0;
    return out;
}

// Exact sum of two expansions via repeated grow; compressed by the caller.
int expansion_sum(const double* e, int n, const double* f, int m, double* h) {
    double buf[kScratch];
    std::copy(e, e + n, buf);
    int len = n;
    for (int i = 0; i < m; ++i) {
        double tmp[kScratch];
        len = grow_expansion(buf, len, f[i], tmp);
        std::copy(tmp, tmp + len, buf);
    }
    std::copy(buf, buf + len, h);
    return len;
}

// Drops the smallest terms when a compressed expansion would not fit.
// 40 retained terms carry ~2100 significand bits, so the discarded tail is
// below 2^-2000 relative and can never reach the published error bounds.
int fit_terms(const double* h, int n, double* out, int cap) {
    if (n <= cap) {
        std::copy(h, h + n, out);
        return n;
    }
    std::copy(h + (n - cap), h + n, out);
    return cap;
}

struct Expansion {
    double t[kScratch];
    int n = 0;
};

// e * (expansion constant), exact then compressed.
Expansion mul_terms(const double* e, int n, const double* c, int m) {
    Expansion acc;
    for (int j = 0; j < m; ++j) {
        double scaled[kScratch];
        int sn = scale_expansion(e, n, c[j], scaled);
        double summed[kScratch];
        int tn = expansion_sum(acc.t, acc.n, scaled, sn, summed);
        double packed[kScratch];
        tn = compress_expansion(summed, tn, packed);
        acc.n = fit_terms(packed, tn, acc.t, kAccCap);
    }
    return acc;
}

double estimate(const double* e, int n) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += e[i];
    return acc;
}

int sign_of(const double* e, int n) {
    if (n == 0) return 0;
    return e[n - 1] > 0.0 ? 1 : -1;  // largest term carries the sign
}

// 8-term expansions (descending order here; reversed on use), accurate to
// ~1e-133 absolute residual.
constexpr std::array<double, 8> kPiDesc = {
    3.14159265358979312e+00,  1.22464679914735321e-16,
    -2.99476980971833967e-33, 1.11245422086336528e-49,
    5.67223197964031574e-66,  1.74498621613524860e-83,
    6.02937273224953984e-100, 1.91012354687998999e-116};
constexpr std::array<double, 8> kTwoPiDesc = {
    6.28318530717958623e+00,  2.44929359829470641e-16,
    -5.98953961943667933e-33, 2.22490844172673056e-49,
    1.13444639592806315e-65,  3.48997243227049720e-83,
    1.20587454644990797e-99,  3.82024709375997998e-116};
constexpr std::array<double, 8> kInvTwoPiDesc = {
    1.59154943091895346e-01,  -9.83933833759124294e-18,
    -5.36071814144650200e-34, 4.02678196329705598e-50,
    -7.80138295340985683e-67, 1.41850696559573613e-83,
    -7.83690628837359171e-100, -1.90812364118941106e-116};

std::array<double, 8> ascending(const std::array<double, 8>& desc) {
    std::array<double, 8> a = desc;
    std::reverse(a.begin(), a.end());
    return a;
}

const std::array<double, 8>& pi_asc() {
    static const std::array<double, 8> a = ascending(kPiDesc);
    return a;
}
const std::array<double, 8>& two_pi_asc() {
    static const std::array<double, 8> a = ascending(kTwoPiDesc);
    return a;
}
const std::array<double, 8>& inv_two_pi_asc() {
    static const std::array<double, 8> a = ascending(kInvTwoPiDesc);
    return a;
}

constexpr double kTwoPow52 = 4503599627370496.0;
constexpr double kReduceCap = 1e50;

}  // namespace

PrecisePhase::PrecisePhase(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("phase term must be finite");
    if (x != 0.0) {
        terms_[0] = x;
        size_ = 1;
    }
}

PrecisePhase PrecisePhase::product(std::span<const double> factors) {
    if (factors.empty()) throw std::invalid_argument("phase product needs at least one factor");
    if (factors.size() > 8) throw std::invalid_argument("phase product accepts at most 8 factors");
    for (double f : factors) {
        if (!std::isfinite(f)) throw std::invalid_argument("phase product factor must be finite");
    }
    double buf[kScratch] = {factors[0]};
    int n = factors[0] != 0.0 ? 1 : 0;
    for (std::size_t i = 1; i < factors.size() && n > 0; ++i) {
        double scaled[kScratch];
        int sn = scale_expansion(buf, n, factors[i], scaled);
        n = compress_expansion(scaled, sn, buf);
    }
    PrecisePhase r;
    r.size_ = fit_terms(buf, n, r.terms_.data(), kMaxTerms);
    return r;
}

PrecisePhase PrecisePhase::product(std::initializer_list<double> factors) {
    return product(std::span<const double>(factors.begin(), factors.size()));
}

PrecisePhase PrecisePhase::from_terms(std::span<const double> terms) {
    double buf[kScratch];
    int n = 0;
    for (double t : terms) {
        if (!std::isfinite(t)) throw std::invalid_argument("phase term must be finite");
        double tmp[kScratch];
        n = grow_expansion(buf, n, t, tmp);
        n = compress_expansion(tmp, n, buf);
    }
    PrecisePhase r;
    r.size_ = fit_terms(buf, n, r.terms_.data(), kMaxTerms);
    return r;
}

PrecisePhase PrecisePhase::operator+(const PrecisePhase& rhs) const {
    double summed[kScratch];
    int n = expansion_sum(terms_.data(), size_, rhs.terms_.data(), rhs.size_, summed);
    double packed[kScratch];
    n = compress_expansion(summed, n, packed);
    PrecisePhase r;
    r.size_ = fit_terms(packed, n, r.terms_.data(), kMaxTerms);
    return r;
}

PrecisePhase PrecisePhase::operator-() const {
    PrecisePhase r = *this;
    for (int i = 0; i < r.size_; ++i) r.terms_[static_cast<std::size_t>(i)] = -r.terms_[static_cast<std::size_t>(i)];
    return r;
}

PrecisePhase PrecisePhase::operator-(const PrecisePhase& rhs) const { return *this + (-rhs); }

PrecisePhase PrecisePhase::times(double factor) const {
    if (!std::isfinite(factor)) throw std::invalid_argument("phase scale factor must be finite");
    double scaled[kScratch];
    int n = scale_expansion(terms_.data(), size_, factor, scaled);
    double packed[kScratch];
    n = compress_expansion(scaled, n, packed);
    PrecisePhase r;
    r.size_ = fit_terms(packed, n, r.terms_.data(), kMaxTerms);
    return r;
}

PrecisePhase PrecisePhase::divided_by(double divisor) const {
    if (!std::isfinite(divisor) || divisor == 0.0)
        throw std::invalid_argument("phase divisor must be finite and nonzero");
    // Long division: peel off the rounded quotient, subtract back exactly.
    // Each pass shrinks the remainder by ~2^-52; nine passes reach ~2^-470.
    PrecisePhase quotient;
    PrecisePhase remainder = *this;
    for (int pass = 0; pass < 9 && !remainder.is_zero(); ++pass) {
        double qi = remainder.to_double() / divisor;
        if (qi == 0.0 || !std::isfinite(qi)) break;
        quotient = quotient + PrecisePhase(qi);
        remainder = remainder - PrecisePhase::product({qi, divisor});
    }
    return quotient;
}

double PrecisePhase::to_double() const { return estimate(terms_.data(), size_); }

PrecisePhase phase_from_product(std::span<const double> factors) {
    return PrecisePhase::product(factors);
}

const PrecisePhase& pi_phase() {
    static const PrecisePhase p = PrecisePhase::from_terms(pi_asc());
    return p;
}

const PrecisePhase& two_pi_phase() {
    static const PrecisePhase p = PrecisePhase::from_terms(two_pi_asc());
    return p;
}

double reduce_mod_2pi(const PrecisePhase& phase) {
    if (phase.is_zero()) return 0.0;
    if (std::abs(phase.to_double()) > kReduceCap)
        throw std::range_error("phase magnitude exceeds the 1e50 rad reduction cap");

    // q = phase / (2*pi), computed exactly against the pinned expansion.
    Expansion q = mul_terms(phase.terms_.data(), phase.size_, inv_two_pi_asc().data(), 8);

    // frac(q): every term with |t| >= 2^52 is an integer and drops out;
    // t - floor(t) is exact for the rest.
    Expansion frac;
    for (int i = 0; i < q.n; ++i) {
        double t = q.t[i];
        if (std::abs(t) >= kTwoPow52) continue;
        double f = t - std::floor(t);
        if (f == 0.0) continue;
        double tmp[kScratch];
        int n = grow_expansion(frac.t, frac.n, f, tmp);
        frac.n = compress_expansion(tmp, n, frac.t);
    }

    // Normalize the fraction into [0, 1) with exact comparisons; the sum of
    // per-term fractions lies within a few units of zero.
    double shift = std::floor(estimate(frac.t, frac.n));
    if (shift != 0.0) {
        double tmp[kScratch];
        int n = grow_expansion(frac.t, frac.n, -shift, tmp);
        frac.n = compress_expansion(tmp, n, frac.t);
    }
    for (int guard = 0; guard < 4; ++guard) {
        int sgn = sign_of(frac.t, frac.n);
        if (sgn == 0) return 0.0;
        if (sgn < 0) {
            double tmp[kScratch];
            int n = grow_expansion(frac.t, frac.n, 1.0, tmp);
            frac.n = compress_expansion(tmp, n, frac.t);
            continue;
        }
        double diff[kScratch];
        int dn = grow_expansion(frac.t, frac.n, -1.0, diff);
        double packed[kScratch];
        dn = compress_expansion(diff, dn, packed);
        if (sign_of(packed, dn) < 0) break;  // 0 <= frac < 1
        frac.n = dn;
        std::copy(packed, packed + dn, frac.t);
    }

    // Fractions within 1e-18 of 1 are closer to a full wrap than the double
    // output can express; snap them to zero (error < 7e-18 rad).
    if (estimate(frac.t, frac.n) >= 1.0 - 1e-18) return 0.0;

    Expansion r = mul_terms(frac.t, frac.n, two_pi_asc().data(), 8);
    double out = estimate(r.t, r.n);
    // Fractions just under the snap window can still round across 2*pi.
    if (out > kTwoPiBelow) out = kTwoPiBelow;
    if (out < 0.0) out = 0.0;
    return out;
}

double reduce_mod_2pi(double phase) {
    if (!std::isfinite(phase)) throw std::invalid_argument("phase must be finite");
    return reduce_mod_2pi(PrecisePhase(phase));
}

double circular_distance(double a, double b) {
    PrecisePhase diff = PrecisePhase(a) - PrecisePhase(b);
    return std::min(reduce_mod_2pi(diff), reduce_mod_2pi(-diff));
}

}  // namespace gravosc
