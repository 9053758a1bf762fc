#pragma once

// Classical scalar special functions the star-functions reduce to
// componentwise: complex gamma (Lanczos), complex zeta (Euler-Maclaurin with
// reflection), Bernoulli numbers, Jacobi theta, primes and exact partition
// numbers.

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "weylstar/errors.hpp"

namespace weylstar {

using cplx = std::complex<double>;

namespace scalar_detail {

// Lanczos approximation, g = 607/128, 15 coefficients.
inline constexpr double kLanczosG = 607.0 / 128.0;
inline constexpr double kLanczosC[15] = {
    0.99999999999999709182,     57.156235665862923517,     -59.597960355475491248,
    14.136097974741747174,      -0.49191381609762019978,   0.33994649984811888699e-4,
    0.46523628927048575665e-4,  -0.98374475304879564677e-4, 0.15808870322491248884e-3,
    -0.21026444172410488319e-3, 0.21743961811521264320e-3, -0.16431810653676389022e-3,
    0.84418223983852743293e-4,  -0.26190838401581408670e-4, 0.36899182659531622704e-5};

inline cplx gamma_positive_half(cplx z) {
    // Valid for Re z >= 1/2.
    cplx a = kLanczosC[0];
    for (int k = 1; k < 15; ++k) a += kLanczosC[k] / (z - 1.0 + double(k));
    cplx t = z + (kLanczosG - 0.5);
    return std::sqrt(2.0 * M_PI) * std::pow(t, z - 0.5) * std::exp(-t) * a;
}

inline bool near_nonpositive_integer(cplx z, double tol) {
    double r = std::round(std::real(z));
    return r <= 0.0 && std::abs(z - r) < tol;
}

// Stieltjes constants for the Laurent expansion of zeta at 1.
inline constexpr double kStieltjes[10] = {
    0.57721566490153286061,   -0.072815845483676724861, -0.0096903631928723184845,
    0.0020538344203033458662, 0.0023253700654673000575, 0.00079332381730106270175,
    -0.00023876934543019960987, -0.00052728956705775104607, -0.00035212335380303950960,
    -0.000034394774418088048178};

// Bernoulli numbers B_2..B_30 (standard sign convention).
inline constexpr double kBernoulliSmall[15] = {
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0};

inline double factorial_2j(int j) {
    double r = 1.0;
    for (int k = 2; k <= 2 * j; ++k) r *= k;
    return r;
}

// Euler-Maclaurin tail of sum_{k>=N} k^{-s}.
inline cplx zeta_em(cplx s) {
    int N = std::max(24, int(std::ceil(1.3 * std::abs(s))) + 8);
    cplx acc = 0.0;
    for (int k = 1; k < N; ++k) acc += std::pow(double(k), -s);
    cplx Ns = std::pow(double(N), -s);
    acc += double(N) * Ns / (s - 1.0);
    acc += 0.5 * Ns;
    cplx rising = s; // s (s+1) ... accumulated
    double N2 = double(N) * double(N);
    cplx Npow = Ns / double(N); // N^{-s-1}
    for (int j = 1; j <= 15; ++j) {
        acc += kBernoulliSmall[j - 1] / (factorial_2j(j)) * rising * Npow;
        rising *= (s + double(2 * j - 1)) * (s + double(2 * j));
        Npow /= N2;
    }
    return acc;
}

} // namespace scalar_detail

inline cplx gamma_c(cplx z) {
    if (scalar_detail::near_nonpositive_integer(z, 1e-12))
        throw PoleError("gamma pole at non-positive integer");
    if (std::real(z) >= 0.5) return scalar_detail::gamma_positive_half(z);
    // Reflection.
    return M_PI / (std::sin(M_PI * z) * scalar_detail::gamma_positive_half(1.0 - z));
}

// Reciprocal gamma: entire, zero at non-positive integers.
inline cplx rgamma_c(cplx z) {
    if (scalar_detail::near_nonpositive_integer(z, 1e-13)) return 0.0;
    if (std::real(z) >= 0.5) return 1.0 / scalar_detail::gamma_positive_half(z);
    return std::sin(M_PI * z) * scalar_detail::gamma_positive_half(1.0 - z) / M_PI;
}

inline cplx zeta_c(cplx s) {
    if (std::abs(s - 1.0) < 1e-12) throw PoleError("zeta pole at s = 1");
    if (std::real(s) >= 0.5) return scalar_detail::zeta_em(s);

    // Functional equation: zeta(s) = 2^s pi^{s-1} sin(pi s/2) Gamma(1-s) zeta(1-s).
    cplx pref = std::pow(2.0, s) * std::pow(M_PI, s - 1.0) * gamma_c(1.0 - s);
    if (std::abs(s) < 0.3) {
        // zeta(1-s) has its pole at s = 0; expand sin(pi s/2) zeta(1-s) with
        // the Stieltjes series so the product stays finite.
        cplx sinc = (std::abs(s) < 1e-30) ? cplx(M_PI_2) : std::sin(M_PI_2 * s) / s;
        cplx reg = 0.0; // zeta(1-s) + 1/s
        cplx p = 1.0;
        double fact = 1.0;
        for (int n = 0; n < 10; ++n) {
            if (n > 0) {
                p *= s;
                fact *= n;
            }
            reg += scalar_detail::kStieltjes[n] * p / fact;
        }
        return pref * (-sinc + std::sin(M_PI_2 * s) * reg);
    }
    return pref * std::sin(M_PI_2 * s) * scalar_detail::zeta_em(1.0 - s);
}

// Bernoulli numbers, standard signs; odd index returns 0 by convention.
inline double bernoulli(int n) {
    if (n < 0 || n > 60) throw RangeError("bernoulli supports 0 <= n <= 60");
    if (n == 0) return 1.0;
    if (n == 1) return -0.5;
    if (n % 2 == 1) return 0.0;
    int m = n / 2;
    if (m <= 15) return scalar_detail::kBernoulliSmall[m - 1];
    // B_n = (-1)^{n/2+1} 2 n! zeta(n) / (2 pi)^n; zeta(n) from a short sum.
    double z = 1.0;
    for (int k = 2; k <= 12; ++k) z += std::pow(double(k), -double(n));
    double fact = 1.0;
    for (int k = 2; k <= n; ++k) fact *= k;
    double mag = 2.0 * fact * z / std::pow(2.0 * M_PI, double(n));
    return (m % 2 == 0) ? -mag : mag;
}

// theta3(t) = sum_{n in Z} exp(-n^2 t), t > 0.
inline double theta3(double t) {
    if (!(t > 0.0)) throw DomainError("theta3 requires t > 0");
    double acc = 1.0;
    for (int n = 1;; ++n) {
        double term = std::exp(-double(n) * double(n) * t);
        acc += 2.0 * term;
        if (term < 1e-16) break;
    }
    return acc;
}

inline std::vector<long> primes_upto(long n) {
    if (n < 0 || n > 1000000) throw RangeError("primes_upto supports 0 <= n <= 1e6");
    std::vector<bool> comp(size_t(n) + 1, false);
    std::vector<long> out;
    for (long p = 2; p <= n; ++p) {
        if (comp[size_t(p)]) continue;
        out.push_back(p);
        for (long q = p * p; q <= n; q += p) comp[size_t(q)] = true;
    }
    return out;
}

// Minimal unsigned big integer for the pentagonal-number recurrence.
class BigNat {
public:
    BigNat() = default;
    explicit BigNat(std::uint64_t v) {
        while (v) {
            limbs_.push_back(std::uint32_t(v & 0xffffffffu));
            v >>= 32;
        }
    }

    bool is_zero() const { return limbs_.empty(); }

    BigNat& operator+=(const BigNat& o) {
        std::uint64_t carry = 0;
        size_t n = std::max(limbs_.size(), o.limbs_.size());
        limbs_.resize(n, 0);
        for (size_t i = 0; i < n; ++i) {
            std::uint64_t s = carry + limbs_[i] + (i < o.limbs_.size() ? o.limbs_[i] : 0u);
            limbs_[i] = std::uint32_t(s & 0xffffffffu);
            carry = s >> 32;
        }
        if (carry) limbs_.push_back(std::uint32_t(carry));
        return *this;
    }

    // Requires *this >= o.
    BigNat& operator-=(const BigNat& o) {
        std::int64_t borrow = 0;
        for (size_t i = 0; i < limbs_.size(); ++i) {
            std::int64_t s = std::int64_t(limbs_[i]) - borrow - (i < o.limbs_.size() ? o.limbs_[i] : 0u);
            if (s < 0) {
                s += (std::int64_t(1) << 32);
                borrow = 1;
            } else {
                borrow = 0;
            }
            limbs_[i] = std::uint32_t(s);
        }
        while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
        return *this;
    }

    friend bool operator==(const BigNat& a, const BigNat& b) { return a.limbs_ == b.limbs_; }

    double to_double() const {
        double r = 0.0;
        for (size_t i = limbs_.size(); i-- > 0;) r = r * 4294967296.0 + double(limbs_[i]);
        return r;
    }

    std::uint64_t to_u64() const {
        if (limbs_.size() > 2) throw RangeError("BigNat value exceeds 64 bits");
        std::uint64_t r = 0;
        for (size_t i = limbs_.size(); i-- > 0;) r = (r << 32) | limbs_[i];
        return r;
    }

private:
    std::vector<std::uint32_t> limbs_;
};

// Exact partition numbers by the Euler pentagonal-number recurrence.
inline std::vector<BigNat> partitions_upto(int n) {
    if (n < 0 || n > 10000) throw RangeError("partitions supports 0 <= n <= 1e4");
    std::vector<BigNat> p(size_t(n) + 1);
    p[0] = BigNat(1);
    for (int m = 1; m <= n; ++m) {
        BigNat pos, neg;
        for (int k = 1;; ++k) {
            long g1 = long(k) * (3 * k - 1) / 2;
            long g2 = long(k) * (3 * k + 1) / 2;
            if (g1 > m && g2 > m) break;
            bool plus = (k % 2 == 1);
            if (g1 <= m) (plus ? pos : neg) += p[size_t(m - g1)];
            if (g2 <= m) (plus ? pos : neg) += p[size_t(m - g2)];
        }
        pos -= neg;
        p[size_t(m)] = std::move(pos);
    }
    return p;
}

inline BigNat partitions(int n) { return partitions_upto(n)[size_t(n)]; }

} // namespace weylstar
