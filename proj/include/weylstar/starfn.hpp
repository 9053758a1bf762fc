#pragma once

// Star-special functions: star-beta, star-gamma (integral, continuation,
// residues, diagonal, inverse, infinite product), star-zeta (Dirichlet
// series, Euler product, L-function, Bernoulli continuation, diagonal,
// reflection) and the partition generating element.
//
// The `sign` argument selects the operator argument z + H (sign = +1) or
// z - H (sign = -1).  Quadratures over e_*^{t(z +- H)} place family nodes at
// zeta = +-t and carry e^{t z} through the word shift.

#include <optional>

#include "weylstar/diag.hpp"
#include "weylstar/scalar.hpp"

namespace weylstar {

namespace starfn_detail {

inline void check_sign(int sign) {
    if (sign != 1 && sign != -1) throw ValidationError("sign must be +1 or -1");
}

inline double trunc_logtol(const QuadratureConfig& cfg) { return -std::log(cfg.trunc_tol); }

} // namespace starfn_detail

// \int_{lo}^{hi} w(t) e_*^{t(z + sign H)} dt as a family quadrature.
inline IntegralElement weighted_family_line(int sign, double lo, double hi, cplx z,
                                            const std::function<cplx(double)>& weight_fn,
                                            const ExprParam& K, const HbarConfig& h,
                                            const QuadratureConfig& cfg = QuadratureConfig()) {
    starfn_detail::check_sign(sign);
    if (sign > 0) return real_line_element(lo, hi, z, weight_fn, K, h, cfg);
    return real_line_element(-hi, -lo, -z, [weight_fn](double t) { return weight_fn(-t); }, K, h,
                             cfg);
}

// (z + hsign H)^{-1} as a half-line quadrature.  branch = +1 integrates over
// (-inf, 0] (Re z > -1/2), branch = -1 over [0, inf) with a minus sign
// (Re z < 1/2).  inverse_pm of the word module equals resolvent(z, +1, branch).
inline IntegralElement resolvent(cplx z, int hsign, int branch, const ExprParam& K,
                                 const HbarConfig& h = HbarConfig(),
                                 const QuadratureConfig& cfg = QuadratureConfig()) {
    starfn_detail::check_sign(hsign);
    starfn_detail::check_sign(branch);
    double logtol = starfn_detail::trunc_logtol(cfg);
    if (branch > 0) {
        if (!(std::real(z) > -0.5)) throw OutOfHalfPlane("resolvent(+) requires Re z > -1/2");
        double S = std::min(logtol / (std::real(z) + 0.5) + 5.0, 4000.0);
        return weighted_family_line(hsign, -S, 0.0, z, [](double) { return cplx(1.0); }, K, h,
                                    cfg);
    }
    if (!(std::real(z) < 0.5)) throw OutOfHalfPlane("resolvent(-) requires Re z < 1/2");
    double S = std::min(logtol / (0.5 - std::real(z)) + 5.0, 4000.0);
    IntegralElement e =
        weighted_family_line(hsign, 0.0, S, z, [](double) { return cplx(1.0); }, K, h, cfg);
    e.scale(-1.0);
    return e;
}

// Dual integral/diagonal presentation of a star-function.
struct StarFnResult {
    std::optional<IntegralElement> integral;
    std::optional<DiagSeries> diag;        // E basis for sign=+1, Ebar for sign=-1
    std::optional<DiagSeries> diag_other;  // the complementary basis
    std::string region;
};

// ---------------------------------------------------------------------------
// Star-beta
// ---------------------------------------------------------------------------

// B_*(alpha + sign tau H, y) = \int_{-inf}^0 e_*^{s(alpha + sign tau H)} (1-e^s)^{y-1} ds.
inline IntegralElement star_beta(cplx alpha, int sign, cplx y, double tau, const ExprParam& K,
                                 const HbarConfig& h = HbarConfig(),
                                 const QuadratureConfig& cfg = QuadratureConfig()) {
    starfn_detail::check_sign(sign);
    if (tau == 0.0) throw ValidationError("star_beta requires tau != 0");
    if (!(std::real(alpha) > -std::abs(tau) / 2.0))
        throw OutOfRegion("star_beta requires Re alpha > -|tau|/2");
    if (!(std::real(y) > 0.0)) throw OutOfRegion("star_beta requires Re y > 0");

    double logtol = starfn_detail::trunc_logtol(cfg);
    double S = logtol / (std::real(alpha) + std::abs(tau) / 2.0) + 5.0;

    double ct = sign * tau; // zeta = ct * s
    double zlo = (ct > 0) ? -ct * S : 0.0;
    double zhi = (ct > 0) ? 0.0 : -ct * S;
    cplx shift = alpha / ct;
    return real_line_element(
        zlo, zhi, shift,
        [=](double zt) {
            double s = zt / ct;
            return std::pow(cplx(1.0 - std::exp(s)), y - 1.0) / std::abs(ct);
        },
        K, h, cfg);
}

// ---------------------------------------------------------------------------
// Star-gamma
// ---------------------------------------------------------------------------

// Diagonal expression of Gamma_*(z + sign H) in the given basis.
inline DiagSeries star_gamma_diag(cplx z, int sign, DiagBasis basis, int N) {
    starfn_detail::check_sign(sign);
    bool plus_route = (sign > 0) == (basis != DiagBasis::EbarMat);
    if (basis == DiagBasis::Dmat)
        return DiagSeries::from_fn(basis, N, [&](int n) { return gamma_c(z + double(n)); });
    return DiagSeries::from_fn(basis, N, [&](int n) {
        return plus_route ? gamma_c(z + double(n) + 0.5) : gamma_c(z - double(n) - 0.5);
    });
}

inline IntegralElement star_gamma_integral(cplx z, int sign, const ExprParam& K,
                                           const HbarConfig& h = HbarConfig(),
                                           const QuadratureConfig& cfg = QuadratureConfig()) {
    starfn_detail::check_sign(sign);
    if (!(std::real(z) > -0.5)) throw OutOfRegion("star_gamma integral requires Re z > -1/2");
    double logtol = starfn_detail::trunc_logtol(cfg);
    double Sm = logtol / (std::real(z) + 0.5) + 5.0;
    return weighted_family_line(sign, -Sm, 4.6, z, [](double s) { return std::exp(-std::exp(s)); },
                                K, h, cfg);
}

inline StarFnResult star_gamma(cplx z, int sign, const ExprParam& K,
                               const HbarConfig& h = HbarConfig(),
                               const QuadratureConfig& cfg = QuadratureConfig(), int N = 40) {
    StarFnResult r;
    if (std::real(z) > -0.5) {
        r.integral = star_gamma_integral(z, sign, K, h, cfg);
        r.region = "direct";
    } else {
        r.region = "diagonal only (Re z <= -1/2)";
    }
    DiagBasis primary = sign > 0 ? DiagBasis::Emat : DiagBasis::EbarMat;
    DiagBasis secondary = sign > 0 ? DiagBasis::EbarMat : DiagBasis::Emat;
    r.diag = star_gamma_diag(z, sign, primary, N);
    r.diag_other = star_gamma_diag(z, sign, secondary, N);
    return r;
}

// Analytic continuation of the star-gamma integral: entire part plus the
// alternating inverse terms plus the remainder quadrature.
inline IntegralElement star_gamma_continued(cplx z, int sign, int n, const ExprParam& K,
                                            const HbarConfig& h = HbarConfig(),
                                            const QuadratureConfig& cfg = QuadratureConfig()) {
    starfn_detail::check_sign(sign);
    if (n < 0) throw ValidationError("star_gamma_continued requires n >= 0");
    if (!(std::real(z) + n > 0.0))
        throw OutOfRegion("star_gamma_continued requires Re(z + n) > 0");
    double near_pole = 1e300;
    for (int k = 0; k <= n + 2; ++k)
        near_pole = std::min(near_pole, std::abs(z + (double(k) + 0.5)));
    if (near_pole < 1e-6) throw PoleError("star_gamma pole at z in -(N + 1/2)");

    IntegralElement out = weighted_family_line(
        sign, 0.0, 4.6, z, [](double s) { return std::exp(-std::exp(s)); }, K, h, cfg);

    // The alternating inverse terms carry the poles; continue them past their
    // half-planes when the evaluation point requires it.
    std::optional<ContinuedResolvent> cont;
    bool need_cont = false;
    for (int k = 0; k <= n; ++k)
        if (!(std::real(z) + k > -0.45)) need_cont = true;
    if (need_cont) cont.emplace(sign, K, h, cfg);

    double sgn = 1.0, fact = 1.0;
    for (int k = 0; k <= n; ++k) {
        if (k > 0) {
            sgn = -sgn;
            fact *= k;
        }
        IntegralElement inv = cont ? cont->at(z + double(k), +1)
                                   : resolvent(z + double(k), sign, +1, K, h, cfg);
        inv.scale(sgn / fact);
        out.nodes.insert(out.nodes.end(), inv.nodes.begin(), inv.nodes.end());
    }
    double logtol = starfn_detail::trunc_logtol(cfg);
    double rate = std::real(z) + 0.5 + double(n) + 1.0;
    double Sm = logtol / rate + 5.0;
    IntegralElement rem = weighted_family_line(
        sign, -Sm, 0.0, z,
        [n](double s) {
            double partial_sgn = 1.0, partial_fact = 1.0;
            cplx partial = 0.0;
            for (int k = 0; k <= n; ++k) {
                if (k > 0) {
                    partial_sgn = -partial_sgn;
                    partial_fact *= k;
                }
                partial += partial_sgn / partial_fact * std::exp(double(k) * s);
            }
            return cplx(std::exp(-std::exp(s))) - partial;
        },
        K, h, cfg);
    out.nodes.insert(out.nodes.end(), rem.nodes.begin(), rem.nodes.end());
    out.kind = IntegralElement::Kind::RealLine;
    out.anchor_re = 0.0;
    return out;
}

// Componentwise inverse of the diagonal star-gamma; every component is the
// entire function 1/Gamma(z + n + 1/2).
inline DiagSeries star_gamma_inverse_diag(cplx z, int sign, DiagBasis basis, int N) {
    starfn_detail::check_sign(sign);
    if ((sign > 0 && basis != DiagBasis::Emat) || (sign < 0 && basis != DiagBasis::EbarMat))
        throw WrongClass("inverse star-gamma: basis must pair with the sign");
    return DiagSeries::from_fn(basis, N,
                               [&](int n) { return rgamma_c(z + double(n) + 0.5); });
}

// n-th approximant of the infinite-product formula:
// \int_{-inf}^{log n} e_*^{t(z +- H)} (1 - e^t/n)^n dt.
inline IntegralElement star_gamma_product(cplx z, int sign, int n, const ExprParam& K,
                                          const HbarConfig& h = HbarConfig(),
                                          const QuadratureConfig& cfg = QuadratureConfig()) {
    starfn_detail::check_sign(sign);
    if (n < 1) throw ValidationError("star_gamma_product requires n >= 1");
    if (!(std::real(z) > -0.5)) throw OutOfRegion("star_gamma_product requires Re z > -1/2");
    double logtol = starfn_detail::trunc_logtol(cfg);
    double Sm = logtol / (std::real(z) + 0.5) + 5.0;
    double nn = double(n);
    return weighted_family_line(
        sign, -Sm, std::log(nn), z,
        [nn](double t) { return std::pow(cplx(1.0 - std::exp(t) / nn), nn); }, K, h, cfg);
}

// ---------------------------------------------------------------------------
// Star-zeta family
// ---------------------------------------------------------------------------

inline DiagSeries star_zeta_diag(cplx z, int sign, int N) {
    starfn_detail::check_sign(sign);
    DiagBasis basis = sign > 0 ? DiagBasis::Emat : DiagBasis::EbarMat;
    return DiagSeries::from_fn(basis, N, [&](int k) { return zeta_c(z + double(k) + 0.5); });
}

inline DiagSeries star_zeta_inverse_diag(cplx z, int sign, int N) {
    return diag_invert(star_zeta_diag(z, sign, N));
}

// Dirichlet-series truncation: sum_{n<=N} e_*^{-(log n)(z +- H)}.
inline IntegralElement star_zeta_series(cplx z, int sign, int N, const ExprParam& K,
                                        const HbarConfig& h = HbarConfig(),
                                        const QuadratureConfig& cfg = QuadratureConfig()) {
    starfn_detail::check_sign(sign);
    if (!(std::real(z) > 0.5)) throw OutOfRegion("star_zeta series requires Re z > 1/2");
    std::vector<std::pair<double, cplx>> nodes;
    nodes.reserve(size_t(N));
    for (int n = 1; n <= N; ++n) nodes.emplace_back(-double(sign) * std::log(double(n)), 1.0);
    return family_point_sum(nodes, double(sign) * z, K, h, cfg);
}

inline StarFnResult star_zeta(cplx z, int sign, int N, const ExprParam& K,
                              const HbarConfig& h = HbarConfig(),
                              const QuadratureConfig& cfg = QuadratureConfig(),
                              int diagN = 40) {
    StarFnResult r;
    if (std::real(z) > 0.5) {
        r.integral = star_zeta_series(z, sign, N, K, h, cfg);
        r.region = "series";
    } else {
        r.region = "diagonal only (Re z <= 1/2)";
    }
    r.diag = star_zeta_diag(z, sign, diagN);
    return r;
}

// Integers representable as products of primes <= P with exponents <= kmax,
// capped at mcap; each integer appears exactly once.
inline std::vector<long> euler_product_terms(long P, int kmax, long mcap) {
    std::vector<long> primes = primes_upto(P);
    std::vector<long> terms{1};
    for (long p : primes) {
        size_t sz = terms.size();
        for (size_t i = 0; i < sz; ++i) {
            long m = terms[i];
            for (int k = 1; k <= kmax; ++k) {
                if (m > mcap / p) break;
                m *= p;
                terms.push_back(m);
            }
        }
    }
    std::sort(terms.begin(), terms.end());
    return terms;
}

inline IntegralElement star_zeta_euler(cplx z, int sign, long P, int kmax, const ExprParam& K,
                                       const HbarConfig& h = HbarConfig(),
                                       const QuadratureConfig& cfg = QuadratureConfig(),
                                       long mcap = 4096) {
    starfn_detail::check_sign(sign);
    if (!(std::real(z) > 0.5)) throw OutOfRegion("star_zeta Euler product requires Re z > 1/2");
    std::vector<std::pair<double, cplx>> nodes;
    for (long m : euler_product_terms(P, kmax, mcap))
        nodes.emplace_back(-double(sign) * std::log(double(m)), 1.0);
    return family_point_sum(nodes, double(sign) * z, K, h, cfg);
}

// ---------------------------------------------------------------------------
// L = Gamma_* x zeta_* as one quadrature
// ---------------------------------------------------------------------------

// Scalar component function L(sigma) = Gamma(sigma) zeta(sigma).  The Gamma
// poles at negative even integers are removable (trivial zeros of zeta), but
// the lattice points themselves are not evaluated.
inline cplx L_scalar(cplx sigma) {
    if (std::abs(sigma - 1.0) < 1e-6) throw PoleError("L pole at sigma = 1");
    double r = std::round(std::real(sigma));
    if (r <= 0.0 && std::abs(sigma - r) < 1e-6) {
        long ri = std::lround(r);
        if (ri % 2 != 0) throw PoleError("L pole at negative odd integer");
        if (std::abs(sigma - r) < 1e-12)
            throw PoleError("L at a removable lattice point is not evaluated");
    }
    return gamma_c(sigma) * zeta_c(sigma);
}

inline DiagSeries L_star_diag(cplx z, int sign, int N) {
    starfn_detail::check_sign(sign);
    DiagBasis basis = sign > 0 ? DiagBasis::Emat : DiagBasis::EbarMat;
    return DiagSeries::from_fn(basis, N, [&](int k) { return L_scalar(z + double(k) + 0.5); });
}

inline IntegralElement L_star_integral(cplx z, int sign, const ExprParam& K,
                                       const HbarConfig& h = HbarConfig(),
                                       const QuadratureConfig& cfg = QuadratureConfig()) {
    starfn_detail::check_sign(sign);
    if (!(std::real(z) > 0.5)) throw OutOfRegion("L_star integral requires Re z > 1/2");
    double logtol = starfn_detail::trunc_logtol(cfg);
    double Sm = logtol / (std::real(z) - 0.5) + 5.0;
    return weighted_family_line(
        sign, -Sm, 4.6, z, [](double s) { return 1.0 / std::expm1(std::exp(s)); }, K, h, cfg);
}

inline StarFnResult L_star(cplx z, int sign, const ExprParam& K,
                           const HbarConfig& h = HbarConfig(),
                           const QuadratureConfig& cfg = QuadratureConfig(), int N = 40) {
    StarFnResult r;
    if (std::real(z) > 0.5) {
        r.integral = L_star_integral(z, sign, K, h, cfg);
        r.region = "direct";
    } else {
        r.region = "diagonal/Bernoulli continuation";
    }
    r.diag = L_star_diag(z, sign, N);
    return r;
}

// Bernoulli-split continuation of the L quadrature: entire part over [0,inf),
// the closed resolvent terms, and the rapidly decreasing remainder.
inline IntegralElement L_star_bernoulli(cplx z, int sign, int nb, const ExprParam& K,
                                        const HbarConfig& h = HbarConfig(),
                                        const QuadratureConfig& cfg = QuadratureConfig()) {
    starfn_detail::check_sign(sign);
    if (nb < 1 || nb > 15) throw ValidationError("L_star_bernoulli supports 1 <= nb <= 15");
    if (!(std::real(z) > 0.5))
        throw OutOfRegion("Bernoulli split requires Re z > 1/2 (resolvent term at z-1)");

    IntegralElement out = weighted_family_line(
        sign, 0.0, 4.6, z, [](double s) { return 1.0 / std::expm1(std::exp(s)); }, K, h, cfg);

    auto add_scaled = [&](IntegralElement e, cplx c) {
        e.scale(c);
        out.nodes.insert(out.nodes.end(), e.nodes.begin(), e.nodes.end());
    };
    add_scaled(resolvent(z - 1.0, sign, +1, K, h, cfg), 1.0);
    add_scaled(resolvent(z, sign, +1, K, h, cfg), -0.5);
    for (int n = 1; n <= nb; ++n)
        add_scaled(resolvent(z + double(2 * n - 1), sign, +1, K, h, cfg),
                   bernoulli(2 * n) / scalar_detail::factorial_2j(n));

    double logtol = starfn_detail::trunc_logtol(cfg);
    double rate = std::real(z) + 0.5 + double(2 * nb + 1);
    double Sm = logtol / rate + 5.0;
    IntegralElement rem = weighted_family_line(
        sign, -Sm, 0.0, z,
        [nb](double t) {
            cplx r = 1.0 / std::expm1(std::exp(t)) - std::exp(-t) + 0.5;
            for (int n = 1; n <= nb; ++n)
                r -= bernoulli(2 * n) / scalar_detail::factorial_2j(n) *
                     std::exp(double(2 * n - 1) * t);
            return r;
        },
        K, h, cfg);
    out.nodes.insert(out.nodes.end(), rem.nodes.begin(), rem.nodes.end());
    out.kind = IntegralElement::Kind::RealLine;
    out.anchor_re = 0.0;
    return out;
}

// Smooth part of the Bernoulli split (for decay checks).
inline double bernoulli_split_remainder(double t) {
    return 1.0 / std::expm1(std::exp(t)) - std::exp(-t);
}

// ---------------------------------------------------------------------------
// Partition generating element
// ---------------------------------------------------------------------------

inline IntegralElement partition_gen(cplx z, int sign, int nmax, const ExprParam& K,
                                     const HbarConfig& h = HbarConfig(),
                                     const QuadratureConfig& cfg = QuadratureConfig()) {
    starfn_detail::check_sign(sign);
    if (!(std::real(z) > 0.0)) throw OutOfRegion("partition series requires Re z > 0");
    std::vector<BigNat> p = partitions_upto(nmax);
    std::vector<std::pair<double, cplx>> nodes;
    nodes.reserve(size_t(nmax) + 1);
    for (int n = 0; n <= nmax; ++n)
        nodes.emplace_back(-double(sign) * double(n), cplx(p[size_t(n)].to_double()));
    return family_point_sum(nodes, double(sign) * z, K, h, cfg);
}

// Truncated product form: parts <= lmax, total weight <= cap.
inline IntegralElement partition_gen_product(cplx z, int sign, int lmax, int cap,
                                             const ExprParam& K,
                                             const HbarConfig& h = HbarConfig(),
                                             const QuadratureConfig& cfg = QuadratureConfig()) {
    starfn_detail::check_sign(sign);
    if (!(std::real(z) > 0.0)) throw OutOfRegion("partition product requires Re z > 0");
    // count partitions of m into parts <= lmax (doubles suffice at test sizes)
    std::vector<double> pl(size_t(cap) + 1, 0.0);
    pl[0] = 1.0;
    for (int part = 1; part <= lmax; ++part)
        for (int m = part; m <= cap; ++m) pl[size_t(m)] += pl[size_t(m - part)];
    std::vector<std::pair<double, cplx>> nodes;
    for (int m = 0; m <= cap; ++m)
        nodes.emplace_back(-double(sign) * double(m), cplx(pl[size_t(m)]));
    return family_point_sum(nodes, double(sign) * z, K, h, cfg);
}

// ---------------------------------------------------------------------------
// Theta integrand, reflection symmetry
// ---------------------------------------------------------------------------

// Phi_*(s +- H) = \int theta-weight(x) e_*^{(x/2)(s +- H)} dx with
// theta-weight(x) = (theta3(pi e^x) - 1)/2.
inline IntegralElement phi_star(cplx s, int sign, const ExprParam& K,
                                const HbarConfig& h = HbarConfig(),
                                const QuadratureConfig& cfg = QuadratureConfig()) {
    starfn_detail::check_sign(sign);
    if (!(std::real(s) > 0.5))
        throw OutOfRegion("phi_star direct quadrature requires Re s > 1/2");
    double logtol = starfn_detail::trunc_logtol(cfg);
    double xlo = -(2.0 * logtol / (std::real(s) - 0.5) + 8.0);
    double xhi = 4.0;
    // zeta = sign * x / 2
    double zlo = sign > 0 ? xlo / 2.0 : -xhi / 2.0;
    double zhi = sign > 0 ? xhi / 2.0 : -xlo / 2.0;
    return real_line_element(
        zlo, zhi, double(sign) * s,
        [=](double zt) {
            double x = 2.0 * sign * zt;
            return cplx((theta3(M_PI * std::exp(x)) - 1.0));
        },
        K, h, cfg);
}

// Split form of Phi_*: entire theta part on [0, inf) in both arguments plus
// the two resolvent terms; agrees with phi_star where both converge and
// continues it across Re s = 1/2.
inline IntegralElement phi_star_split(cplx s, int sign, const ExprParam& K,
                                      const HbarConfig& h = HbarConfig(),
                                      const QuadratureConfig& cfg = QuadratureConfig()) {
    starfn_detail::check_sign(sign);
    if (!(std::real(s) > 0.5))
        throw OutOfRegion("phi_star_split resolvent terms require Re s > 1/2 before continuation");
    double xhi = 4.0;

    auto theta_w = [](double x) { return cplx(0.5 * (theta3(M_PI * std::exp(x)) - 1.0)); };

    // \int_0^inf theta_w(x) e_*^{(x/2)(s +- H)} dx : zeta = sign x/2 in [0, xhi/2] or mirrored
    double zlo1 = sign > 0 ? 0.0 : -xhi / 2.0;
    double zhi1 = sign > 0 ? xhi / 2.0 : 0.0;
    IntegralElement out = real_line_element(
        zlo1, zhi1, double(sign) * s,
        [=](double zt) { return 2.0 * theta_w(2.0 * sign * zt); }, K, h, cfg);

    // \int_0^inf theta_w(x) e_*^{(x/2)((1-s) -+ H)} dx : zeta = -sign x/2
    double zlo2 = sign > 0 ? -xhi / 2.0 : 0.0;
    double zhi2 = sign > 0 ? 0.0 : xhi / 2.0;
    IntegralElement mirror = real_line_element(
        zlo2, zhi2, -double(sign) * (1.0 - s),
        [=](double zt) { return 2.0 * theta_w(-2.0 * sign * zt); }, K, h, cfg);
    out.nodes.insert(out.nodes.end(), mirror.nodes.begin(), mirror.nodes.end());

    auto add_scaled = [&](IntegralElement e, cplx c) {
        e.scale(c);
        out.nodes.insert(out.nodes.end(), e.nodes.begin(), e.nodes.end());
    };
    add_scaled(resolvent(s - 1.0, sign, +1, K, h, cfg), 1.0);  // = -(1-(s +- H))^{-1}
    add_scaled(resolvent(s, sign, +1, K, h, cfg), -1.0);
    out.kind = IntegralElement::Kind::RealLine;
    out.anchor_re = 0.0;
    return out;
}

// Componentwise content of the reflection identity: the completed function
// xi(sigma) = pi^{-sigma/2} Gamma(sigma/2) zeta(sigma) satisfies
// xi(sigma) = xi(1 - sigma).
inline cplx xi_completed(cplx sigma) {
    if (std::abs(sigma) < 1e-6 || std::abs(sigma - 1.0) < 1e-6)
        throw PoleError("xi pole at sigma in {0, 1}");
    return std::pow(M_PI, -sigma / 2.0) * gamma_c(sigma / 2.0) * zeta_c(sigma);
}

inline double reflection_residual(cplx s, int k) {
    cplx sigma = s + double(k) + 0.5;
    return std::abs(xi_completed(sigma) - xi_completed(1.0 - sigma));
}

// Hybrid expressions of F_*(s) and G_*(s).  With `reflected` the components
// are produced through the opposite basis routing, which is how G_*(1-s)
// reproduces the components of G_*(s).
inline std::pair<HybridDiag, HybridDiag> FG_hybrid(cplx s, int N, bool reflected = false) {
    auto sigma_at = [&](int k) {
        return reflected ? (s - double(k) - 0.5) : (s + double(k) + 0.5);
    };
    DiagSeries fe(DiagBasis::Emat, N), feb(DiagBasis::EbarMat, N);
    DiagSeries ge(DiagBasis::Emat, N), geb(DiagBasis::EbarMat, N);
    for (int k = 0; k <= N; ++k) {
        cplx sg = sigma_at(k);
        cplx f = xi_completed(sg);
        fe.set(k, f);
        feb.set(k, f);
        cplx g = 1.0 / f;
        ge.set(k, g);
        geb.set(k, g);
    }
    return {HybridDiag(fe, feb), HybridDiag(ge, geb)};
}

} // namespace weylstar
