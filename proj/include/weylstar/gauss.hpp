#pragma once

// Gaussian-with-polynomial-dressing expressions P(u,v) * amp * exp(Q(u,v)/ih)
// and their one-sided twisted products with polynomials.  This class of
// functions is closed under left/right multiplication by polynomial ordered
// expressions: the bidifferential series terminates on the polynomial side.

#include <utility>
#include <vector>

#include "weylstar/core.hpp"

namespace weylstar {

// Symmetric quadratic form Q(u,v) = uu*u^2 + 2*uv*u*v + vv*v^2.
struct QuadForm {
    cplx uu{0.0};
    cplx uv{0.0};
    cplx vv{0.0};

    cplx eval(cplx u, cplx v) const { return uu * u * u + 2.0 * uv * u * v + vv * v * v; }

    WeylPoly d_du() const {
        WeylPoly p;
        p.add_term(1, 0, 2.0 * uu);
        p.add_term(0, 1, 2.0 * uv);
        return p;
    }
    WeylPoly d_dv() const {
        WeylPoly p;
        p.add_term(1, 0, 2.0 * uv);
        p.add_term(0, 1, 2.0 * vv);
        return p;
    }

    static double distance(const QuadForm& a, const QuadForm& b) {
        return std::max({std::abs(a.uu - b.uu), std::abs(a.uv - b.uv), std::abs(a.vv - b.vv)});
    }
};

struct GaussPoly {
    cplx amp{1.0};
    QuadForm quad{};
    WeylPoly poly = WeylPoly::one();
    int sign = +1; // tracked square-root sheet relative to the principal branch

    static GaussPoly constant(cplx c) {
        GaussPoly g;
        g.amp = c;
        return g;
    }

    bool is_pure_gaussian() const { return poly.is_one(); }

    cplx eval(cplx u, cplx v, const HbarConfig& h = HbarConfig()) const {
        return double(sign) * amp * poly.eval(u, v) * std::exp(quad.eval(u, v) / h.ih());
    }
};

namespace detail {

// d_u applied to P * exp(Q/ih): returns the new polynomial factor.
inline WeylPoly gauss_du_poly(const WeylPoly& P, const QuadForm& Q, const HbarConfig& h) {
    return P.d_du() + (1.0 / h.ih()) * (P * Q.d_du());
}
inline WeylPoly gauss_dv_poly(const WeylPoly& P, const QuadForm& Q, const HbarConfig& h) {
    return P.d_dv() + (1.0 / h.ih()) * (P * Q.d_dv());
}

// Table of polynomial factors of d_u^m d_v^n (P exp(Q/ih)) for m,n <= order.
inline std::vector<std::vector<WeylPoly>> gauss_derivative_table(const WeylPoly& P,
                                                                 const QuadForm& Q,
                                                                 const HbarConfig& h,
                                                                 int order) {
    std::vector<std::vector<WeylPoly>> t(order + 1, std::vector<WeylPoly>(order + 1));
    t[0][0] = P;
    for (int m = 1; m <= order; ++m) t[m][0] = gauss_du_poly(t[m - 1][0], Q, h);
    for (int m = 0; m <= order; ++m)
        for (int n = 1; n <= order; ++n) t[m][n] = gauss_dv_poly(t[m][n - 1], Q, h);
    return t;
}

} // namespace detail

// f *_K G for polynomial f; the series terminates at deg f.
inline GaussPoly star_left(const WeylPoly& f, const GaussPoly& G, const ExprParam& K,
                           const HbarConfig& h = HbarConfig()) {
    int kmax = f.degree();
    auto df = detail::derivative_table(f, kmax);
    auto dG = detail::gauss_derivative_table(G.poly, G.quad, h, kmax);

    cplx l11 = K.lambda11(), l12 = K.lambda12(), l21 = K.lambda21(), l22 = K.lambda22();
    cplx base = h.ih() * 0.5;

    WeylPoly acc;
    for (int a = 0; a <= kmax; ++a)
        for (int b = 0; a + b <= kmax; ++b)
            for (int c = 0; a + b + c <= kmax; ++c)
                for (int d = 0; a + b + c + d <= kmax; ++d) {
                    const WeylPoly& Ff = df[a + b][c + d];
                    if (Ff.is_zero()) continue;
                    const WeylPoly& Gg = dG[a + c][b + d];
                    if (Gg.is_zero()) continue;
                    cplx coef = 1.0;
                    for (int n = 0; n < a; ++n) coef *= base * l11;
                    for (int n = 0; n < b; ++n) coef *= base * l12;
                    for (int n = 0; n < c; ++n) coef *= base * l21;
                    for (int n = 0; n < d; ++n) coef *= base * l22;
                    coef /= detail::factorial(a) * detail::factorial(b) *
                            detail::factorial(c) * detail::factorial(d);
                    acc += coef * (Ff * Gg);
                }
    GaussPoly r = G;
    r.poly = acc;
    return r;
}

// G *_K f for polynomial f; the series terminates at deg f.
inline GaussPoly star_right(const GaussPoly& G, const WeylPoly& f, const ExprParam& K,
                            const HbarConfig& h = HbarConfig()) {
    int kmax = f.degree();
    auto dG = detail::gauss_derivative_table(G.poly, G.quad, h, kmax);
    auto df = detail::derivative_table(f, kmax);

    cplx l11 = K.lambda11(), l12 = K.lambda12(), l21 = K.lambda21(), l22 = K.lambda22();
    cplx base = h.ih() * 0.5;

    WeylPoly acc;
    for (int a = 0; a <= kmax; ++a)
        for (int b = 0; a + b <= kmax; ++b)
            for (int c = 0; a + b + c <= kmax; ++c)
                for (int d = 0; a + b + c + d <= kmax; ++d) {
                    const WeylPoly& Gg = dG[a + b][c + d];
                    if (Gg.is_zero()) continue;
                    const WeylPoly& Ff = df[a + c][b + d];
                    if (Ff.is_zero()) continue;
                    cplx coef = 1.0;
                    for (int n = 0; n < a; ++n) coef *= base * l11;
                    for (int n = 0; n < b; ++n) coef *= base * l12;
                    for (int n = 0; n < c; ++n) coef *= base * l21;
                    for (int n = 0; n < d; ++n) coef *= base * l22;
                    coef /= detail::factorial(a) * detail::factorial(b) *
                            detail::factorial(c) * detail::factorial(d);
                    acc += coef * (Gg * Ff);
                }
    GaussPoly r = G;
    r.poly = acc;
    return r;
}

// Single-generator products, the hot path of word realization.  The general
// bidifferential sum collapses to one multiplication and two derivatives.
inline void star_left_gen_inplace(char gen, GaussPoly& G, const ExprParam& K,
                                  const HbarConfig& h) {
    cplx base = h.ih() * 0.5;
    cplx ca = (gen == 'u') ? base * K.lambda11() : base * K.lambda21();
    cplx cb = (gen == 'u') ? base * K.lambda12() : base * K.lambda22();
    WeylPoly r = (gen == 'u') ? G.poly.shifted(1, 0, 1.0) : G.poly.shifted(0, 1, 1.0);
    if (ca != cplx(0.0)) r += ca * detail::gauss_du_poly(G.poly, G.quad, h);
    if (cb != cplx(0.0)) r += cb * detail::gauss_dv_poly(G.poly, G.quad, h);
    G.poly = std::move(r);
}

inline void star_right_gen_inplace(GaussPoly& G, char gen, const ExprParam& K,
                                   const HbarConfig& h) {
    cplx base = h.ih() * 0.5;
    cplx ca = (gen == 'u') ? base * K.lambda11() : base * K.lambda12();
    cplx cb = (gen == 'u') ? base * K.lambda21() : base * K.lambda22();
    WeylPoly r = (gen == 'u') ? G.poly.shifted(1, 0, 1.0) : G.poly.shifted(0, 1, 1.0);
    if (ca != cplx(0.0)) r += ca * detail::gauss_du_poly(G.poly, G.quad, h);
    if (cb != cplx(0.0)) r += cb * detail::gauss_dv_poly(G.poly, G.quad, h);
    G.poly = std::move(r);
}

// Pointwise evaluation grid standing in for Hol(C^2) on a compact set.
struct EvalGrid {
    std::vector<std::pair<cplx, cplx>> points;
    std::vector<cplx> values;

    static EvalGrid default_grid() {
        // 5x5 cross of real and imaginary points, |u|,|v| <= 1.
        static const cplx us[5] = {{-1.0, 0.0}, {-0.5, 0.0}, {0.25, 0.0}, {0.0, 0.5}, {0.0, 1.0}};
        static const cplx vs[5] = {{0.0, -1.0}, {-0.5, 0.0}, {0.1, 0.0}, {0.5, 0.0}, {1.0, 0.0}};
        EvalGrid g;
        for (auto& u : us)
            for (auto& v : vs) g.points.emplace_back(u, v);
        g.values.assign(g.points.size(), cplx(0.0));
        return g;
    }

    static double distance(const EvalGrid& a, const EvalGrid& b) {
        double m = 0.0;
        for (size_t i = 0; i < a.values.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
        return m;
    }

    double max_abs() const {
        double m = 0.0;
        for (auto& v : values) m = std::max(m, std::abs(v));
        return m;
    }

    EvalGrid& operator+=(const EvalGrid& o) {
        for (size_t i = 0; i < values.size(); ++i) values[i] += o.values[i];
        return *this;
    }
    EvalGrid& operator-=(const EvalGrid& o) {
        for (size_t i = 0; i < values.size(); ++i) values[i] -= o.values[i];
        return *this;
    }
    EvalGrid& operator*=(cplx s) {
        for (auto& v : values) v *= s;
        return *this;
    }
};

inline EvalGrid eval_on_grid(const GaussPoly& G, const EvalGrid& grid,
                             const HbarConfig& h = HbarConfig()) {
    EvalGrid out;
    out.points = grid.points;
    out.values.reserve(grid.points.size());
    for (auto& [u, v] : grid.points) out.values.push_back(G.eval(u, v, h));
    return out;
}

} // namespace weylstar
