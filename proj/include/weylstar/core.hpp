#pragma once

// Exact polynomial layer of the Weyl algebra: ordered expressions of
// polynomial elements, the twisted product, intertwiners between expression
// parameters, and the Pochhammer conventions used by the matrix elements.

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "weylstar/errors.hpp"

namespace weylstar {

using cplx = std::complex<double>;

inline constexpr cplx I{0.0, 1.0};

struct HbarConfig {
    double hbar = 1.0;

    HbarConfig() = default;
    explicit HbarConfig(double h) : hbar(h) {
        if (!(h > 0.0)) throw ValidationError("hbar must be positive");
    }
    cplx ih() const { return cplx(0.0, hbar); }
};

// Expression parameter K = [[delta, c], [c, delta_prime]].  The product is
// twisted by Lambda = K + J with J = [[0,-1],[1,0]].
struct ExprParam {
    cplx delta{0.0};
    cplx c{0.0};
    cplx delta_prime{0.0};

    ExprParam() = default;
    ExprParam(cplx d, cplx cc, cplx dp) : delta(d), c(cc), delta_prime(dp) {}

    cplx lambda11() const { return delta; }
    cplx lambda12() const { return c - 1.0; }
    cplx lambda21() const { return c + 1.0; }
    cplx lambda22() const { return delta_prime; }
};

// Monomial key with graded-lex ordering so term iteration (and hence all
// serialized output) is deterministic.
struct MonoKey {
    int i = 0;
    int j = 0;
    friend bool operator==(const MonoKey&, const MonoKey&) = default;
};

struct GradedLess {
    bool operator()(const MonoKey& a, const MonoKey& b) const {
        int da = a.i + a.j, db = b.i + b.j;
        if (da != db) return da < db;
        if (a.i != b.i) return a.i > b.i;
        return a.j < b.j;
    }
};

// Sparse bivariate polynomial in (u, v) with complex coefficients, stored as
// a graded-lex-sorted flat vector.  Zero coefficients are never stored.
class WeylPoly {
public:
    using Terms = std::vector<std::pair<MonoKey, cplx>>;

    WeylPoly() = default;

    static WeylPoly constant(cplx c) {
        WeylPoly p;
        p.set(0, 0, c);
        return p;
    }
    static WeylPoly one() { return constant(1.0); }
    static WeylPoly u() { return monomial(1, 0, 1.0); }
    static WeylPoly v() { return monomial(0, 1, 1.0); }
    static WeylPoly monomial(int i, int j, cplx c) {
        WeylPoly p;
        p.set(i, j, c);
        return p;
    }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_one() const {
        return terms_.size() == 1 && terms_.front().first == MonoKey{0, 0} &&
               terms_.front().second == cplx(1.0);
    }

    cplx coeff(int i, int j) const {
        auto it = find({i, j});
        return it == terms_.end() || !(it->first == MonoKey{i, j}) ? cplx(0.0) : it->second;
    }

    void set(int i, int j, cplx c) {
        if (i < 0 || j < 0) throw ValidationError("negative monomial exponent");
        MonoKey key{i, j};
        auto it = find(key);
        if (it != terms_.end() && it->first == key) {
            if (c == cplx(0.0))
                terms_.erase(it);
            else
                it->second = c;
        } else if (c != cplx(0.0)) {
            terms_.insert(it, {key, c});
        }
    }

    void add_term(int i, int j, cplx c) {
        if (c == cplx(0.0)) return;
        MonoKey key{i, j};
        auto it = find(key);
        if (it != terms_.end() && it->first == key) {
            it->second += c;
            if (it->second == cplx(0.0)) terms_.erase(it);
        } else {
            terms_.insert(it, {key, c});
        }
    }

    int degree() const {
        // graded order: the last term carries the top degree
        return terms_.empty() ? 0 : terms_.back().first.i + terms_.back().first.j;
    }

    WeylPoly& operator+=(const WeylPoly& o) { return merge(o, 1.0); }
    WeylPoly& operator-=(const WeylPoly& o) { return merge(o, -1.0); }

    WeylPoly& operator*=(cplx s) {
        if (s == cplx(0.0)) {
            terms_.clear();
            return *this;
        }
        for (auto& [k, c] : terms_) c *= s;
        return *this;
    }

    friend WeylPoly operator+(WeylPoly a, const WeylPoly& b) { return a += b; }
    friend WeylPoly operator-(WeylPoly a, const WeylPoly& b) { return a -= b; }
    friend WeylPoly operator*(WeylPoly a, cplx s) { return a *= s; }
    friend WeylPoly operator*(cplx s, WeylPoly a) { return a *= s; }

    // Plain commutative product (no twist).
    friend WeylPoly operator*(const WeylPoly& a, const WeylPoly& b) {
        WeylPoly r;
        if (a.terms_.empty() || b.terms_.empty()) return r;
        if (b.terms_.size() == 1) {
            auto& [kb, cb] = b.terms_.front();
            r = a.shifted(kb.i, kb.j, cb);
            return r;
        }
        for (auto& [ka, ca] : a.terms_) r.merge(b.shifted(ka.i, ka.j, ca), 1.0);
        return r;
    }

    // this * c * u^i v^j (order-preserving).
    WeylPoly shifted(int i, int j, cplx c) const {
        WeylPoly r;
        r.terms_.reserve(terms_.size());
        for (auto& [k, cc] : terms_) r.terms_.push_back({{k.i + i, k.j + j}, cc * c});
        return r;
    }

    WeylPoly d_du() const {
        WeylPoly r;
        r.terms_.reserve(terms_.size());
        for (auto& [k, c] : terms_)
            if (k.i > 0) r.terms_.push_back({{k.i - 1, k.j}, c * double(k.i)});
        return r;
    }
    WeylPoly d_dv() const {
        WeylPoly r;
        r.terms_.reserve(terms_.size());
        for (auto& [k, c] : terms_)
            if (k.j > 0) r.terms_.push_back({{k.i, k.j - 1}, c * double(k.j)});
        return r;
    }

    cplx eval(cplx uu, cplx vv) const {
        if (terms_.empty()) return 0.0;
        int d = degree();
        cplx up[kMaxEvalDeg + 1], vp[kMaxEvalDeg + 1];
        int dd = std::min(d, kMaxEvalDeg);
        up[0] = vp[0] = 1.0;
        for (int n = 1; n <= dd; ++n) {
            up[n] = up[n - 1] * uu;
            vp[n] = vp[n - 1] * vv;
        }
        cplx acc = 0.0;
        for (auto& [k, c] : terms_) {
            if (k.i <= kMaxEvalDeg && k.j <= kMaxEvalDeg) {
                acc += c * up[k.i] * vp[k.j];
            } else {
                cplx t = c;
                for (int n = 0; n < k.i; ++n) t *= uu;
                for (int n = 0; n < k.j; ++n) t *= vv;
                acc += t;
            }
        }
        return acc;
    }

    double max_abs_coeff() const {
        double m = 0.0;
        for (auto& [k, c] : terms_) m = std::max(m, std::abs(c));
        return m;
    }

    // Coefficientwise max |a - b|.
    static double distance(const WeylPoly& a, const WeylPoly& b) {
        WeylPoly d = a - b;
        return d.max_abs_coeff();
    }

private:
    Terms::iterator find(MonoKey key) {
        return std::lower_bound(terms_.begin(), terms_.end(), key,
                                [](const auto& t, const MonoKey& k) {
                                    return GradedLess{}(t.first, k);
                                });
    }
    Terms::const_iterator find(MonoKey key) const {
        return std::lower_bound(terms_.begin(), terms_.end(), key,
                                [](const auto& t, const MonoKey& k) {
                                    return GradedLess{}(t.first, k);
                                });
    }

    WeylPoly& merge(const WeylPoly& o, cplx s) {
        if (o.terms_.empty()) return *this;
        Terms out;
        out.reserve(terms_.size() + o.terms_.size());
        auto a = terms_.cbegin(), ae = terms_.cend();
        auto b = o.terms_.cbegin(), be = o.terms_.cend();
        GradedLess lt;
        while (a != ae && b != be) {
            if (lt(a->first, b->first)) {
                out.push_back(*a++);
            } else if (lt(b->first, a->first)) {
                out.push_back({b->first, s * b->second});
                ++b;
            } else {
                cplx c = a->second + s * b->second;
                if (c != cplx(0.0)) out.push_back({a->first, c});
                ++a;
                ++b;
            }
        }
        out.insert(out.end(), a, ae);
        for (; b != be; ++b) out.push_back({b->first, s * b->second});
        terms_ = std::move(out);
        return *this;
    }

    static constexpr int kMaxEvalDeg = 24;

    Terms terms_;
};

namespace detail {

// Table of partial derivatives d_u^m d_v^n f for m,n <= order.
inline std::vector<std::vector<WeylPoly>> derivative_table(const WeylPoly& f, int order) {
    std::vector<std::vector<WeylPoly>> t(order + 1, std::vector<WeylPoly>(order + 1));
    t[0][0] = f;
    for (int m = 1; m <= order; ++m) t[m][0] = t[m - 1][0].d_du();
    for (int m = 0; m <= order; ++m)
        for (int n = 1; n <= order; ++n) t[m][n] = t[m][n - 1].d_dv();
    return t;
}

inline double factorial(int n) {
    double r = 1.0;
    for (int k = 2; k <= n; ++k) r *= k;
    return r;
}

} // namespace detail

// The twisted product of two polynomial ordered expressions.  The
// bidifferential series terminates at total order min(deg f, deg g).
inline WeylPoly star_product(const WeylPoly& f, const WeylPoly& g, const ExprParam& K,
                             const HbarConfig& h = HbarConfig()) {
    int kmax = std::min(f.degree(), g.degree());
    auto df = detail::derivative_table(f, kmax);
    auto dg = detail::derivative_table(g, kmax);

    cplx l11 = K.lambda11(), l12 = K.lambda12(), l21 = K.lambda21(), l22 = K.lambda22();
    cplx base = h.ih() * 0.5;

    WeylPoly result;
    for (int a = 0; a <= kmax; ++a)
        for (int b = 0; a + b <= kmax; ++b)
            for (int c = 0; a + b + c <= kmax; ++c)
                for (int d = 0; a + b + c + d <= kmax; ++d) {
                    const WeylPoly& Ff = df[a + b][c + d];
                    const WeylPoly& Gg = dg[a + c][b + d];
                    if (Ff.is_zero() || Gg.is_zero()) continue;
                    cplx coef = 1.0;
                    for (int n = 0; n < a; ++n) coef *= base * l11;
                    for (int n = 0; n < b; ++n) coef *= base * l12;
                    for (int n = 0; n < c; ++n) coef *= base * l21;
                    for (int n = 0; n < d; ++n) coef *= base * l22;
                    coef /= detail::factorial(a) * detail::factorial(b) *
                            detail::factorial(c) * detail::factorial(d);
                    result += coef * (Ff * Gg);
                }
    return result;
}

// Intertwiner between expression parameters: exp((ih/4) sum (K'-K)_ij d_i d_j).
// Finite on polynomials.
inline WeylPoly intertwine(const WeylPoly& f, const ExprParam& K, const ExprParam& K2,
                           const HbarConfig& h = HbarConfig()) {
    cplx d11 = K2.delta - K.delta;
    cplx d12 = K2.c - K.c;
    cplx d22 = K2.delta_prime - K.delta_prime;
    cplx s = h.ih() * 0.25;

    WeylPoly result = f;
    WeylPoly term = f;
    for (int m = 1;; ++m) {
        WeylPoly next = d11 * term.d_du().d_du() + (2.0 * d12) * term.d_du().d_dv() +
                        d22 * term.d_dv().d_dv();
        next *= s / double(m);
        if (next.is_zero()) break;
        result += next;
        term = next;
    }
    return result;
}

// K-expression of u o v = (u*v + v*u)/2.
inline WeylPoly symm_uv(const ExprParam& K, const HbarConfig& h = HbarConfig()) {
    WeylPoly p = WeylPoly::monomial(1, 1, 1.0);
    p.add_term(0, 0, h.ih() * 0.5 * K.c);
    return p;
}

// K-expression of H = (1/ih) u o v.
inline WeylPoly h_poly(const ExprParam& K, const HbarConfig& h = HbarConfig()) {
    WeylPoly p = symm_uv(K, h);
    p *= 1.0 / h.ih();
    return p;
}

// Pochhammer symbol with the extended convention
// (a)_n = a(a+1)...(a+n-1), (a)_0 = 1, (a)_{-n} = (a-1)(a-2)...(a-n).
inline cplx pochhammer(cplx a, long n) {
    cplx r = 1.0;
    if (n >= 0)
        for (long k = 0; k < n; ++k) r *= a + double(k);
    else
        for (long k = 1; k <= -n; ++k) r *= a - double(k);
    return r;
}

// K-expression of the n-fold twisted power of a single generator.
inline WeylPoly star_power_gen(char gen, int n, const ExprParam& K,
                               const HbarConfig& h = HbarConfig()) {
    if (n < 0) throw ValidationError("negative star power");
    WeylPoly g = (gen == 'u') ? WeylPoly::u() : WeylPoly::v();
    WeylPoly r = WeylPoly::one();
    for (int k = 0; k < n; ++k) r = star_product(g, r, K, h);
    return r;
}

} // namespace weylstar
