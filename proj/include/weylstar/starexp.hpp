#pragma once

// Closed form of the star-exponential of the quadratic generator, its
// singular set, branch-tracked analytic continuation along paths, the
// exchanging interval, parameter classification, the polar element, and an
// independent Riccati-flow integrator for cross checks.
//
// Variable convention: everything in this header lives in the t-variable of
// the 2H generator, i.e. exp_2H(t) is the expression of e_*^{t (2/ih) u o v}.
// Callers working with the generator H = (1/ih) u o v substitute t = zeta/2.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "weylstar/gauss.hpp"

namespace weylstar {

namespace detail {

// Radicand of the closed-form amplitude: Delta^2 - (e^t - e^-t)^2 dd'.
inline cplx radicand(cplx t, const ExprParam& K) {
    cplx ep = std::exp(t), em = std::exp(-t);
    cplx sh = ep - em;
    cplx Delta = ep + em - K.c * sh;
    return Delta * Delta - sh * sh * K.delta * K.delta_prime;
}

inline cplx radicand_derivative(cplx t, const ExprParam& K) {
    cplx ep = std::exp(t), em = std::exp(-t);
    cplx sh = ep - em, ch = ep + em;
    cplx Delta = ch - K.c * sh;
    cplx dDelta = sh - K.c * ch;
    return 2.0 * Delta * dDelta - 2.0 * sh * ch * K.delta * K.delta_prime;
}

inline double radicand_scale(cplx t) {
    double m = std::abs(std::exp(t)) + std::abs(std::exp(-t));
    return m * m;
}

} // namespace detail

// Roots w = e^{2t} of the singular-set equation
// (1-c) w + (1+c) = +-sqrt(dd') (w - 1).
struct SingularRoots {
    cplx w_plus;
    cplx w_minus;
};

inline SingularRoots singular_roots(const ExprParam& K) {
    cplx r = std::sqrt(K.delta * K.delta_prime);
    cplx den_p = (1.0 - K.c) - r;
    cplx den_m = (1.0 - K.c) + r;
    double scale = 1.0 + std::abs(K.c) + std::abs(r);
    if (std::abs(den_p) < 1e-12 * scale || std::abs(den_m) < 1e-12 * scale)
        throw DegenerateParameter("singular-root denominator vanishes");
    SingularRoots roots;
    roots.w_plus = -((1.0 + K.c) + r) / den_p;
    roots.w_minus = -((1.0 + K.c) - r) / den_m;
    if (std::abs(roots.w_plus) < 1e-12 || std::abs(roots.w_minus) < 1e-12)
        throw DegenerateParameter("singular root at w = 0");
    return roots;
}

// Discrete singular set in the t-plane: two columns Re t in {a, b}, points
// pi-periodically spaced along the imaginary direction.
struct SingularSet {
    // Each column: real part and base height (points at height + k*pi).
    struct Column {
        double re;
        double height;
    };
    std::array<Column, 2> columns;

    double distance(cplx t) const {
        double best = 1e300;
        for (const auto& col : columns) {
            double dy = std::imag(t) - col.height;
            dy -= std::floor(dy / M_PI + 0.5) * M_PI; // nearest lattice offset
            double dx = std::real(t) - col.re;
            best = std::min(best, std::hypot(dx, dy));
        }
        return best;
    }

    // Minimum distance from the straight segment [t0, t1] to the set.
    double segment_distance(cplx t0, cplx t1, int samples = 8) const {
        double best = 1e300;
        for (int k = 0; k <= samples; ++k) {
            double s = double(k) / samples;
            best = std::min(best, distance(t0 + s * (t1 - t0)));
        }
        return best;
    }
};

inline SingularSet singular_set(const ExprParam& K) {
    SingularRoots w = singular_roots(K);
    SingularSet s;
    s.columns[0] = {0.5 * std::log(std::abs(w.w_minus)), 0.5 * std::arg(w.w_minus)};
    s.columns[1] = {0.5 * std::log(std::abs(w.w_plus)), 0.5 * std::arg(w.w_plus)};
    return s;
}

// Exchanging interval (a, b) in the t-variable: sorted real parts of the two
// singular columns.
inline std::pair<double, double> exchanging_interval(const ExprParam& K) {
    SingularRoots w = singular_roots(K);
    double aa = 0.5 * std::log(std::abs(w.w_minus));
    double bb = 0.5 * std::log(std::abs(w.w_plus));
    if (aa > bb) std::swap(aa, bb);
    return {aa, bb};
}

enum class KClassTag { Kplus, Kzero, Kminus, Degenerate };

struct KClass {
    KClassTag tag = KClassTag::Degenerate;
    double a = 0.0;
    double b = 0.0;
};

inline const char* to_string(KClassTag t) {
    switch (t) {
        case KClassTag::Kplus: return "Kplus";
        case KClassTag::Kzero: return "Kzero";
        case KClassTag::Kminus: return "Kminus";
        default: return "Degenerate";
    }
}

inline KClass classify(const ExprParam& K) {
    auto [a, b] = exchanging_interval(K);
    KClass c;
    c.a = a;
    c.b = b;
    const double eps = 1e-12;
    if (a > eps)
        c.tag = KClassTag::Kplus;
    else if (b < -eps)
        c.tag = KClassTag::Kminus;
    else if (a < -eps && b > eps)
        c.tag = KClassTag::Kzero;
    else
        c.tag = KClassTag::Degenerate;
    return c;
}

namespace detail {

// Gaussian data of the closed form given t and the chosen sqrt of the
// radicand.
inline GaussPoly exp_2H_from_sqrt(cplx t, cplx sqrt_f, const ExprParam& K) {
    cplx f = sqrt_f * sqrt_f;
    cplx sh = std::exp(t) - std::exp(-t);
    cplx Delta = std::exp(t) + std::exp(-t) - K.c * sh;
    cplx g = sh / f;
    GaussPoly G;
    G.amp = 2.0 / sqrt_f;
    G.quad.uu = g * sh * K.delta_prime;
    G.quad.vv = g * sh * K.delta;
    G.quad.uv = g * Delta;
    return G;
}

inline constexpr double kSingularMargin = 1e-3;

} // namespace detail

// Principal-branch expression of e_*^{t (2/ih) u o v}: positive root at t=0,
// principal square root of the radicand elsewhere.
inline GaussPoly exp_2H(cplx t, const ExprParam& K, const HbarConfig& h = HbarConfig()) {
    (void)h;
    cplx f = detail::radicand(t, K);
    if (std::abs(f) < 1e-10 * detail::radicand_scale(t))
        throw SingularPoint("exp_2H evaluated on the singular set");
    return detail::exp_2H_from_sqrt(t, std::sqrt(f), K);
}

// Polyline path in the t-plane.
struct PathZ {
    std::vector<cplx> vertices;

    static PathZ line(cplx from, cplx to) { return PathZ{{from, to}}; }
};

// Incremental branch tracker for sqrt(radicand) along paths.  The invariant
// is that successive radicand samples change argument by less than pi/2, so
// the sheet is followed without ambiguity.
class BranchTracker {
public:
    BranchTracker(const ExprParam& K, double margin = detail::kSingularMargin)
        : K_(K), sing_(singular_set(K)), margin_(margin) {
        t_ = 0.0;
        sqrt_f_ = std::sqrt(detail::radicand(t_, K_)); // = 2 at t = 0
    }

    // Start from a known point on a known sheet.
    BranchTracker(const ExprParam& K, cplx t0, cplx sqrt_f0,
                  double margin = detail::kSingularMargin)
        : K_(K), sing_(singular_set(K)), margin_(margin), t_(t0), sqrt_f_(sqrt_f0) {}

    cplx t() const { return t_; }
    cplx sqrt_f() const { return sqrt_f_; }
    const SingularSet& singulars() const { return sing_; }

    void advance_to(cplx t_next) {
        if (t_next == t_) return;
        if (sing_.segment_distance(t_, t_next, 16) < margin_)
            throw PathTooCloseToSingularity("continuation path within margin of singular set");
        step_segment(t_, t_next, 0);
        t_ = t_next;
    }

    void follow(const PathZ& path) {
        if (path.vertices.empty()) return;
        if (std::abs(path.vertices.front() - t_) > 1e-14)
            throw ValidationError("path must start at the tracker position");
        for (size_t k = 1; k < path.vertices.size(); ++k) advance_to(path.vertices[k]);
    }

    GaussPoly gauss() const { return detail::exp_2H_from_sqrt(t_, sqrt_f_, K_); }

    // Sheet relative to the principal branch at the current point.
    int sign_vs_principal() const {
        cplx p = std::sqrt(detail::radicand(t_, K_));
        return std::real(sqrt_f_ / p) > 0.0 ? +1 : -1;
    }

private:
    void step_segment(cplx from, cplx to, int depth) {
        if (depth > 48) throw PathTooCloseToSingularity("branch subdivision failed to converge");
        cplx f0 = sqrt_f_ * sqrt_f_;
        cplx f1 = detail::radicand(to, K_);
        if (std::abs(f1) < 1e-10 * detail::radicand_scale(to))
            throw PathTooCloseToSingularity("radicand vanishes on path");
        cplx ratio = f1 / f0;
        if (std::abs(std::arg(ratio)) < M_PI_2 && std::abs(ratio) > 0.25 && std::abs(ratio) < 4.0) {
            sqrt_f_ *= std::sqrt(ratio);
            return;
        }
        cplx mid = from + 0.5 * (to - from);
        step_segment(from, mid, depth + 1);
        step_segment(mid, to, depth + 1);
    }

    ExprParam K_;
    SingularSet sing_;
    double margin_;
    cplx t_;
    cplx sqrt_f_;
};

// Analytic continuation of exp_2H along a path starting at 0.  Returns the
// continued Gaussian and the sheet sign relative to the principal branch at
// the endpoint.
inline std::pair<GaussPoly, int> exp_2H_path(const PathZ& path, const ExprParam& K,
                                             const HbarConfig& h = HbarConfig()) {
    (void)h;
    if (path.vertices.empty() || std::abs(path.vertices.front()) > 1e-14)
        throw ValidationError("path must start at t = 0");
    BranchTracker tracker(K);
    tracker.follow(path);
    GaussPoly G = tracker.gauss();
    int sign = tracker.sign_vs_principal();
    // Report the principal data with the tracked sheet in `sign`.
    G.amp *= double(sign);
    G.sign = sign;
    return {G, sign};
}

// Polar element: value of exp_2H at t = i pi/2, principal root of c^2 - dd'.
inline GaussPoly polar_element(const ExprParam& K, const HbarConfig& h = HbarConfig()) {
    (void)h;
    cplx disc = K.c * K.c - K.delta * K.delta_prime;
    double scale = 1.0 + std::norm(K.c) + std::abs(K.delta * K.delta_prime);
    if (std::abs(disc) < 1e-12 * scale)
        throw DegenerateParameter("c^2 - delta delta' vanishes");
    GaussPoly G;
    G.amp = 1.0 / std::sqrt(disc);
    G.quad.uu = K.delta_prime / disc;
    G.quad.vv = K.delta / disc;
    G.quad.uv = -K.c / disc;
    return G;
}

// Riccati-flow oracle: integrates d/dt f_t = :2H:_K * f_t on the Gaussian
// ansatz (amp, Q) with classical RK4 and a step-doubling error estimate.
inline GaussPoly riccati_flow(const GaussPoly& init, cplx t_end, int steps, const ExprParam& K,
                              const HbarConfig& h = HbarConfig(), double tol = 1e-7) {
    if (!init.is_pure_gaussian())
        throw ValidationError("riccati_flow requires a pure Gaussian initial value");
    if (steps <= 0) throw ValidationError("riccati_flow requires steps > 0");

    WeylPoly gen = symm_uv(K, h) * (2.0 / h.ih());

    struct State {
        cplx amp;
        QuadForm q;
    };

    auto rhs = [&](const State& s) -> State {
        GaussPoly G;
        G.amp = 1.0;
        G.quad = s.q;
        GaussPoly R = star_left(gen, G, K, h);
        cplx r0 = R.poly.coeff(0, 0);
        cplx ruu = R.poly.coeff(2, 0);
        cplx ruv = R.poly.coeff(1, 1);
        cplx rvv = R.poly.coeff(0, 2);
        State d;
        d.amp = s.amp * r0;
        d.q.uu = h.ih() * ruu;
        d.q.uv = h.ih() * ruv * 0.5;
        d.q.vv = h.ih() * rvv;
        return d;
    };

    auto axpy = [](const State& s, const State& d, cplx k) -> State {
        State r;
        r.amp = s.amp + k * d.amp;
        r.q.uu = s.q.uu + k * d.q.uu;
        r.q.uv = s.q.uv + k * d.q.uv;
        r.q.vv = s.q.vv + k * d.q.vv;
        return r;
    };

    auto rk4_step = [&](const State& s, cplx dt) -> State {
        State k1 = rhs(s);
        State k2 = rhs(axpy(s, k1, dt * 0.5));
        State k3 = rhs(axpy(s, k2, dt * 0.5));
        State k4 = rhs(axpy(s, k3, dt));
        State r = s;
        r.amp += dt / 6.0 * (k1.amp + 2.0 * k2.amp + 2.0 * k3.amp + k4.amp);
        r.q.uu += dt / 6.0 * (k1.q.uu + 2.0 * k2.q.uu + 2.0 * k3.q.uu + k4.q.uu);
        r.q.uv += dt / 6.0 * (k1.q.uv + 2.0 * k2.q.uv + 2.0 * k3.q.uv + k4.q.uv);
        r.q.vv += dt / 6.0 * (k1.q.vv + 2.0 * k2.q.vv + 2.0 * k3.q.vv + k4.q.vv);
        return r;
    };

    State s{init.amp, init.quad};
    cplx dt = t_end / double(steps);
    for (int k = 0; k < steps; ++k) {
        State full = rk4_step(s, dt);
        State half = rk4_step(rk4_step(s, dt * 0.5), dt * 0.5);
        double err = std::abs(full.amp - half.amp) + QuadForm::distance(full.q, half.q);
        double scale = 1.0 + std::abs(half.amp);
        if (err > tol * scale)
            throw StepSizeTooLarge("riccati_flow local error above tolerance");
        s = half;
    }
    GaussPoly out;
    out.amp = s.amp;
    out.quad = s.q;
    return out;
}

// Time derivative of the closed form at t (analytic, for residual checks):
// returns (d amp/dt, dQ/dt).
inline std::pair<cplx, QuadForm> exp_2H_derivative(cplx t, const ExprParam& K) {
    cplx f = detail::radicand(t, K);
    cplx fp = detail::radicand_derivative(t, K);
    cplx ep = std::exp(t), em = std::exp(-t);
    cplx sh = ep - em, ch = ep + em;
    cplx Delta = ch - K.c * sh;
    cplx dDelta = sh - K.c * ch;

    cplx sqrt_f = std::sqrt(f);
    cplx damp = -(fp / f) * (1.0 / sqrt_f); // d/dt (2/sqrt f)

    cplx g = sh / f;
    cplx dg = ch / f - sh * fp / (f * f);
    QuadForm dQ;
    dQ.uu = (dg * sh + g * ch) * K.delta_prime;
    dQ.vv = (dg * sh + g * ch) * K.delta;
    dQ.uv = dg * Delta + g * dDelta;
    return {damp, dQ};
}

} // namespace weylstar
