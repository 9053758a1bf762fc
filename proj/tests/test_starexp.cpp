#include <catch2/catch_amalgamated.hpp>

#include "weylstar/starexp.hpp"

using namespace weylstar;

namespace {

const ExprParam kZero(0, 0, 0);
const ExprParam kKzero(0.5, 0.0, 0.5);
const ExprParam kKplus(0.5, 2.0, 0.5);
const ExprParam kKminus(0.5, -2.0, 0.5);
const ExprParam kGeneric(0.4, 0.1, 0.6);

double gauss_distance(const GaussPoly& a, const GaussPoly& b) {
    return std::abs(a.amp - b.amp) + QuadForm::distance(a.quad, b.quad) +
           WeylPoly::distance(a.poly, b.poly);
}

// Independent oracle for the exchanging interval: scan the radicand modulus
// over a grid of columns and polish the zero with Newton on the radicand.
std::pair<double, double> interval_scan_oracle(const ExprParam& K) {
    std::vector<double> roots;
    double best_re = 0.0;
    cplx best_t;
    for (int pass = 0; pass < 2; ++pass) {
        double best = 1e300;
        for (int i = 0; i <= 400; ++i) {
            double re = -2.0 + 4.0 * i / 400.0;
            if (pass == 1 && std::abs(re - roots[0]) < 0.05) continue;
            for (int j = 0; j <= 100; ++j) {
                double im = M_PI * j / 100.0;
                cplx t(re, im);
                double m = std::abs(detail::radicand(t, K));
                if (m < best) {
                    best = m;
                    best_re = re;
                    best_t = t;
                }
            }
        }
        // Newton polish on the analytic radicand
        cplx t = best_t;
        for (int it = 0; it < 60; ++it) {
            cplx f = detail::radicand(t, K);
            cplx fp = detail::radicand_derivative(t, K);
            cplx step = f / fp;
            t -= step;
            if (std::abs(step) < 1e-15) break;
        }
        roots.push_back(std::real(t));
    }
    double a = std::min(roots[0], roots[1]);
    double b = std::max(roots[0], roots[1]);
    return {a, b};
}

} // namespace

TEST_CASE("closed form basics") {
    HbarConfig h;

    // t = 0 is the constant 1 for every K
    for (const ExprParam& K : {kZero, kKzero, kKplus, kGeneric}) {
        GaussPoly G = exp_2H(0.0, K, h);
        CHECK(std::abs(G.amp - 1.0) < 1e-15);
        CHECK(QuadForm::distance(G.quad, QuadForm{}) < 1e-15);
    }

    // K = 0: sech(t) exp((2/ih) tanh(t) uv)
    for (double t : {0.3, -0.7, 1.1}) {
        GaussPoly G = exp_2H(t, kZero, h);
        CHECK(std::abs(G.amp - 1.0 / std::cosh(t)) < 1e-14);
        CHECK(std::abs(2.0 * G.quad.uv - 2.0 * std::tanh(t)) < 1e-14);
        CHECK(std::abs(G.quad.uu) < 1e-15);
        CHECK(std::abs(G.quad.vv) < 1e-15);
    }
}

TEST_CASE("exchanging interval worked examples") {
    auto [a0, b0] = exchanging_interval(kKzero);
    CHECK(std::abs(a0 + 0.5 * std::log(3.0)) < 1e-12);
    CHECK(std::abs(b0 - 0.5 * std::log(3.0)) < 1e-12);

    auto [a1, b1] = exchanging_interval(kKplus);
    CHECK(std::abs(a1 - 0.5 * std::log(7.0 / 3.0)) < 1e-12);
    CHECK(std::abs(b1 - 0.5 * std::log(5.0)) < 1e-12);

    auto [a2, b2] = exchanging_interval(kKminus);
    CHECK(std::abs(a2 + 0.5 * std::log(5.0)) < 1e-12);
    CHECK(std::abs(b2 + 0.5 * std::log(7.0 / 3.0)) < 1e-12);

    // against the scan oracle
    for (const ExprParam& K : {kKzero, kKplus, kKminus, kGeneric}) {
        auto [a, b] = exchanging_interval(K);
        auto [sa, sb] = interval_scan_oracle(K);
        CHECK(std::abs(a - sa) < 1e-10);
        CHECK(std::abs(b - sb) < 1e-10);
    }
}

TEST_CASE("classification") {
    CHECK(classify(kKzero).tag == KClassTag::Kzero);
    CHECK(classify(kKplus).tag == KClassTag::Kplus);
    CHECK(classify(kKminus).tag == KClassTag::Kminus);
    CHECK_THROWS_AS(exchanging_interval(ExprParam(1, 0, 1)), DegenerateParameter);
}

TEST_CASE("polar element") {
    HbarConfig h;
    GaussPoly P = polar_element(kKplus, h);
    // (2/sqrt 15) exp((1/ih)((2/15)u^2 + (2/15)v^2 - (16/15)uv))
    CHECK(std::abs(P.amp - 2.0 / std::sqrt(15.0)) < 1e-14);
    CHECK(std::abs(P.quad.uu - 2.0 / 15.0) < 1e-14);
    CHECK(std::abs(P.quad.vv - 2.0 / 15.0) < 1e-14);
    CHECK(std::abs(2.0 * P.quad.uv + 16.0 / 15.0) < 1e-14);

    // degenerate-adjacent sanity: dd' = 0, c = 1
    GaussPoly Q = polar_element(ExprParam(0, 1, 0.3), h);
    CHECK(std::abs(Q.amp - 1.0) < 1e-14);
    CHECK(std::abs(2.0 * Q.quad.uv + 2.0) < 1e-14);

    CHECK_THROWS_AS(polar_element(ExprParam(0.5, 0.5, 0.5), h), DegenerateParameter);

    // continuation to i pi/2 reproduces the polar Gaussian data
    BranchTracker tr(kKplus);
    tr.advance_to(cplx(0.0, M_PI_2));
    GaussPoly C = tr.gauss();
    CHECK(QuadForm::distance(C.quad, P.quad) < 1e-12);
    CHECK(std::abs(std::abs(C.amp) - std::abs(P.amp)) < 1e-12);
}

TEST_CASE("path continuation and q-scalar signs") {
    HbarConfig h;

    // straight real path on a parameter with a singular-free real axis
    auto [G1, s1] = exp_2H_path(PathZ::line(0.0, 1.0), kKzero, h);
    CHECK(s1 == +1);
    CHECK(gauss_distance(G1, exp_2H(1.0, kKzero, h)) < 1e-12);

    // eps_00^2 = e_*^{i pi (2/ih) u o v}: +1 on Kzero, -1 on Kplus/Kminus
    auto [Gz, sz] = exp_2H_path(PathZ::line(0.0, cplx(0.0, M_PI)), kKzero, h);
    CHECK(sz == +1);
    CHECK(std::abs(Gz.eval(0.3, -0.2, h) - 1.0) < 1e-12);

    auto [Gp, sp] = exp_2H_path(PathZ::line(0.0, cplx(0.0, M_PI)), kKplus, h);
    CHECK(sp == -1);
    CHECK(std::abs(Gp.eval(0.3, -0.2, h) + 1.0) < 1e-12);

    auto [Gm, sm] = exp_2H_path(PathZ::line(0.0, cplx(0.0, M_PI)), kKminus, h);
    CHECK(sm == -1);

    // loop around a single singular point flips the sheet; empty loop does not
    auto [a, b] = exchanging_interval(kKzero);
    cplx sing(b, M_PI_2);
    PathZ loop{{0.0, cplx(b - 0.4, 0.0), sing + cplx(-0.4, 0.0), sing + cplx(0.0, 0.4),
                sing + cplx(0.4, 0.0), sing + cplx(0.0, -0.4), sing + cplx(-0.4, 0.0),
                cplx(b - 0.4, 0.0), cplx(0.0, 0.0)}};
    auto [Gl, sl] = exp_2H_path(loop, kKzero, h);
    CHECK(sl == -1);

    PathZ empty_loop{{0.0, cplx(0.2, 0.0), cplx(0.2, 0.3), cplx(-0.1, 0.3), cplx(-0.1, 0.0),
                      cplx(0.0, 0.0)}};
    auto [Ge, se] = exp_2H_path(empty_loop, kKzero, h);
    CHECK(se == +1);
    CHECK(std::abs(Ge.amp - 1.0) < 1e-12);

    // margin guard
    PathZ bad{{0.0, sing}};
    CHECK_THROWS_AS(exp_2H_path(bad, kKzero, h), PathTooCloseToSingularity);
}

TEST_CASE("periodicity and decay") {
    HbarConfig h;
    // 2 pi i periodicity in the 2H variable, i pi up to tracked sign
    for (const ExprParam& K : {kKzero, kGeneric}) {
        cplx t0(0.35, 0.2);
        GaussPoly A = exp_2H(t0, K, h);
        GaussPoly B = exp_2H(t0 + cplx(0.0, M_PI), K, h);
        CHECK(QuadForm::distance(A.quad, B.quad) < 1e-10);
        CHECK(std::abs(std::abs(A.amp) - std::abs(B.amp)) < 1e-10);
    }
    // rapid decrease along real lines
    for (double t0 : {0.0, 0.7}) {
        CHECK(std::abs(exp_2H(cplx(30.0, t0), kGeneric, h).amp) < 1e-10);
        CHECK(std::abs(exp_2H(cplx(-30.0, t0), kGeneric, h).amp) < 1e-10);
    }
}

TEST_CASE("denominator vanishes exactly on the singular columns") {
    // scan check for the worked Kzero example: heights i pi/2 + i pi k
    auto [a, b] = exchanging_interval(kKzero);
    for (int k : {-1, 0, 1}) {
        double height = M_PI_2 + M_PI * k;
        CHECK(std::abs(detail::radicand(cplx(a, height), kKzero)) < 1e-8);
        CHECK(std::abs(detail::radicand(cplx(b, height), kKzero)) < 1e-8);
    }
    // and for the Kplus example the points sit at heights i pi k
    auto [a2, b2] = exchanging_interval(kKplus);
    for (int k : {-1, 0, 1}) {
        CHECK(std::abs(detail::radicand(cplx(a2, M_PI * k), kKplus)) < 1e-8);
        CHECK(std::abs(detail::radicand(cplx(b2, M_PI * k), kKplus)) < 1e-8);
    }
    CHECK_THROWS_AS(exp_2H(cplx(a, M_PI_2), kKzero), SingularPoint);
}

TEST_CASE("ODE residual of the closed form") {
    HbarConfig h;
    WeylPoly gen = symm_uv(kGeneric, h) * (2.0 / h.ih());
    for (double t : {-0.9, -0.3, 0.2, 0.8}) {
        GaussPoly G = exp_2H(t, kGeneric, h);
        GaussPoly R = star_left(gen, G, kGeneric, h);
        auto [damp, dq] = exp_2H_derivative(t, kGeneric);
        // d/dt (amp e^{Q/ih}) = (damp + amp dQ/ih) e^{Q/ih}
        WeylPoly lhs;
        lhs.add_term(0, 0, damp);
        WeylPoly dqp;
        dqp.add_term(2, 0, dq.uu);
        dqp.add_term(1, 1, 2.0 * dq.uv);
        dqp.add_term(0, 2, dq.vv);
        lhs += (G.amp / h.ih()) * dqp;
        WeylPoly rhs = R.poly;
        rhs *= G.amp;
        for (auto& [u, v] : {std::pair<cplx, cplx>{0.4, -0.3}, {cplx(0, 0.5), 0.2}}) {
            CHECK(std::abs(lhs.eval(u, v) - rhs.eval(u, v)) < 1e-8);
        }
    }
}

TEST_CASE("riccati flow oracle") {
    HbarConfig h;
    GaussPoly one = GaussPoly::constant(1.0);

    // t_end = 0 returns the initial value
    GaussPoly r0 = riccati_flow(one, 0.0, 10, kZero, h);
    CHECK(gauss_distance(r0, one) < 1e-14);

    // closed form at K = 0
    GaussPoly r = riccati_flow(one, 0.3, 200, kZero, h);
    CHECK(gauss_distance(r, exp_2H(0.3, kZero, h)) < 1e-8);

    // exponential law through the flow
    GaussPoly init = exp_2H(0.25, kGeneric, h);
    GaussPoly flowed = riccati_flow(init, 0.4, 400, kGeneric, h);
    CHECK(gauss_distance(flowed, exp_2H(0.65, kGeneric, h)) < 1e-8);

    CHECK_THROWS_AS(riccati_flow(one, 40.0, 2, kGeneric, h, 1e-12), StepSizeTooLarge);
}
