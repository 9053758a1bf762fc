#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "weylstar/core.hpp"

using namespace weylstar;

namespace {

WeylPoly random_poly(std::mt19937_64& rng, int max_deg, int terms) {
    std::uniform_int_distribution<int> deg(0, max_deg);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    WeylPoly p;
    for (int t = 0; t < terms; ++t) {
        int i = deg(rng), j = deg(rng);
        if (i + j > max_deg) continue;
        p.add_term(i, j, cplx(coef(rng), coef(rng)));
    }
    if (p.is_zero()) p.add_term(0, 0, 1.0);
    return p;
}

ExprParam random_param(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> c(-1.5, 1.5);
    return ExprParam(cplx(c(rng), 0.3 * c(rng)), cplx(c(rng), 0.3 * c(rng)),
                     cplx(c(rng), 0.3 * c(rng)));
}

} // namespace

TEST_CASE("star product first order") {
    HbarConfig h;
    ExprParam K(0.4, 0.7, -0.2);

    // u * v = uv + (ih/2)(c-1)
    WeylPoly uv = star_product(WeylPoly::u(), WeylPoly::v(), K, h);
    CHECK(std::abs(uv.coeff(1, 1) - cplx(1.0)) < 1e-15);
    CHECK(std::abs(uv.coeff(0, 0) - h.ih() * 0.5 * (K.c - 1.0)) < 1e-15);

    // u*v - v*u = -ih for every K
    WeylPoly vu = star_product(WeylPoly::v(), WeylPoly::u(), K, h);
    WeylPoly comm = uv - vu;
    CHECK(std::abs(comm.coeff(0, 0) + h.ih()) < 1e-15);
    CHECK(comm.degree() == 0);

    // unit
    WeylPoly f = WeylPoly::monomial(2, 1, cplx(0.3, -1.0));
    CHECK(WeylPoly::distance(star_product(f, WeylPoly::one(), K, h), f) < 1e-15);
    CHECK(WeylPoly::distance(star_product(WeylPoly::one(), f, K, h), f) < 1e-15);
}

TEST_CASE("star product associativity") {
    HbarConfig h;
    std::mt19937_64 rng(42);
    for (int rep = 0; rep < 25; ++rep) {
        ExprParam K = random_param(rng);
        WeylPoly f = random_poly(rng, 6, 5);
        WeylPoly g = random_poly(rng, 6, 5);
        WeylPoly k = random_poly(rng, 6, 5);
        WeylPoly lhs = star_product(star_product(f, g, K, h), k, K, h);
        WeylPoly rhs = star_product(f, star_product(g, k, K, h), K, h);
        REQUIRE(WeylPoly::distance(lhs, rhs) < 1e-12);
    }
}

TEST_CASE("intertwiner") {
    HbarConfig h;
    ExprParam K0(0, 0, 0);
    ExprParam K1(1, 0, 0);

    // identity
    WeylPoly f = WeylPoly::monomial(3, 2, 1.0) + WeylPoly::monomial(1, 0, cplx(0, 2));
    CHECK(WeylPoly::distance(intertwine(f, K0, K0, h), f) < 1e-15);

    // u^2 from K=0 to K'=diag(1,0): single second-derivative term
    WeylPoly u2 = WeylPoly::monomial(2, 0, 1.0);
    WeylPoly r = intertwine(u2, K0, K1, h);
    CHECK(std::abs(r.coeff(2, 0) - 1.0) < 1e-15);
    CHECK(std::abs(r.coeff(0, 0) - h.ih() * 0.5) < 1e-15);

    // second derivatives kill linear polynomials
    std::mt19937_64 rng(7);
    WeylPoly lin = WeylPoly::u() + WeylPoly::v() * cplx(2.0, 1.0) + WeylPoly::constant(3.0);
    CHECK(WeylPoly::distance(intertwine(lin, K0, random_param(rng)), lin) < 1e-15);
}

TEST_CASE("intertwiner homomorphism and cocycle") {
    HbarConfig h;
    std::mt19937_64 rng(99);
    for (int rep = 0; rep < 15; ++rep) {
        ExprParam K = random_param(rng), K2 = random_param(rng), K3 = random_param(rng);
        WeylPoly f = random_poly(rng, 5, 4);
        WeylPoly g = random_poly(rng, 5, 4);

        WeylPoly lhs = intertwine(star_product(f, g, K, h), K, K2, h);
        WeylPoly rhs = star_product(intertwine(f, K, K2, h), intertwine(g, K, K2, h), K2, h);
        REQUIRE(WeylPoly::distance(lhs, rhs) < 1e-12);

        WeylPoly two_step = intertwine(intertwine(f, K, K2, h), K2, K3, h);
        WeylPoly one_step = intertwine(f, K, K3, h);
        REQUIRE(WeylPoly::distance(two_step, one_step) < 1e-13);
    }
}

TEST_CASE("symmetrized product") {
    HbarConfig h;
    ExprParam K(0.1, 2.0, -0.3);
    WeylPoly s = symm_uv(K, h);
    CHECK(std::abs(s.coeff(1, 1) - 1.0) < 1e-15);
    CHECK(std::abs(s.coeff(0, 0) - h.ih()) < 1e-15); // c = 2 -> ih

    ExprParam K0(0, 0, 0);
    CHECK(symm_uv(K0, h).coeff(0, 0) == cplx(0.0));

    WeylPoly avg = star_product(WeylPoly::u(), WeylPoly::v(), K, h) +
                   star_product(WeylPoly::v(), WeylPoly::u(), K, h);
    avg *= 0.5;
    CHECK(WeylPoly::distance(avg, s) < 1e-15);
}

TEST_CASE("pochhammer conventions") {
    CHECK(pochhammer(cplx(0.3, 0.7), 0) == cplx(1.0));
    CHECK(std::abs(pochhammer(cplx(0.5), 2) - cplx(0.75)) < 1e-15);
    cplx a(1.3, -0.2);
    CHECK(std::abs(pochhammer(a, -1) - (a - 1.0)) < 1e-15);
    CHECK(std::abs(pochhammer(a, -3) - (a - 1.0) * (a - 2.0) * (a - 3.0)) < 1e-14);
}

TEST_CASE("factorial identities") {
    HbarConfig h;
    ExprParam K(0.5, 0.3, -0.4);
    WeylPoly H = h_poly(K, h);
    cplx inv_ih = 1.0 / h.ih();

    for (int n = 1; n <= 4; ++n) {
        // (1/ih)^n u^n * v^n = (H - 1/2)(H - 3/2)...(H - (2n-1)/2)
        WeylPoly lhs = star_product(star_power_gen('u', n, K, h), star_power_gen('v', n, K, h), K, h);
        cplx scale = 1.0;
        for (int k = 0; k < n; ++k) scale *= inv_ih;
        lhs *= scale;
        WeylPoly rhs = WeylPoly::one();
        for (int j = 1; j <= n; ++j) {
            WeylPoly factor = H - WeylPoly::constant((2.0 * j - 1.0) / 2.0);
            rhs = star_product(rhs, factor, K, h);
        }
        REQUIRE(WeylPoly::distance(lhs, rhs) < 1e-12);

        // and v^n * u^n with + signs
        WeylPoly lhs2 =
            star_product(star_power_gen('v', n, K, h), star_power_gen('u', n, K, h), K, h);
        lhs2 *= scale;
        WeylPoly rhs2 = WeylPoly::one();
        for (int j = 1; j <= n; ++j) {
            WeylPoly factor = H + WeylPoly::constant((2.0 * j - 1.0) / 2.0);
            rhs2 = star_product(rhs2, factor, K, h);
        }
        REQUIRE(WeylPoly::distance(lhs2, rhs2) < 1e-12);
    }
}
