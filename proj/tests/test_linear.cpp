#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mosweb/matrix_b.hpp"
#include "testutil.hpp"

using namespace mosweb;
using G = gaussian_rational;

static gmat diag2(G a, G b) {
    gmat m(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

TEST_CASE("classify diag(4, 1/4): elliptic") {
    eigen_data ed = classify_eigenvalues(diag2(G(4), G(1, 4)));
    CHECK(ed.p == 1);
    CHECK(ed.typing.e_star == 1);
    CHECK(ed.typing.h_star == 0);
    CHECK(ed.typing.s_star == 0);
    CHECK(ed.mu[0] == G(4));
    CHECK(*ed.lambda[0] == G(2));
}

TEST_CASE("classify diag(i, -i): hyperbolic with irrational lambda") {
    eigen_data ed = classify_eigenvalues(diag2(G::i(), -G::i()));
    CHECK(ed.typing.h_star == 1);
    CHECK(ed.mu[0] == G::i());
    CHECK(!ed.lambda[0].has_value());
    CHECK(!ed.lambda_exact);
    // enclosure must contain e^{i pi/4} = (1+i)/sqrt(2): check lambda^2 = i
    complex_interval l2 = ed.lambda_enclosure[0] * ed.lambda_enclosure[0];
    CHECK((l2 - complex_interval::from_gaussian(G::i(), 128)).contains_zero());
}

TEST_CASE("classify complex quadruple for mu_s = 1+2i") {
    G mu(rational(1), rational(2));
    gmat S(4, 4);
    S(0, 0) = mu;
    S(1, 1) = mu.inv();
    S(2, 2) = mu.conj().inv();
    S(3, 3) = mu.conj();
    eigen_data ed = classify_eigenvalues(S);
    CHECK(ed.typing.s_star == 1);
    CHECK(ed.typing.e_star == 0);
    CHECK(ed.p == 2);
    CHECK(ed.mu[0] == mu);
    CHECK(ed.mu[1] == mu.conj().inv());
    // |lambda_s| > 1 and arg in (0, pi/2): lambda^2 = mu with certified enclosure
    complex_interval l = ed.lambda_enclosure[0];
    CHECK(definitely(less(real_interval::from_long(1, 128), l.norm2())));
    CHECK(definitely(l.re().sign_is(1)));
    CHECK(definitely(l.im().sign_is(1)));
}

TEST_CASE("classify rejects +-1 and repeated eigenvalues") {
    CHECK_THROWS_AS(classify_eigenvalues(diag2(G(1), G(1))), condition_error);
    CHECK_THROWS_AS(classify_eigenvalues(diag2(G(4), G(4))), condition_error);
    // negative real pair is not realizable
    CHECK_THROWS_AS(classify_eigenvalues(diag2(G(-4), G(-1, 4))), condition_error);
}

static linear_family bishop_family_gamma25() {
    // deck transformations of z2 = |z1|^2 + (2/5)(z1^2 + conj(z1)^2)
    linear_family fam;
    fam.p = 1;
    gmat t(2, 2);
    t(0, 0) = G(1);
    t(1, 0) = G(-5, 2);
    t(1, 1) = G(-1);
    fam.t1j = {t};
    gmat r(2, 2);
    r(0, 1) = G(1);
    r(1, 0) = G(1);
    fam.rho = r;
    return fam;
}

TEST_CASE("normalize_linear: Bishop gamma = 2/5") {
    linear_family fam = bishop_family_gamma25();
    validate_family(fam);
    auto nf = normalize_linear(fam);
    CHECK(nf.eigen.mu[0] == G(4));
    CHECK(*nf.eigen.lambda[0] == G(2));
    // normal forms reached exactly
    CHECK(nf.normalized.t1() == that1_matrix(nf.eigen));
    CHECK(nf.normalized.rho == rhohat_matrix(nf.eigen.typing));
    // gamma * lambda^2 - lambda + gamma = 0 for gamma = 2/5, lambda = 2
    G g(2, 5), l(2);
    CHECK((g * l * l - l + g).is_zero());
}

TEST_CASE("normalize_linear: already normalized family gives identity basis") {
    std::vector<G> lambda = {G(2), G(3)};
    eigen_data ed = classify_eigenvalues_list({G(4), G(1, 4), G(9), G(1, 9)});
    linear_family fam;
    fam.p = 2;
    fam.t1j = family_from_b(lambda, gmat::identity(2));
    fam.rho = rhohat_matrix(ed.typing);
    auto nf = normalize_linear(fam);
    CHECK(nf.basis == gmat::identity(4));
}

TEST_CASE("normalize_linear on a jordan_quadric with diagonalizable S") {
    // K = [[0, 1+i],[1-i, 0]] gives S = diag(2i, -2i, ...) (complex type)
    gmat K(2, 2);
    K(0, 1) = G(rational(1), rational(1));
    K(1, 0) = G(rational(1), rational(-1));
    linear_family fam = jordan_quadric(K);
    auto S = fam.s();
    eigen_data ed = classify_eigenvalues(S);
    CHECK(ed.typing.s_star == 1);
    CHECK(ed.mu[0] == G(rational(0), rational(2)));  // canonical member 2i
    auto nf = normalize_linear(fam);
    CHECK((nf.basis_inv * S * nf.basis) == shat_matrix(ed));
}

TEST_CASE("jordan_quadric rejects K = I and accepts 2*J2") {
    CHECK_THROWS_AS(jordan_quadric(gmat::identity(2)), condition_error);
    gmat K(2, 2);
    K(0, 0) = G(2);
    K(0, 1) = G(2);
    K(1, 1) = G(2);
    linear_family fam = jordan_quadric(K);  // validates internally
    gmat S = fam.s();
    // S upper-left block is K conj(K) = 4 J2^2
    CHECK(S(0, 0) == G(4));
    CHECK(S(0, 1) == G(8));
    CHECK(S(1, 1) == G(4));
    // S is not diagonalizable: classification must reject (condition E)
    CHECK_THROWS_AS(classify_eigenvalues(S), condition_error);
}

TEST_CASE("jordan_quadric with lambda J_q block pair, p = 4, S non-diagonalizable") {
    G lam(rational(1), rational(1));
    gmat K(4, 4);
    // K = [[0, lam J2],[conj(lam) J2, 0]]
    K(0, 2) = lam;
    K(0, 3) = lam;
    K(1, 3) = lam;
    K(2, 0) = lam.conj();
    K(2, 1) = lam.conj();
    K(3, 1) = lam.conj();
    linear_family fam = jordan_quadric(K);
    CHECK(fam.p == 4);
    CHECK_THROWS_AS(classify_eigenvalues(fam.s()), condition_error);
}

TEST_CASE("extract_b roundtrips and diag equivalence") {
    std::vector<G> lambda = {G(2), G(3)};
    eigen_data ed = classify_eigenvalues_list({G(4), G(1, 4), G(9), G(1, 9)});

    gmat b(2, 2);
    b(0, 0) = G(1);
    b(0, 1) = G(1, 2);
    b(1, 1) = G(1);
    linear_family fam;
    fam.p = 2;
    fam.t1j = family_from_b(lambda, b);
    fam.rho = rhohat_matrix(ed.typing);
    gmat back = extract_b(fam, ed);
    CHECK(back == b);

    // B and B diag(d) give the same family
    gmat d = diag2(G(7), G(-3, 5));
    linear_family fam2;
    fam2.p = 2;
    fam2.t1j = family_from_b(lambda, b * d);
    for (int j = 0; j < 2; ++j) CHECK(fam2.t1j[j] == fam.t1j[j]);

    // product family: B in the class of the identity
    linear_family prod;
    prod.p = 2;
    prod.t1j = family_from_b(lambda, gmat::identity(2));
    prod.rho = rhohat_matrix(ed.typing);
    gmat bp = extract_b(prod, ed);
    auto can = canonicalize_b(bp, ed.typing);
    CHECK(can.rep == gmat::identity(2));
}

TEST_CASE("canonicalize_b examples") {
    typing_info ell2{2, 0, 0};
    auto c1 = canonicalize_b(diag2(G(2), G(3)), ell2);
    CHECK(c1.rep == gmat::identity(2));

    // [[1, b],[0,1]] with |b| = 5: canonical has b on the unit circle, arg in [0, pi)
    gmat b(2, 2);
    b(0, 0) = G(1);
    b(0, 1) = G(rational(3), rational(4));
    b(1, 1) = G(1);
    auto c2 = canonicalize_b(b, ell2);
    CHECK(c2.rep(0, 1) == G(rational(3, 5), rational(4, 5)));
    CHECK(c2.rep(0, 0) == G(1));
    CHECK(c2.rep(1, 1) == G(1));

    // idempotence
    auto c3 = canonicalize_b(c2.rep, ell2);
    CHECK(c3.rep == c2.rep);
    // witness really maps b to the canonical representative
    CHECK(apply_b_witness(b, c2.witness) == c2.rep);
    CHECK(witness_respects_typing(c2.witness, ell2));
}

TEST_CASE("check_equivalence examples and relation axioms") {
    typing_info ell2{2, 0, 0};
    gmat b(2, 2), b2(2, 2);
    b(0, 0) = G(1);
    b(0, 1) = G(rational(3), rational(4));
    b(1, 1) = G(1);
    b2 = b;
    b2(0, 1) = b(0, 1) * G(2);
    auto w = check_equivalence(b, b2, ell2);
    REQUIRE(w.has_value());
    CHECK(apply_b_witness(b, *w) == b2);
    // a is real on elliptic indices
    CHECK(w->a[0].is_real());
    CHECK(w->a[1].is_real());

    gmat c(2, 2);
    c(0, 0) = G(1);
    c(0, 1) = G(1);
    c(1, 0) = G(1);
    c(1, 1) = G(2);
    CHECK(!check_equivalence(gmat::identity(2), c, ell2).has_value());

    // relation axioms on random samples
    testutil::rng r(5);
    for (int it = 0; it < 6; ++it) {
        gmat x(2, 2);
        do {
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) x(i, j) = r.gauss(3, 2);
        } while (x.det().is_zero());
        auto wx = check_equivalence(x, x, ell2);
        CHECK(wx.has_value());  // reflexive
        // symmetric through a random admissible twist
        b_witness tw;
        tw.a = {G(r.rat_nonzero()), G(r.rat_nonzero())};
        tw.d = {r.gauss_nonzero(), r.gauss_nonzero()};
        tw.nu = {1, 0};
        gmat y = apply_b_witness(x, tw);
        auto wxy = check_equivalence(x, y, ell2);
        auto wyx = check_equivalence(y, x, ell2);
        CHECK(wxy.has_value());
        CHECK(wyx.has_value());
    }
}

TEST_CASE("genb: triangular B forces nu = I and d = a") {
    testutil::rng r(17);
    for (int p = 2; p <= 3; ++p) {
        gmat b(p, p);
        for (int i = 0; i < p; ++i) {
            b(i, i) = G(1);
            for (int j = i + 1; j < p; ++j) b(i, j) = r.gauss(2, 2);
        }
        auto sols = genb_solutions(b);
        for (auto& s : sols) {
            for (int j = 0; j < p; ++j) CHECK(s.nu[j] == j);
            for (int j = 0; j < p; ++j) CHECK(s.d[j] == G((long)s.a_signs[j]));
        }
    }
}

TEST_CASE("family invariants on random B") {
    testutil::rng r(23);
    std::vector<G> lambda = {G(2), G(5, 2)};
    gmat id = gmat::identity(4);
    for (int it = 0; it < 8; ++it) {
        gmat b(2, 2);
        do {
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) b(i, j) = r.gauss(3, 2);
        } while (b.det().is_zero());
        auto fam = family_from_b(lambda, b);
        for (auto& t : fam) CHECK((t * t) == id);
        CHECK((fam[0] * fam[1]) == (fam[1] * fam[0]));
        CHECK((fam[0] - id).rank() == 1);
    }
}
