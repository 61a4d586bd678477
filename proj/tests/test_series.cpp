#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mosweb/series_map.hpp"
#include "testutil.hpp"

using namespace mosweb;
using G = gaussian_rational;
using S = series<G>;
using M = series_map<G>;

TEST_CASE("difference of squares at D=2") {
    S one = S::constant(1, 2, G(1));
    S x = S::variable(1, 2, 0, G(1));
    S p = (one + x) * (one - x);
    S expect = one - x * x;
    CHECK(p == expect);
}

TEST_CASE("multiplicative identity") {
    testutil::rng r(7);
    S a = r.sparse_series(3, 5, 8, 0, 5);
    S one = S::constant(3, 5, G(1));
    CHECK(a * one == a);
}

TEST_CASE("(x+y)^2 expansion") {
    S x = S::variable(2, 2, 0, G(1));
    S y = S::variable(2, 2, 1, G(1));
    S p = (x + y) * (x + y);
    S expect = x * x + x * y * G(2) + y * y;
    CHECK(p == expect);
}

TEST_CASE("compose with identity and 1d example") {
    // F(x)=x+x^2, G(x)=x+x^3, D=4: F o G = x + x^2 + x^3 + 2x^4
    int D = 4;
    S x = S::variable(1, D, 0, G(1));
    M F({x + x * x});
    M Gm({x + x * x * x});
    M id = M::identity(1, D);
    CHECK(compose(F, id) == F);
    M FG = compose(F, Gm);
    S expect = x + x * x + x * x * x + (x * x * x * x) * G(2);
    CHECK(FG[0] == expect);
}

TEST_CASE("invert 1d: x+x^2 -> x - x^2 + 2x^3 - 5x^4") {
    int D = 4;
    S x = S::variable(1, D, 0, G(1));
    M F({x + x * x});
    M Finv = invert_map(F);
    S expect = x - x * x + (x * x * x) * G(2) - (x * x * x * x) * G(5);
    CHECK(Finv[0] == expect);
    CHECK((compose(Finv, F) - M::identity(1, D)).is_zero());
    CHECK((compose(F, Finv) - M::identity(1, D)).is_zero());
}

TEST_CASE("invert linear map") {
    matrix<G> A(2, 2);
    A(0, 0) = G(2); A(0, 1) = G(1); A(1, 0) = G(1); A(1, 1) = G(1);
    M F = M::from_linear(A, 3);
    M Finv = invert_map(F);
    CHECK(Finv.linear_matrix() == A.inverse());
    CHECK((compose(Finv, F) - M::identity(2, 3)).is_zero());
}

TEST_CASE("ring axioms on random samples") {
    testutil::rng r(42);
    for (int it = 0; it < 30; ++it) {
        int dim = (int)r.integer(1, 3);
        S a = r.sparse_series(dim, 8, 5, 0, 8);
        S b = r.sparse_series(dim, 8, 5, 0, 8);
        S c = r.sparse_series(dim, 8, 5, 0, 8);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a * b == b * a);
    }
}

TEST_CASE("truncation coherence") {
    testutil::rng r(11);
    for (int it = 0; it < 10; ++it) {
        S a = r.sparse_series(2, 8, 6, 0, 8);
        S b = r.sparse_series(2, 8, 6, 0, 8);
        CHECK((a * b).truncated(5) == a.truncated(5) * b.truncated(5));
    }
    // composition: compute at D then cut vs compute at D'
    for (int it = 0; it < 6; ++it) {
        M f = r.sparse_tangent_map(2, 8, 3, 2, 4);
        M g = r.sparse_tangent_map(2, 8, 3, 2, 4);
        M fg = compose(f, g);
        M f5({f[0].truncated(5), f[1].truncated(5)});
        M g5({g[0].truncated(5), g[1].truncated(5)});
        M fg5 = compose(f5, g5);
        CHECK(fg[0].truncated(5) == fg5[0]);
        CHECK(fg[1].truncated(5) == fg5[1]);
    }
}

TEST_CASE("flavor algebra and rho conjugation") {
    int D = 4;
    // elliptic rho at p=1: (xi, eta) -> (conj eta, conj xi)
    matrix<G> P(2, 2);
    P(0, 1) = G(1);
    P(1, 0) = G(1);
    M rho = M::from_linear(P, D, true);
    CHECK(compose(rho, rho) == M::identity(2, D));

    // T1: xi' = lambda eta, eta' = lambda^{-1} xi with lambda = 2
    matrix<G> T(2, 2);
    T(0, 1) = G(2);
    T(1, 0) = G(1, 2);
    M t1 = M::from_linear(T, D);
    M t2 = conjugate_by_rho(t1, rho);
    // expected: lambda -> lambda^{-1}
    matrix<G> T2(2, 2);
    T2(0, 1) = G(1, 2);
    T2(1, 0) = G(2);
    CHECK(t2 == M::from_linear(T2, D));
    CHECK(conjugate_by_rho(t2, rho) == t1);
    CHECK(conjugate_by_rho(M::identity(2, D), rho) == M::identity(2, D));

    testutil::rng r(3);
    M f = r.sparse_tangent_map(2, D, 3, 2, 3);
    CHECK(conjugate_by_rho(conjugate_by_rho(f, rho), rho) == f);
}

TEST_CASE("interval backend basics") {
    using CI = complex_interval;
    CI a = CI::from_gaussian(G(rational(1, 3)), 128);
    CI b = CI::from_gaussian(G(rational(1, 6), rational(2, 7)), 128);
    CI s = a + b;
    CHECK(s.re().contains(rational(1, 2)));
    CHECK(s.im().contains(rational(2, 7)));
    CI p = b * b.conj();
    CHECK(p.im().contains(rational(0)));
    CHECK(p.re().contains(rational(1, 36) + rational(4, 49)));
    // conj is an involution
    CHECK(b.conj().conj().re().contains(rational(1, 6)));
    // series over intervals: (1+x)(1-x) residue contains 1 - x^2
    using SI = series<CI>;
    SI one = SI::constant(1, 2, CI(1));
    SI x = SI::variable(1, 2, 0, CI(1));
    SI prod = (one + x) * (one - x);
    SI expect = one - x * x;
    CHECK((prod - expect).residue_ok());
}

TEST_CASE("oracle: naive dense polynomial product matches") {
    // independent nested-loop oracle over map<vector<int>, G>
    testutil::rng r(99);
    for (int it = 0; it < 10; ++it) {
        int dim = 2, D = 6;
        S a = r.sparse_series(dim, D, 5, 0, 6);
        S b = r.sparse_series(dim, D, 5, 0, 6);
        std::map<std::vector<int>, G> oracle;
        for (auto& [ma, ca] : a.terms())
            for (auto& [mb, cb] : b.terms()) {
                std::vector<int> key(dim);
                int deg = 0;
                for (int i = 0; i < dim; ++i) {
                    key[i] = ma[i] + mb[i];
                    deg += key[i];
                }
                if (deg > D) continue;
                auto [itx, fresh] = oracle.emplace(key, ca * cb);
                if (!fresh) itx->second += ca * cb;
            }
        S p = a * b;
        size_t nonzero = 0;
        for (auto& [k, v] : oracle) {
            if (v.is_zero()) continue;
            ++nonzero;
            multi_index m(dim);
            for (int i = 0; i < dim; ++i) m[i] = (uint16_t)k[i];
            CHECK(p.coeff(m) == v);
        }
        CHECK(p.size() == nonzero);
    }
}
