#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bbv/gf.hpp"

#include <map>
#include <set>

using namespace bbv;

namespace {

void check_field_axioms_exhaustive(const Gf& F) {
    u32 n = F.order();
    for (u32 a = 0; a < n; ++a) {
        CHECK(F.add(a, 0) == a);
        CHECK(F.mul(a, 1) == a);
        CHECK(F.add(a, F.neg(a)) == 0);
        if (a) CHECK(F.mul(a, F.inv(a)) == 1);
        for (u32 b = 0; b < n; ++b) {
            CHECK(F.add(a, b) == F.add(b, a));
            CHECK(F.mul(a, b) == F.mul(b, a));
            for (u32 c = 0; c < n; ++c) {
                CHECK(F.add(F.add(a, b), c) == F.add(a, F.add(b, c)));
                CHECK(F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c)));
                CHECK(F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c)));
            }
        }
    }
}

void check_field_axioms_sampled(const Gf& F, int trials) {
    DetRng rng(7, F.order());
    for (int t = 0; t < trials; ++t) {
        u32 a = rng.below(F.order());
        u32 b = rng.below(F.order());
        u32 c = rng.below(F.order());
        CHECK(F.add(F.add(a, b), c) == F.add(a, F.add(b, c)));
        CHECK(F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c)));
        CHECK(F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c)));
        if (a) CHECK(F.mul(a, F.inv(a)) == 1);
    }
}

}  // namespace

TEST_CASE("prime power recognition") {
    u32 p = 0, e = 0;
    CHECK(FieldTower::is_prime_power(9, &p, &e));
    CHECK(p == 3);
    CHECK(e == 2);
    CHECK(FieldTower::is_prime_power(16));
    CHECK(FieldTower::is_prime_power(13));
    CHECK_FALSE(FieldTower::is_prime_power(6));
    CHECK_FALSE(FieldTower::is_prime_power(12));
    CHECK_FALSE(FieldTower::is_prime_power(1));
    CHECK_THROWS_AS(FieldTower(6), std::invalid_argument);
    CHECK_THROWS_AS(FieldTower(18), std::invalid_argument);
}

TEST_CASE("q=2 tower has the unique quadratic") {
    FieldTower tw(2);
    CHECK(tw.t1() == 1);
    CHECK(tw.t0() == 1);
}

TEST_CASE("tau identities hold for every supported q") {
    for (u32 q : {2u, 3u, 4u, 5u, 7u, 8u, 9u, 11u, 13u, 16u}) {
        FieldTower tw(q);
        const Gf& K = tw.quad();
        u32 tau = tw.tau();
        u32 tauq = K.frob(tau);
        CHECK(tw.tau_q() == tauq);
        // tau tau^q = -t0 and tau + tau^q = t1
        CHECK(K.mul(tau, tauq) == K.neg(tw.t0()));
        CHECK(K.add(tau, tauq) == tw.t1());
        // tau^q = t1 - tau
        CHECK(tauq == K.sub(tw.t1(), tau));
        // tau is primitive: order q^2 - 1
        u32 x = tau, ord = 1;
        while (x != 1) {
            x = K.mul(x, tau);
            ++ord;
        }
        CHECK(ord == q * q - 1);
        // Frobenius of order 2 fixes F_{q^2}: tau^{q^2} = tau (not 1)
        CHECK(K.frob_pow(tau, 2) == tau);
    }
}

TEST_CASE("q=3 exhaustive check of tau tau^q = -t0 over all primitive quadratics") {
    // oracle: try every (t1,t0) and check the identity whenever primitive
    const u32 q = 3;
    for (u32 t1 = 0; t1 < q; ++t1)
        for (u32 t0 = 0; t0 < q; ++t0) {
            bool ok = true;
            try {
                FieldTower tw(q, std::make_pair(t1, t0));
                const Gf& K = tw.quad();
                CHECK(K.mul(tw.tau(), K.frob(tw.tau())) == K.neg(t0));
                CHECK(K.add(tw.tau(), K.frob(tw.tau())) == t1);
            } catch (const std::invalid_argument&) {
                ok = false;
            }
            // x^2 - x - 1 and x^2 - 2x - 1 are the primitive quadratics mod 3
            bool primitive = (t1 == 1 && t0 == 1) || (t1 == 2 && t0 == 1);
            CHECK(ok == primitive);
        }
}

TEST_CASE("q=7 override accepted iff primitive") {
    // Brute-force oracle: order of a root of x^2 - t1 x - t0 in the pair
    // ring; the override is acceptable exactly when that order is 48.
    auto order_of = [&](u32 t1, u32 t0) {
        u32 ord = 1;
        const u32 q = 7;
        auto mul = [&](std::pair<u32, u32> a, std::pair<u32, u32> b) {
            u32 hi = a.second * b.second % q;
            return std::make_pair((a.first * b.first + hi * t0) % q,
                                  (a.first * b.second + a.second * b.first +
                                   hi * t1) % q);
        };
        std::pair<u32, u32> tau{0, 1}, x = tau;
        while (x != std::make_pair(1u, 0u)) {
            x = mul(x, tau);
            if (++ord > 49) return 0u;
        }
        return ord;
    };
    CHECK(order_of(1, 3) == 24);  // x^2 - x - 3 is irreducible but not primitive
    CHECK_THROWS_AS(FieldTower(7, std::make_pair(1u, 3u)), std::invalid_argument);
    CHECK(order_of(2, 2) == 48);
    FieldTower tw(7, std::make_pair(2u, 2u));
    CHECK(tw.t1() == 2);
    CHECK(tw.t0() == 2);
    CHECK(order_of(1, 0) != 48);  // reducible
    CHECK_THROWS_AS(FieldTower(7, std::make_pair(1u, 0u)), std::invalid_argument);
    // the default is the lexicographically least primitive pair
    FieldTower dflt(7);
    CHECK(order_of(dflt.t1(), dflt.t0()) == 48);
    for (u32 a = 0; a <= dflt.t1(); ++a)
        for (u32 b = 0; b < (a == dflt.t1() ? dflt.t0() : 7); ++b)
            CHECK(order_of(a, b) != 48);
}

TEST_CASE("field axioms, exhaustive small / sampled large") {
    for (u32 q : {2u, 3u, 4u, 5u}) {
        FieldTower tw(q);
        check_field_axioms_exhaustive(tw.base());
        if (q <= 3) check_field_axioms_exhaustive(tw.quad());
        check_field_axioms_sampled(tw.quad(), 10000);
        check_field_axioms_sampled(tw.quartic(), 10000);
    }
    for (u32 q : {7u, 8u, 9u, 11u, 16u}) {
        FieldTower tw(q);
        check_field_axioms_sampled(tw.base(), 10000);
        check_field_axioms_sampled(tw.quad(), 10000);
        check_field_axioms_sampled(tw.quartic(), 10000);
    }
}

TEST_CASE("Frobenius is an automorphism and has the right fixed fields") {
    for (u32 q : {3u, 4u, 5u, 8u, 9u}) {
        FieldTower tw(q);
        for (Level lv : {Level::base, Level::quad, Level::quartic}) {
            const Gf& F = tw.level(lv);
            DetRng rng(11, q * 4 + level_index(lv));
            for (int t = 0; t < 10000; ++t) {
                u32 a = rng.below(F.order());
                u32 b = rng.below(F.order());
                CHECK(F.frob(F.add(a, b)) == F.add(F.frob(a), F.frob(b)));
                CHECK(F.frob(F.mul(a, b)) == F.mul(F.frob(a), F.frob(b)));
                CHECK(F.frob(a) == F.pow(a, q));
            }
            // x^{q^4} = x at every level
            for (int t = 0; t < 50; ++t) {
                u32 a = rng.below(F.order());
                CHECK(F.frob_pow(a, 4) == a);
            }
        }
        // x in F_q is fixed by x -> x^q at all levels
        for (u32 a = 0; a < q; ++a) {
            CHECK(tw.quad().frob(a) == a);
            CHECK(tw.quartic().frob(a) == a);
        }
        // x in F_{q^2} embedded in F_{q^4} is fixed by x -> x^{q^2}
        for (u32 a = 0; a < q * q; ++a)
            CHECK(tw.quartic().frob_pow(a, 2) == a);
    }
}

TEST_CASE("embedding is compatible with arithmetic") {
    for (u32 q : {3u, 4u, 9u}) {
        FieldTower tw(q);
        const Gf& B = tw.base();
        const Gf& K = tw.quad();
        const Gf& L = tw.quartic();
        for (u32 a = 0; a < q; ++a)
            for (u32 b = 0; b < q; ++b) {
                CHECK(K.add(a, b) == B.add(a, b));
                CHECK(K.mul(a, b) == B.mul(a, b));
                CHECK(L.mul(a, b) == B.mul(a, b));
            }
        DetRng rng(3, q);
        for (int t = 0; t < 3000; ++t) {
            u32 a = rng.below(q * q);
            u32 b = rng.below(q * q);
            CHECK(L.add(a, b) == K.add(a, b));
            CHECK(L.mul(a, b) == K.mul(a, b));
        }
        CHECK(tw.lies_in(q - 1, Level::base));
        CHECK_FALSE(tw.lies_in(q, Level::base));
        CHECK(tw.lies_in(q * q - 1, Level::quad));
    }
}

TEST_CASE("roots: x^2-1 over odd F_q") {
    FieldTower tw(7);
    const Gf& F = tw.base();
    std::vector<u32> c{F.neg(1), 0, 1};
    auto r = poly_roots(F, c);
    REQUIRE(r.size() == 2);
    CHECK(r[0].first == 1);
    CHECK(r[1].first == F.neg(1));
    CHECK(r[0].second == 1);
}

TEST_CASE("roots: the tower quadratic has roots tau, tau^q in F_{q^2}") {
    for (u32 q : {3u, 4u, 5u, 8u}) {
        FieldTower tw(q);
        const Gf& K = tw.quad();
        std::vector<u32> c{K.neg(tw.t0()), K.neg(tw.t1()), 1};
        auto r = poly_roots(K, c);
        REQUIRE(r.size() == 2);
        std::set<u32> got{r[0].first, r[1].first};
        std::set<u32> want{tw.tau(), K.frob(tw.tau())};
        CHECK(got == want);
    }
}

TEST_CASE("roots agree with exhaustive evaluation for random polynomials") {
    for (u32 q : {3u, 5u, 8u}) {
        FieldTower tw(q);
        for (Level lv : {Level::base, Level::quad, Level::quartic}) {
            const Gf& F = tw.level(lv);
            DetRng rng(23, q * 8 + level_index(lv));
            for (int t = 0; t < 100; ++t) {
                int deg = 1 + static_cast<int>(rng.below(4));
                std::vector<u32> c(deg + 1, 0);
                for (int i = 0; i <= deg; ++i) c[i] = rng.below(F.order());
                if (c[deg] == 0) c[deg] = 1;
                auto r = poly_roots(F, c);
                std::map<u32, int> bymult(r.begin(), r.end());
                int count = 0;
                for (u32 x = 0; x < F.order(); ++x) {
                    bool isroot = poly_eval(F, c, x) == 0;
                    CHECK(isroot == (bymult.count(x) > 0));
                    if (isroot) ++count;
                }
                CHECK(count == static_cast<int>(r.size()));
            }
        }
    }
}

TEST_CASE("random quartic over F_{q^2}: roots in F_{q^4} match evaluation") {
    FieldTower tw(3);
    const Gf& L = tw.quartic();
    DetRng rng(5, 99);
    for (int t = 0; t < 50; ++t) {
        std::vector<u32> c(5, 0);
        for (int i = 0; i < 5; ++i) c[i] = rng.below(tw.quad().order());
        if (c[4] == 0) c[4] = 1;
        auto r = poly_roots(L, c);
        for (auto [x, m] : r) {
            CHECK(poly_eval(L, c, x) == 0);
            CHECK(m >= 1);
        }
        u32 n = 0;
        for (u32 x = 0; x < L.order(); ++x)
            if (poly_eval(L, c, x) == 0) ++n;
        CHECK(n == r.size());
    }
}

TEST_CASE("projective roots report infinity when the top coefficient vanishes") {
    FieldTower tw(5);
    const Gf& F = tw.base();
    // x (degree declared 3): roots 0 and infinity with multiplicity 2
    std::vector<u32> c{0, 1};
    auto r = poly_proj_roots(F, c, 3);
    REQUIRE(r.size() == 2);
    CHECK(r[0] == std::make_pair(0u, 1));
    CHECK(r[1].first == INF);
    CHECK(r[1].second == 2);
    CHECK_THROWS(poly_roots(F, std::vector<u32>{0, 0}));
}

TEST_CASE("multiplicity via synthetic division") {
    FieldTower tw(5);
    const Gf& F = tw.base();
    // (x-1)^2 (x-2) = x^3 - 4x^2 + 5x - 2
    std::vector<u32> a{F.neg(1), 1};
    auto c = poly_mul(F, poly_mul(F, a, a), std::vector<u32>{F.neg(2), 1});
    auto r = poly_roots(F, c);
    REQUIRE(r.size() == 2);
    CHECK(r[0] == std::make_pair(1u, 2));
    CHECK(r[1] == std::make_pair(2u, 1));
}

TEST_CASE("quadratic solver matches exhaustive search") {
    for (u32 q : {3u, 4u, 5u, 7u, 8u, 9u}) {
        FieldTower tw(q);
        for (Level lv : {Level::base, Level::quad}) {
            const Gf& F = tw.level(lv);
            DetRng rng(17, q + 100 * level_index(lv));
            for (int t = 0; t < 300; ++t) {
                u32 a = 1 + rng.below(F.order() - 1);
                u32 b = rng.below(F.order());
                u32 c = rng.below(F.order());
                auto got = F.quad_roots(a, b, c);
                std::vector<u32> want;
                for (u32 x = 0; x < F.order(); ++x)
                    if (F.add(F.add(F.mul(F.mul(a, x), x), F.mul(b, x)), c) == 0)
                        want.push_back(x);
                CHECK(got == want);
            }
        }
    }
}
