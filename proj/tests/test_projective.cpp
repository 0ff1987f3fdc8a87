#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bbv/projective.hpp"

#include <map>
#include <set>

using namespace bbv;

TEST_CASE("point normalisation is canonical") {
    FieldTower tw(3);
    const Gf& F = tw.base();
    Pt a = make_point(F, {2, 1, 0});
    Pt b = make_point(F, {1, 2, 0});
    CHECK(a == b);
    CHECK(a.c[0] == 1);
    CHECK_THROWS_AS(make_point(F, {0, 0, 0}), std::invalid_argument);
}

TEST_CASE("enumeration counts") {
    FieldTower tw3(3), tw9(9);
    CHECK(pg_num_points(3, 1) == 4);
    CHECK(pg_num_points(3, 4) == 121);
    CHECK(pg_num_points(9, 2) == 91);
    std::set<Pt> seen;
    PointRange r(tw3.base(), 4);
    for (const Pt& p : r) {
        int lead = 0;
        while (p.c[lead] == 0) ++lead;
        CHECK(p.c[lead] == 1);
        seen.insert(p);
    }
    CHECK(seen.size() == 121);
    PointRange r2(tw9.quad(), 2);  // PG(2, 81)
    CHECK(r2.size() == 81u * 81 + 81 + 1);
}

TEST_CASE("span and meet: dimension formula and examples") {
    FieldTower tw(3);
    const Gf& F = tw.base();
    // hyperplane of PG(4,q) meets an external line in a point
    std::array<u32, 5> h{1, 0, 0, 0, 0};
    Subspace H = Subspace::hyperplane(F, 4, std::span<const u32>(h.data(), 5));
    CHECK(H.proj_dim() == 3);
    std::array<Pt, 2> lpts{make_point(F, {1, 0, 0, 0, 0}),
                           make_point(F, {1, 1, 1, 1, 1})};
    Subspace L = span(F, std::span<const Pt>(lpts.data(), 2));
    CHECK(L.proj_dim() == 1);
    Subspace M = meet(F, H, L);
    CHECK(M.proj_dim() == 0);

    // span of one point is 0-dimensional and contains it
    std::array<Pt, 1> one{make_point(F, {1, 2, 0, 1, 2})};
    Subspace P = span(F, std::span<const Pt>(one.data(), 1));
    CHECK(P.proj_dim() == 0);
    CHECK(P.contains(F, one[0]));
}

TEST_CASE("meet of random planes matches brute force point intersection (q=3)") {
    FieldTower tw(3);
    const Gf& F = tw.base();
    DetRng rng(31, 0);
    auto random_plane = [&]() {
        while (true) {
            std::vector<Pt> pts;
            for (int i = 0; i < 3; ++i) {
                std::array<u32, 5> c{};
                bool nz = false;
                for (int j = 0; j < 5; ++j) {
                    c[j] = rng.below(3);
                    nz |= c[j] != 0;
                }
                if (!nz) c[0] = 1;
                pts.push_back(make_point(F, std::span<const u32>(c.data(), 5)));
            }
            Subspace s = span(F, std::span<const Pt>(pts.data(), pts.size()));
            if (s.proj_dim() == 2) return s;
        }
    };
    for (int t = 0; t < 200; ++t) {
        Subspace a = random_plane(), b = random_plane();
        Subspace m = meet(F, a, b);
        // oracle: exhaustive point intersection
        std::set<Pt> pa;
        for (const Pt& p : a.points(F)) pa.insert(p);
        std::vector<Pt> common;
        for (const Pt& p : b.points(F))
            if (pa.count(p)) common.push_back(p);
        if (common.empty()) {
            CHECK(m.rank() == 0);
        } else {
            Subspace o = span(F, std::span<const Pt>(common.data(), common.size()));
            CHECK(m == o);
            CHECK(m.num_points(F) == common.size());
        }
        // dimension formula dim(meet) = dim a + dim b - dim span
        Subspace sp = span_of(F, a, b);
        CHECK(m.proj_dim() == a.proj_dim() + b.proj_dim() - sp.proj_dim());
    }
}

TEST_CASE("meet is commutative and idempotent; canonical containment") {
    FieldTower tw(4);
    const Gf& F = tw.base();
    DetRng rng(77, 1);
    for (int t = 0; t < 1000; ++t) {
        std::vector<Pt> pts;
        for (int i = 0; i < 4; ++i) {
            std::array<u32, 5> c{};
            bool nz = false;
            for (int j = 0; j < 5; ++j) {
                c[j] = rng.below(4);
                nz |= c[j] != 0;
            }
            if (!nz) c[2] = 1;
            pts.push_back(make_point(F, std::span<const u32>(c.data(), 5)));
        }
        Subspace a = span(F, std::span<const Pt>(pts.data(), 3));
        Subspace b = span(F, std::span<const Pt>(pts.data(), 4));
        CHECK(meet(F, a, b) == meet(F, b, a));
        CHECK(meet(F, a, a) == a);
        CHECK(meet(F, a, b) == a);  // a is spanned by a prefix of b's spanners
        CHECK(b.contains(F, a));
    }
}

TEST_CASE("every pair of distinct points of PG(2,q^2) lies on one line, q<=4") {
    for (u32 q : {2u, 3u, 4u}) {
        FieldTower tw(q);
        const Gf& K = tw.quad();
        std::vector<Pt> all;
        for (const Pt& p : PointRange(K, 2)) all.push_back(p);
        u64 s = K.order();
        CHECK(all.size() == s * s + s + 1);
        std::map<Subspace, int> pair_count;
        for (size_t i = 0; i < all.size(); ++i)
            for (size_t j = i + 1; j < all.size(); ++j) {
                std::array<Pt, 2> two{all[i], all[j]};
                ++pair_count[span(K, std::span<const Pt>(two.data(), 2))];
            }
        u64 expect_lines = s * s + s + 1;
        CHECK(pair_count.size() == expect_lines);
        for (auto& [line, cnt] : pair_count)
            CHECK(cnt == static_cast<int>((s + 1) * s / 2));
    }
}

TEST_CASE("five points in general position span PG(4,q)") {
    FieldTower tw(5);
    const Gf& F = tw.base();
    DetRng rng(13, 5);
    int found = 0;
    while (found < 50) {
        std::vector<Pt> pts;
        for (int i = 0; i < 5; ++i) {
            std::array<u32, 5> c{};
            bool nz = false;
            for (int j = 0; j < 5; ++j) {
                c[j] = rng.below(5);
                nz |= c[j] != 0;
            }
            if (!nz) c[4] = 1;
            pts.push_back(make_point(F, std::span<const u32>(c.data(), 5)));
        }
        Subspace s = span(F, std::span<const Pt>(pts.data(), 5));
        if (s.proj_dim() == 4) {
            ++found;
            CHECK(s.num_points(F) == pg_num_points(5, 4));
        }
    }
}

TEST_CASE("null space and solve") {
    FieldTower tw(7);
    const Gf& F = tw.base();
    std::vector<std::vector<u32>> m{{1, 2, 3}, {2, 4, 6}};
    auto ns = null_space(F, m);
    CHECK(ns.size() == 2);  // rank 1
    for (auto& v : ns) {
        u32 dot = 0;
        for (int i = 0; i < 3; ++i) dot = F.add(dot, F.mul(m[0][i], v[i]));
        CHECK(dot == 0);
    }
    auto sol = solve_linear(F, {{1, 1}, {1, 2}}, {3, 5});
    REQUIRE(sol.has_value());
    CHECK((*sol)[0] == 1);
    CHECK((*sol)[1] == 2);
    auto bad = solve_linear(F, {{1, 1}, {2, 2}}, {1, 3});
    CHECK_FALSE(bad.has_value());
}

TEST_CASE("subspace point enumeration emits advertised count, no duplicates") {
    FieldTower tw(4);
    const Gf& F = tw.base();
    std::array<Pt, 3> pts{make_point(F, {1, 0, 0, 0, 0}),
                          make_point(F, {0, 1, 0, 0, 0}),
                          make_point(F, {0, 0, 1, 2, 3})};
    Subspace s = span(F, std::span<const Pt>(pts.data(), 3));
    auto all = s.points(F);
    std::set<Pt> uniq(all.begin(), all.end());
    CHECK(all.size() == pg_num_points(4, 2));
    CHECK(uniq.size() == all.size());
    for (const Pt& p : all) CHECK(s.contains(F, p));
}

TEST_CASE("empty subspace is first class and meet is total") {
    FieldTower tw(3);
    const Gf& F = tw.base();
    std::array<Pt, 1> a{make_point(F, {1, 0, 0, 0, 0})};
    std::array<Pt, 1> b{make_point(F, {0, 1, 0, 0, 0})};
    Subspace sa = span(F, std::span<const Pt>(a.data(), 1));
    Subspace sb = span(F, std::span<const Pt>(b.data(), 1));
    Subspace m = meet(F, sa, sb);
    CHECK(m.proj_dim() == -1);
    CHECK(m.rank() == 0);
    CHECK(m == Subspace::empty(4));
    CHECK_THROWS_AS(span(F, std::span<const Pt>{}), std::invalid_argument);
}
