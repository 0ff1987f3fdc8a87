#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bbv/bruckbose.hpp"

#include <algorithm>
#include <set>

using namespace bbv;

TEST_CASE("bb_map examples and round trip") {
    FieldTower tw(3);
    Frame fr(tw);
    const Gf& K = tw.quad();

    CHECK(fr.bb_map(make_point(K, {0, 0, 1})) ==
          make_point(tw.base(), {0, 0, 0, 0, 1}));
    // (tau, 1, 1) -> (0, 1, 1, 0, 1)
    CHECK(fr.bb_map(make_point(K, {tw.tau(), 1, 1})) ==
          make_point(tw.base(), {0, 1, 1, 0, 1}));
    CHECK_THROWS_AS(fr.bb_map(make_point(K, {1, 0, 0})), std::invalid_argument);

    DetRng rng(2, 0);
    for (int t = 0; t < 1000; ++t) {
        u32 x = rng.below(K.order()), y = rng.below(K.order());
        Pt A = make_point(K, {x, y, 1});
        CHECK(fr.bb_unmap(fr.bb_map(A)) == A);
    }
}

TEST_CASE("spread line coordinates match the fixed formulas") {
    FieldTower tw(4);
    Frame fr(tw);
    const Gf& F = tw.base();
    // delta = 0
    std::array<std::array<u32, 5>, 2> r0{{{0, 0, 1, 0, 0}, {0, 0, 0, 1, 0}}};
    CHECK(fr.spread_line(0) ==
          Subspace::from_rows(F, 4, std::span<const std::array<u32, 5>>(r0.data(), 2)));
    // delta = tau: <(0,1,1,0,0), (t0, t1, 0, 1, 0)>
    std::array<std::array<u32, 5>, 2> rt{
        {{0, 1, 1, 0, 0}, {tw.t0(), tw.t1(), 0, 1, 0}}};
    CHECK(fr.spread_line(tw.tau()) ==
          Subspace::from_rows(F, 4, std::span<const std::array<u32, 5>>(rt.data(), 2)));
    // delta = INF: the x-coordinate span
    std::array<std::array<u32, 5>, 2> ri{{{1, 0, 0, 0, 0}, {0, 1, 0, 0, 0}}};
    CHECK(fr.spread_line(INF) ==
          Subspace::from_rows(F, 4, std::span<const std::array<u32, 5>>(ri.data(), 2)));
}

TEST_CASE("spread partitions Sigma_inf and the lookup is consistent") {
    for (u32 q : {2u, 3u, 4u, 5u, 7u, 8u, 9u}) {
        FieldTower tw(q);
        Frame fr(tw);
        const Gf& F = tw.base();
        CHECK(fr.spread().size() == q * q + 1);
        CHECK(spread_is_partition(F, fr.spread(), fr.sigma_inf()));
        for (u32 d : {0u, 1u, q, INF})
            for (const Pt& p : fr.spread_line(d).points(F))
                CHECK(fr.spread_delta_of(p) == d);
    }
}

TEST_CASE("transversal construction reproduces the coordinate spread") {
    for (u32 q : {2u, 3u, 4u, 5u, 7u, 8u, 9u}) {
        FieldTower tw(q);
        Frame fr(tw);
        for (u32 delta = 0; delta < q * q; ++delta)
            CHECK(fr.spread_line_from_transversal(delta) == fr.spread_line(delta));
        CHECK(fr.spread_line_from_transversal(INF) == fr.spread_line(INF));
    }
}

TEST_CASE("g is disjoint from the rational space and conjugate to g^q") {
    for (u32 q : {3u, 4u, 5u}) {
        FieldTower tw(q);
        Frame fr(tw);
        const Gf& K = tw.quad();
        for (const Pt& p : fr.g().points(K)) CHECK_FALSE(point_in_subfield(p, q));
        std::vector<Pt> img;
        for (const Pt& p : fr.g().points(K)) img.push_back(frobenius_point(K, p));
        Subspace gq = span(K, std::span<const Pt>(img.data(), img.size()));
        CHECK(gq == fr.gq());
        // g meets every extended spread line in exactly one point
        for (u32 d = 0; d < q * q; ++d)
            CHECK(meet(K, fr.g(), fr.spread_line(d)).proj_dim() == 0);
        CHECK(meet(K, fr.g(), fr.spread_line(INF)).proj_dim() == 0);
        // two spread lines never share a point even extended
        CHECK(meet(K, fr.spread_line(0), fr.spread_line(1)).rank() == 0);
    }
}

TEST_CASE("g_point dictionary both directions") {
    FieldTower tw(3);
    Frame fr(tw);
    const Gf& K = tw.quad();
    CHECK(fr.g_point(INF) == fr.A0());
    CHECK(fr.A0() == make_point(K, {tw.tau_q(), K.neg(1), 0, 0, 0}));
    for (u32 d = 0; d < 9; ++d) {
        Pt T = fr.g_point(d);
        CHECK(fr.g().contains(K, T));
        CHECK(fr.spread_line(d).contains(K, T));
        CHECK(fr.g_alpha_of(T, Level::quad) == d);
        Subspace m = meet(K, fr.g(), fr.spread_line(d));
        CHECK(make_point(K, std::span<const u32>(m.row(0).data(), 5)) == T);
    }
    // the l_inf dictionary round-trips
    for (u32 d : {0u, 1u, 5u, INF}) {
        Pt pb = fr.linf_point(d);
        CHECK(fr.linf_delta_of(pb) == d);
    }
    // alpha outside F_{q^2}: the line P P^q misses Sigma_inf at level quartic
    const Gf& L = tw.quartic();
    for (u32 alpha : {9u, 17u, 33u, 80u}) {
        Pt P = fr.g_point(alpha, Level::quartic);
        Pt Pq = frobenius_point(L, P);
        std::array<Pt, 2> two{P, Pq};
        Subspace line = span(L, std::span<const Pt>(two.data(), 2));
        for (const Pt& x : line.points(L))
            CHECK_FALSE(point_in_subfield(x, 9));
    }
}

TEST_CASE("incidence structure A(S) is an affine plane (q=2,3)") {
    for (u32 q : {2u, 3u}) {
        FieldTower tw(q);
        Frame fr(tw);
        auto rep = fr.incidence_plane_check();
        CHECK(rep.pass);
        CHECK(rep.points == static_cast<u64>(q) * q * q * q);
        CHECK(rep.lines == static_cast<u64>(q) * q * q * q + q * q);
    }
}

TEST_CASE("reversing a regulus breaks regularity but not the partition (q=3)") {
    FieldTower tw(3);
    Frame fr(tw);
    const Gf& F = tw.base();
    CHECK(spread_is_regular(F, fr.spread()));
    std::vector<Subspace> opp;
    auto reg = regulus_lines(F, fr.spread_line(0), fr.spread_line(1),
                             fr.spread_line(2), &opp);
    CHECK(reg.size() == 4);
    CHECK(opp.size() == 4);
    std::set<Subspace> all(fr.spread().begin(), fr.spread().end());
    for (const Subspace& r : reg) CHECK(all.count(r));
    std::vector<Subspace> mutated;
    for (const Subspace& s : fr.spread())
        if (std::find(reg.begin(), reg.end(), s) == reg.end())
            mutated.push_back(s);
    for (const Subspace& o : opp) mutated.push_back(o);
    CHECK(mutated.size() == fr.spread().size());
    CHECK(spread_is_partition(F, mutated, fr.sigma_inf()));
    CHECK_FALSE(spread_is_regular(F, mutated));
    // incidence axioms still hold: any spread yields an affine plane
    CHECK(fr.incidence_plane_check(mutated).pass);
}

TEST_CASE("hyperbolic congruence line through a point of an extended spread line") {
    FieldTower tw(3);
    Frame fr(tw);
    const Gf& K = tw.quad();
    Pt T = fr.g_point(5);
    Pt Tq = frobenius_point(K, T);
    std::array<Pt, 2> two{T, Tq};
    Subspace tt = span(K, std::span<const Pt>(two.data(), 2));
    int checked = 0;
    for (const Pt& X : tt.points(K)) {
        if (fr.g().contains(K, X) || fr.gq().contains(K, X)) continue;
        CHECK(congruence_line_through(fr, X, Level::quad) == tt);
        ++checked;
    }
    CHECK(checked > 0);
}
