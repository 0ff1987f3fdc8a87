#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bbv/varieties.hpp"

#include <algorithm>
#include <set>

using namespace bbv;

namespace {

// random nondegenerate conic of PG(2,q^2) with |O cap l_inf| == want
Conic random_conic_with_type(const Frame& fr, int want, DetRng& rng) {
    const Gf& K = fr.Fq2();
    while (true) {
        QuadForm f;
        f.nvars = 3;
        f.c.fill(0);
        bool nz = false;
        for (int i = 0; i < 6; ++i) {
            f.c[i] = rng.below(K.order());
            nz |= f.c[i] != 0;
        }
        if (!nz) continue;
        try {
            Conic O = make_conic(K, f);
            int at_inf = 0;
            for (const Pt& p : O.pts)
                if (p.c[2] == 0) ++at_inf;
            if (at_inf == want) return O;
        } catch (const std::exception&) {
        }
    }
}

std::vector<std::vector<u32>> random_chart(const Frame& fr, DetRng& rng) {
    const Gf& K = fr.Fq2();
    while (true) {
        std::vector<std::vector<u32>> m(3, std::vector<u32>(3));
        for (auto& row : m)
            for (u32& v : row) v = rng.below(K.order());
        std::vector<std::vector<u32>> inv;
        if (invert_matrix(K, m, inv)) return m;
    }
}

BaerSubplane random_subplane(const Frame& fr, bool tangent, DetRng& rng) {
    while (true) {
        try {
            BaerSubplane B = subplane_from_chart(fr, random_chart(fr, rng));
            if (B.tangent == tangent) return B;
        } catch (const std::exception&) {
        }
    }
}

}  // namespace

TEST_CASE("conic through five points of the moment conic is y^2 = xz") {
    FieldTower tw(3);
    Frame fr(tw);
    const Gf& K = tw.quad();
    u32 tau = tw.tau();
    std::vector<Pt> five{
        make_point(K, {1, 0, 0}), make_point(K, {0, 0, 1}),
        make_point(K, {1, 1, 1}),
        make_point(K, {1, tau, K.mul(tau, tau)}),
        make_point(K, {1, K.add(tau, 1),
                       K.mul(K.add(tau, 1), K.add(tau, 1))})};
    // points are (1, t, t^2) so they satisfy y^2 - xz = 0
    Conic O = conic_through(K, std::span<const Pt>(five.data(), 5));
    QuadForm expect;
    expect.nvars = 3;
    expect.c.fill(0);
    expect.c[qf_index(1, 1, 3)] = 1;
    expect.c[qf_index(0, 2, 3)] = K.neg(1);
    // normalise the same way
    u32 lead = 0;
    for (int i = 0; i < 6; ++i)
        if (expect.c[i]) {
            lead = expect.c[i];
            break;
        }
    expect = qf_scale(K, expect, K.inv(lead));
    CHECK(O.form == expect);
    CHECK(O.pts.size() == K.order() + 1);
}

TEST_CASE("five random points of a known conic recover its form") {
    FieldTower tw(4);
    Frame fr(tw);
    const Gf& K = tw.quad();
    DetRng rng(41, 0);
    auto normalised = [&](QuadForm f) {
        for (int i = 0; i < 6; ++i)
            if (f.c[i]) return qf_scale(K, f, K.inv(f.c[i]));
        return f;
    };
    for (int t = 0; t < 20; ++t) {
        Conic O = random_conic_with_type(fr, t % 3, rng);
        std::vector<Pt> five(O.pts.begin() + 1, O.pts.begin() + 6);
        Conic R = conic_through(K, std::span<const Pt>(five.data(), 5));
        CHECK(normalised(R.form) == normalised(O.form));
        CHECK(R.pts == O.pts);
    }
}

TEST_CASE("conic through points with three collinear fails") {
    FieldTower tw(3);
    const Gf& K = tw.quad();
    std::vector<Pt> bad{make_point(K, {1, 0, 0}), make_point(K, {0, 1, 0}),
                        make_point(K, {1, 1, 0}), make_point(K, {0, 0, 1}),
                        make_point(K, {1, 1, 1})};
    CHECK_THROWS_AS(conic_through(K, std::span<const Pt>(bad.data(), 5)),
                    std::invalid_argument);
}

TEST_CASE("conic_to_pencil reproduces the tangent-conic split") {
    for (u32 q : {3u, 4u, 5u, 7u}) {
        FieldTower tw(q);
        Frame fr(tw);
        const Gf& K = tw.quad();
        // y^2 = xz
        QuadForm f;
        f.nvars = 3;
        f.c.fill(0);
        f.c[qf_index(1, 1, 3)] = 1;
        f.c[qf_index(0, 2, 3)] = K.neg(1);
        Conic O = make_conic(K, f);
        Pencil pe = conic_to_pencil(fr, O);
        const Gf& B = tw.base();
        // f_inf = y0^2 + t0 y1^2 - x0 z ; f_0 = t1 y1^2 + 2 y0 y1 - x1 z
        QuadForm qinf, q0;
        qinf.nvars = q0.nvars = 5;
        qinf.c.fill(0);
        q0.c.fill(0);
        qinf.c[qf_index(2, 2, 5)] = 1;
        qinf.c[qf_index(3, 3, 5)] = tw.t0();
        qinf.c[qf_index(0, 4, 5)] = B.neg(1);
        q0.c[qf_index(3, 3, 5)] = tw.t1();
        q0.c[qf_index(2, 3, 5)] = B.add(1, 1);
        q0.c[qf_index(1, 4, 5)] = B.neg(1);
        CHECK(pe.qinf == qinf);
        CHECK(pe.q0 == q0);
        // tangent case: every member meets g exactly in A0
        for (u32 t = 0; t <= q; ++t) {
            auto pts = pencil_member_on_g(fr, pe, t == q ? INF : t, Level::quad);
            REQUIRE(pts.size() == 1);
            CHECK(pts[0] == fr.A0());
        }
    }
}

TEST_CASE("pencil exactness: affine base locus equals the bb image (q=3,4)") {
    for (u32 q : {3u, 4u}) {
    FieldTower tw(q);
    Frame fr(tw);
    const Gf& K = tw.quad();
    const Gf& B = tw.base();
    DetRng rng(5, q);
    for (int want = 0; want <= 2; ++want) {
        Conic O = random_conic_with_type(fr, want, rng);
        Pencil pe = conic_to_pencil(fr, O);
        std::set<Pt> image;
        std::set<u32> inf_deltas;
        for (const Pt& p : O.pts) {
            if (p.c[2] != 0) image.insert(fr.bb_map(p));
            else inf_deltas.insert(fr.linf_delta_of(p));
        }
        // affine locus of the pencil
        std::set<Pt> locus;
        for (const Pt& p : PointRange(B, 4)) {
            if (p.c[4] == 0) continue;
            if (pe.qinf.eval(B, std::span<const u32>(p.c.data(), 5)) == 0 &&
                pe.q0.eval(B, std::span<const u32>(p.c.data(), 5)) == 0)
                locus.insert(p);
        }
        CHECK(locus == image);
        // locus on Sigma_inf is exactly the spread lines of O cap l_inf
        std::set<Pt> at_inf;
        for (const Pt& p : PointRange(B, 4)) {
            if (p.c[4] != 0) continue;
            if (pe.qinf.eval(B, std::span<const u32>(p.c.data(), 5)) == 0 &&
                pe.q0.eval(B, std::span<const u32>(p.c.data(), 5)) == 0)
                at_inf.insert(p);
        }
        std::set<Pt> expect;
        for (u32 d : inf_deltas)
            for (const Pt& p : fr.spread_line(d).points(B)) expect.insert(p);
        CHECK(at_inf == expect);
        (void)K;
    }
    }
}

TEST_CASE("sigma locus by slicing agrees with brute force") {
    FieldTower tw(3);
    Frame fr(tw);
    DetRng rng(9, 2);
    for (int t = 0; t < 6; ++t) {
        Conic O = random_conic_with_type(fr, t % 3, rng);
        Pencil pe = conic_to_pencil(fr, O);
        for (Level lv : {Level::base, Level::quad}) {
            const Gf& F = tw.level(lv);
            auto fast = quadric_pair_locus_in_sigma(F, pe.qinf, pe.q0);
            std::vector<Pt> brute;
            for (const Pt& p : PointRange(F, 3)) {
                std::array<u32, 5> v{p.c[0], p.c[1], p.c[2], p.c[3], 0};
                if (pe.qinf.eval(F, std::span<const u32>(v.data(), 5)) == 0 &&
                    pe.q0.eval(F, std::span<const u32>(v.data(), 5)) == 0)
                    brute.push_back(make_point(F, std::span<const u32>(v.data(), 5)));
            }
            std::sort(brute.begin(), brute.end());
            CHECK(fast == brute);
        }
    }
}

TEST_CASE("locus at infinity classification for the three types (q=3)") {
    FieldTower tw(3);
    Frame fr(tw);
    const Gf& K = tw.quad();
    const Gf& L = tw.quartic();
    DetRng rng(77, 3);
    // secant
    {
        Conic O = random_conic_with_type(fr, 2, rng);
        Pencil pe = conic_to_pencil(fr, O);
        std::vector<u32> ds;
        for (const Pt& p : O.pts)
            if (p.c[2] == 0) ds.push_back(fr.linf_delta_of(p));
        REQUIRE(ds.size() == 2);
        auto base = locus_at_infinity(fr, pe, Level::base);
        CHECK(base.lines.size() == 2);
        auto star = locus_at_infinity(fr, pe, Level::quad);
        REQUIRE(star.lines.size() == 4);
        std::set<Subspace> lines(star.lines.begin(), star.lines.end());
        CHECK(lines.count(fr.spread_line(ds[0])));
        CHECK(lines.count(fr.spread_line(ds[1])));
        Pt P = fr.g_point(ds[0]), Q = fr.g_point(ds[1]);
        std::array<Pt, 2> a{P, frobenius_point(K, Q)};
        std::array<Pt, 2> b{frobenius_point(K, P), Q};
        CHECK(lines.count(span(K, std::span<const Pt>(a.data(), 2))));
        CHECK(lines.count(span(K, std::span<const Pt>(b.data(), 2))));
    }
    // tangent
    {
        Conic O = random_conic_with_type(fr, 1, rng);
        Pencil pe = conic_to_pencil(fr, O);
        u32 d = INF;
        for (const Pt& p : O.pts)
            if (p.c[2] == 0) d = fr.linf_delta_of(p);
        for (Level lv : {Level::base, Level::quad, Level::quartic}) {
            auto loc = locus_at_infinity(fr, pe, lv);
            REQUIRE(loc.lines.size() == 1);
            CHECK(loc.lines[0] == fr.spread_line(d));
        }
    }
    // exterior
    {
        Conic O = random_conic_with_type(fr, 0, rng);
        Pencil pe = conic_to_pencil(fr, O);
        CHECK(locus_at_infinity(fr, pe, Level::base).points.empty());
        CHECK(locus_at_infinity(fr, pe, Level::quad).points.empty());
        auto loc = locus_at_infinity(fr, pe, Level::quartic);
        REQUIRE(loc.lines.size() == 4);
        // the four conjugate lines P P^q, shifted by Frobenius
        auto on_gstar = pencil_member_on_g(fr, pe, 0, Level::quartic);
        REQUIRE(on_gstar.size() == 2);
        Pt P = on_gstar[0];
        std::set<Subspace> expect;
        Pt cur = P;
        for (int i = 0; i < 4; ++i) {
            Pt nxt = frobenius_point(L, cur);
            std::array<Pt, 2> two{cur, nxt};
            expect.insert(span(L, std::span<const Pt>(two.data(), 2)));
            cur = nxt;
        }
        std::set<Subspace> got(loc.lines.begin(), loc.lines.end());
        CHECK(got == expect);
    }
}

TEST_CASE("nrc fit recovers the moment curve and twisted cubics") {
    FieldTower tw(7);
    const Gf& F = tw.base();
    // seven points of the moment curve
    RatCurve moment;
    moment.degree = 4;
    moment.space_dim = 4;
    for (auto& row : moment.m) row.fill(0);
    for (int i = 0; i < 5; ++i) moment.m[i][i] = 1;
    std::vector<Pt> pts;
    for (u32 t : {0u, 1u, 2u, 3u, 4u, 5u, INF}) pts.push_back(moment.at(F, t));
    RatCurve fit = nrc_through(F, std::span<const Pt>(pts.data(), 7));
    std::set<Pt> a, b;
    for (const Pt& p : moment.points(F)) a.insert(p);
    for (const Pt& p : fit.points(F)) b.insert(p);
    CHECK(a == b);
    // six points of a twisted cubic inside a 3-space of PG(4,q)
    DetRng rng(11, 4);
    RatCurve tc;
    tc.degree = 3;
    tc.space_dim = 4;
    for (auto& row : tc.m) row.fill(0);
    // random full-column-rank 5x4
    while (true) {
        for (int r = 0; r < 5; ++r)
            for (int k = 0; k < 4; ++k) tc.m[r][k] = rng.below(7);
        std::vector<std::vector<u32>> chk(5, std::vector<u32>(4));
        for (int r = 0; r < 5; ++r)
            for (int k = 0; k < 4; ++k) chk[r][k] = tc.m[r][k];
        if (rref(F, chk) == 4) break;
    }
    std::vector<Pt> six;
    for (u32 t : {0u, 1u, 2u, 3u, 4u, INF}) six.push_back(tc.at(F, t));
    RatCurve fit3 = nrc_through(F, std::span<const Pt>(six.data(), 6));
    std::set<Pt> c, d;
    for (const Pt& p : tc.points(F)) c.insert(p);
    for (const Pt& p : fit3.points(F)) d.insert(p);
    CHECK(c == d);
    CHECK(fit3.ambient_span(F).proj_dim() == 3);
    // degenerate input: a point on a chord makes five points coplanar-ish
    std::vector<Pt> degen = pts;
    std::array<u32, 5> chord{};
    for (int i = 0; i < 5; ++i) chord[i] = F.add(pts[0].c[i], pts[1].c[i]);
    degen[6] = make_point(F, std::span<const u32>(chord.data(), 5));
    bool threw = false;
    try {
        nrc_through(F, std::span<const Pt>(degen.data(), 7));
    } catch (const std::invalid_argument&) {
        threw = true;
    } catch (const std::logic_error&) {
        threw = true;
    }
    CHECK(threw);
}

TEST_CASE("conic_from_params fits aligned data") {
    FieldTower tw(3);
    const Gf& F = tw.base();
    RatCurve c;
    c.degree = 2;
    c.space_dim = 4;
    for (auto& row : c.m) row.fill(0);
    c.m[0][0] = 1;
    c.m[1][1] = 1;
    c.m[2][2] = 1;
    std::vector<std::pair<u32, Pt>> entries;
    for (u32 t : {0u, 1u, 2u, INF}) entries.push_back({t, c.at(F, t)});
    RatCurve fit = conic_from_params(
        F, std::span<const std::pair<u32, Pt>>(entries.data(), entries.size()));
    for (u32 t : {0u, 1u, 2u, INF}) CHECK(fit.at(F, t) == c.at(F, t));
}

TEST_CASE("baer subplane through a rational quadrangle is the real subplane") {
    FieldTower tw(3);
    Frame fr(tw);
    const Gf& K = tw.quad();
    std::vector<Pt> quad{make_point(K, {1, 0, 0}), make_point(K, {0, 1, 0}),
                         make_point(K, {0, 0, 1}), make_point(K, {1, 1, 1})};
    BaerSubplane B = baer_subplane_through(fr, std::span<const Pt>(quad.data(), 4));
    CHECK_FALSE(B.tangent);
    CHECK(B.points.size() == 13);
    for (const Pt& p : B.points) CHECK(point_in_subfield(p, 3));
    CHECK(is_baer_subplane(fr, B.points));
    CHECK(B.linf_points.size() == 4);  // secant
    // three collinear in the quadrangle is rejected
    std::vector<Pt> bad{make_point(K, {1, 0, 0}), make_point(K, {0, 1, 0}),
                        make_point(K, {1, 1, 0}), make_point(K, {1, 1, 1})};
    CHECK_THROWS_AS(baer_subplane_through(fr, std::span<const Pt>(bad.data(), 4)),
                    std::invalid_argument);
}

TEST_CASE("random tangent and secant subplanes behave") {
    for (u32 q : {3u, 4u}) {
        FieldTower tw(q);
        Frame fr(tw);
        DetRng rng(6, q);
        BaerSubplane T = random_subplane(fr, true, rng);
        CHECK(T.tangent);
        CHECK(is_baer_subplane(fr, T.points));
        BaerSubplane S = random_subplane(fr, false, rng);
        CHECK_FALSE(S.tangent);
        CHECK(S.linf_points.size() == q + 1);
        CHECK(is_baer_subplane(fr, S.points));
        // chart coordinates round trip
        for (const Pt& p : T.points) {
            auto xyz = chart_coords(fr, T, p);
            CHECK(chart_point(fr, T, std::span<const u32>(xyz.data(), 3)) == p);
        }
    }
}

TEST_CASE("fq_conic_through: subfield subconic of the moment conic") {
    FieldTower tw(3);
    Frame fr(tw);
    const Gf& K = tw.quad();
    QuadForm f;
    f.nvars = 3;
    f.c.fill(0);
    f.c[qf_index(1, 1, 3)] = 1;
    f.c[qf_index(0, 2, 3)] = K.neg(1);
    Conic O = make_conic(K, f);
    FqConic C = fq_conic_through(fr, O, make_point(K, {1, 0, 0}),
                                 make_point(K, {0, 0, 1}),
                                 make_point(K, {1, 1, 1}));
    CHECK(C.points.size() == 4);
    std::set<Pt> expect;
    for (u32 th = 0; th < 3; ++th)
        expect.insert(make_point(K, {1, th, K.mul(th, th)}));
    expect.insert(make_point(K, {0, 0, 1}));
    std::set<Pt> got(C.points.begin(), C.points.end());
    CHECK(got == expect);
    for (const Pt& p : C.points) CHECK(point_in_subfield(p, 3));
}

TEST_CASE("q(q^2+1) subconics at q=3, counted exhaustively") {
    FieldTower tw(3);
    Frame fr(tw);
    const Gf& K = tw.quad();
    DetRng rng(15, 5);
    Conic O = random_conic_with_type(fr, 2, rng);
    std::set<std::vector<Pt>> distinct;
    for (size_t i = 0; i < O.pts.size(); ++i)
        for (size_t j = i + 1; j < O.pts.size(); ++j)
            for (size_t k = j + 1; k < O.pts.size(); ++k) {
                FqConic C = fq_conic_through(fr, O, O.pts[i], O.pts[j], O.pts[k]);
                distinct.insert(C.points);
            }
    CHECK(distinct.size() == 30);  // q (q^2 + 1)
    // cross-ratio oracle: each subconic is a Baer subline of the conic param
    RatCurve par = conic_param(K, O);
    for (const auto& pts : distinct) {
        std::vector<u32> params;
        for (const Pt& p : pts) params.push_back(par.param_of(K, p));
        CHECK(params_in_baer_subline(K, 3,
                                     std::span<const u32>(params.data(),
                                                          params.size())));
    }
}

TEST_CASE("ruled cubic from a tangent subplane (q=3): structure and census") {
    FieldTower tw(3);
    Frame fr(tw);
    DetRng rng(21, 6);
    BaerSubplane B = random_subplane(fr, true, rng);
    RuledCubic V = ruled_cubic_from_tangent_subplane(fr, B);
    CHECK(V.points.size() == 16);  // q^2 + 2q + 1
    CHECK(V.generators.size() == 4);
    // affine points are exactly the images of B's affine points
    std::set<Pt> affine;
    for (const Pt& p : V.points)
        if (p.c[4] != 0) affine.insert(p);
    CHECK(affine.size() == 12);  // q^2 + q
    std::set<Pt> images;
    for (const Pt& b : B.points)
        if (b.c[2] != 0) images.insert(fr.bb_map(b));
    CHECK(affine == images);
    auto cc = hyperplane_census(fr, V);
    CHECK(cc.directrix_only == 3);
    CHECK(cc.directrix_one_gen == 4);
    CHECK(cc.directrix_two_gen == 6);
    CHECK(cc.conic_and_gen == 36);
    CHECK(cc.twisted_cubic == 72);
    CHECK(cc.tc_generator_property);
}

TEST_CASE("hyperplane census q=4 matches the formulas") {
    FieldTower tw(4);
    Frame fr(tw);
    DetRng rng(22, 7);
    BaerSubplane B = random_subplane(fr, true, rng);
    RuledCubic V = ruled_cubic_from_tangent_subplane(fr, B);
    auto cc = hyperplane_census(fr, V);
    CHECK(cc.directrix_only == 6);
    CHECK(cc.directrix_one_gen == 5);
    CHECK(cc.directrix_two_gen == 10);
    CHECK(cc.conic_and_gen == 80);
    CHECK(cc.twisted_cubic == 240);
    CHECK(cc.tc_generator_property);
    u64 total = cc.directrix_only + cc.directrix_one_gen + cc.directrix_two_gen +
                cc.conic_and_gen + cc.twisted_cubic;
    CHECK(total == 341);
}

TEST_CASE("ruled cubic extension: equations and parameterisation agree (q=3)") {
    FieldTower tw(3);
    Frame fr(tw);
    const Gf& K = tw.quad();
    DetRng rng(30, 8);
    BaerSubplane B = random_subplane(fr, true, rng);
    RuledCubic V = ruled_cubic_from_tangent_subplane(fr, B);
    auto qs = ruled_cubic_quadrics(fr, V);
    CHECK(qs.size() == 3);  // the surface is the intersection of 3 quadrics
    // at base level the system cuts out exactly the surface points
    std::set<Pt> base_eq;
    for (const Pt& p : PointRange(tw.base(), 4)) {
        bool all = true;
        for (const QuadForm& f : qs)
            all &= f.eval(tw.base(), std::span<const u32>(p.c.data(), 5)) == 0;
        if (all) base_eq.insert(p);
    }
    std::set<Pt> vpts(V.points.begin(), V.points.end());
    CHECK(base_eq == vpts);
    // extension by equations over F_{q^2}
    std::set<Pt> by_eq;
    for (const Pt& p : PointRange(K, 4)) {
        bool all = true;
        for (const QuadForm& f : qs)
            all &= f.eval(K, std::span<const u32>(p.c.data(), 5)) == 0;
        if (all) by_eq.insert(p);
    }
    auto par = ruled_cubic_points_by_parameterisation(fr, V, Level::quad);
    std::set<Pt> by_par(par.begin(), par.end());
    CHECK(by_eq == by_par);
    // the extended surface contains g and g^q
    for (const Pt& p : fr.g().points(K)) CHECK(by_eq.count(p));
    for (const Pt& p : fr.gq().points(K)) CHECK(by_eq.count(p));
}

TEST_CASE("specialness: bb image of a Baer subline disjoint from l_inf") {
    FieldTower tw(3);
    Frame fr(tw);
    const Gf& K = tw.quad();
    DetRng rng(33, 9);
    // a line of PG(2,q^2) other than l_inf, and a subline avoiding its
    // infinite point
    while (true) {
        u32 x = rng.below(9), y = rng.below(9);
        Pt A = make_point(K, {x, y, 1});
        u32 x2 = rng.below(9), y2 = rng.below(9);
        if (x == x2 && y == y2) continue;
        Pt Bp = make_point(K, {x2, y2, 1});
        std::array<Pt, 2> two{A, Bp};
        Subspace ell = span(K, std::span<const Pt>(two.data(), 2));
        // subline through A, B and one more affine point of the line
        std::vector<Pt> others;
        for (const Pt& p : ell.points(K))
            if (p.c[2] != 0 && p != A && p != Bp) others.push_back(p);
        bool done = false;
        for (const Pt& C : others) {
            // parameterise the line and take the Baer subline through A,B,C
            std::vector<u32> params;
            RatCurve dummy;  // parameterise via line_param: use mob machinery
            (void)dummy;
            // use the curve-free route: subline params on the line
            // line param: theta . row0 + row1
            auto par_of = [&](const Pt& p) {
                int piv0 = -1, piv1 = -1;
                for (int j = 0; j <= 2; ++j) {
                    if (piv0 < 0 && ell.row(0)[j]) piv0 = j;
                    else if (piv0 >= 0 && piv1 < 0 && ell.row(1)[j]) piv1 = j;
                }
                if (p.c[piv1] == 0) return INF;
                return K.div(p.c[piv0], p.c[piv1]);
            };
            auto subpar = baer_subline_params(K, 3, par_of(A), par_of(Bp), par_of(C));
            std::vector<Pt> subpts;
            bool hits_inf = false;
            for (u32 s : subpar) {
                Pt p;
                if (s == INF) {
                    p = make_point(K, std::span<const u32>(ell.row(0).data(), 3));
                } else {
                    std::array<u32, 3> v{};
                    for (int j = 0; j < 3; ++j)
                        v[j] = K.add(K.mul(s, ell.row(0)[j]), ell.row(1)[j]);
                    p = make_point(K, std::span<const u32>(v.data(), 3));
                }
                if (p.c[2] == 0) hits_inf = true;
                subpts.push_back(p);
            }
            if (hits_inf) continue;
            // bb images are q+1 points on a conic; build it by params
            std::vector<std::pair<u32, Pt>> entries;
            for (size_t i = 0; i < subpar.size(); ++i)
                entries.push_back({subpar[i], fr.bb_map(subpts[i])});
            RatCurve conic = conic_from_params(
                K, std::span<const std::pair<u32, Pt>>(entries.data(),
                                                       entries.size()));
            // defined over F_q? normalise rows: entries live at quad level but
            // points are rational; verify the point set is rational
            for (const auto& [s, p] : entries) CHECK(point_in_subfield(p, 3));
            Specialness sp = specialness(fr, conic);
            CHECK(sp.kind == SpecialKind::g_special_conic);
            done = true;
            break;
        }
        if (done) break;
    }
}

TEST_CASE("circle partition at q=3: two reguli plus two lines cover S") {
    FieldTower tw(3);
    Frame fr(tw);
    auto cp = circle_partition(fr, 0, INF);
    CHECK(cp.cells.size() == 2);
    for (auto& cell : cp.cells) CHECK(cell.size() == 4);
    CHECK(cp.swapped_spread.size() == 10);
    std::set<u32> covered{0, INF};
    for (auto& cell : cp.cells)
        for (u32 d : cell) covered.insert(d);
    CHECK(covered.size() == 10);  // q^2 + 1
}

TEST_CASE("ell_inf pencil of a 3-space and back") {
    FieldTower tw(3);
    Frame fr(tw);
    const Gf& F = tw.base();
    // a 3-space containing the spread line of delta = 1
    Subspace Pi = span_of(F, fr.spread_line(1), make_point(F, {0, 0, 0, 0, 1}));
    Pi = span_of(F, Pi, make_point(F, {1, 0, 0, 0, 1}));
    REQUIRE(Pi.proj_dim() == 3);
    BaerPencil K = ell_inf_pencil_of_3space(fr, Pi);
    CHECK(K.vertex == fr.linf_point(1));
    CHECK(K.affine_points.size() == 27);  // q^3
    CHECK(K.lines.size() == 4);           // q+1 cone lines
    CHECK(K.ell_inf_pencil);
    CHECK(pencil_to_3space(fr, K) == Pi);
}

TEST_CASE("partition of a tangent subplane into q conics (q=3)") {
    FieldTower tw(3);
    Frame fr(tw);
    const u32 q = 3;
    DetRng rng(44, 10);
    BaerSubplane B = random_subplane(fr, true, rng);
    // a line of B through the tangent point
    auto that = chart_coords(fr, B, B.tangent_point);
    std::vector<Pt> mline;
    const Gf& Fq = tw.base();
    for (const Pt& dual : PointRange(Fq, 2)) {
        u32 dot = 0;
        for (int i = 0; i < 3; ++i) dot = Fq.add(dot, Fq.mul(dual.c[i], that[i]));
        if (dot != 0) continue;
        for (const Pt& x : PointRange(Fq, 2)) {
            u32 d2 = 0;
            for (int i = 0; i < 3; ++i) d2 = Fq.add(d2, Fq.mul(dual.c[i], x.c[i]));
            if (d2 == 0) {
                std::array<u32, 3> xv{x.c[0], x.c[1], x.c[2]};
                mline.push_back(chart_point(fr, B, std::span<const u32>(xv.data(), 3)));
            }
        }
        break;
    }
    REQUIRE(mline.size() == q + 1);
    // a point of l_inf other than the tangent point
    Pt Pbar = fr.linf_point(0);
    if (Pbar == B.tangent_point) Pbar = fr.linf_point(1);
    auto cells = partition_tangent_subplane(
        fr, B, std::span<const Pt>(mline.data(), mline.size()), Pbar);
    CHECK(cells.size() == q);
    int degenerate = 0;
    size_t affine_total = 0;
    for (const auto& cell : cells) {
        affine_total += cell.affine_points.size();
        if (cell.degenerate) {
            ++degenerate;
            CHECK(cell.affine_points.size() == 2 * q);  // derived cell size
        } else {
            CHECK(cell.affine_points.size() == q);  // derived cell size
            REQUIRE(cell.extension.has_value());
            // the extension passes through the chosen vertex
            bool has = std::binary_search(cell.extension->pts.begin(),
                                          cell.extension->pts.end(), Pbar) ||
                       std::count(cell.extension->pts.begin(),
                                  cell.extension->pts.end(), Pbar) > 0;
            CHECK(has);
        }
    }
    CHECK(degenerate == 1);
    CHECK(affine_total == q * q + q);
}

TEST_CASE("the q=7 moment curve / quadric pair is tight") {
    FieldTower tw(7);
    const Gf& F = tw.base();
    const Gf& K = tw.quad();
    RatCurve moment;
    moment.degree = 4;
    moment.space_dim = 4;
    for (auto& row : moment.m) row.fill(0);
    for (int i = 0; i < 5; ++i) moment.m[i][i] = 1;
    // f = -x0 x1 - x3^2 + x2 x4 + x3 x4
    QuadForm f;
    f.nvars = 5;
    f.c.fill(0);
    f.c[qf_index(0, 1, 5)] = F.neg(1);
    f.c[qf_index(3, 3, 5)] = F.neg(1);
    f.c[qf_index(2, 4, 5)] = 1;
    f.c[qf_index(3, 4, 5)] = 1;
    // contained over F_7: f(P_theta) = theta^7 - theta
    for (u32 th = 0; th < 7; ++th) {
        Pt p = moment.at(F, th);
        CHECK(f.eval(F, std::span<const u32>(p.c.data(), 5)) == 0);
    }
    Pt pinf = moment.at(F, INF);
    CHECK(f.eval(F, std::span<const u32>(pinf.c.data(), 5)) == 0);
    // but not over F_49: the witness P_tau escapes
    Pt ptau = moment.at(K, tw.tau());
    u32 val = f.eval(K, std::span<const u32>(ptau.c.data(), 5));
    CHECK(val != 0);
    u32 t7 = K.pow(tw.tau(), 7);
    CHECK(val == K.sub(t7, tw.tau()));
    CHECK_FALSE(curve_in_quadric(K, moment, f));
}

TEST_CASE("nrc-in-quadric extension holds for q=8,9 samples") {
    for (u32 q : {8u, 9u}) {
        FieldTower tw(q);
        const Gf& F = tw.base();
        const Gf& K = tw.quad();
        DetRng rng(55, q);
        int done = 0;
        while (done < 20) {
            RatCurve c;
            c.degree = 4;
            c.space_dim = 4;
            for (auto& row : c.m) row.fill(0);
            for (int r = 0; r < 5; ++r)
                for (int k = 0; k < 5; ++k) c.m[r][k] = rng.below(q);
            std::vector<std::vector<u32>> chk(5, std::vector<u32>(5));
            for (int r = 0; r < 5; ++r)
                for (int k = 0; k < 5; ++k) chk[r][k] = c.m[r][k];
            if (rref(F, chk) != 5) continue;
            auto pts = c.points(F);
            auto qs = quadrics_through(F, std::span<const Pt>(pts.data(), pts.size()));
            if (qs.empty()) continue;
            const QuadForm& f = qs[rng.below(static_cast<u32>(qs.size()))];
            CHECK(curve_in_quadric(F, c, f));
            CHECK(curve_in_quadric(K, c, f));
            for (u32 th = 0; th < K.order(); ++th) {
                if (th % 17 != 0) continue;
                Pt p = c.at(K, th);
                CHECK(f.eval(K, std::span<const u32>(p.c.data(), 5)) == 0);
            }
            ++done;
        }
    }
}

TEST_CASE("polynomial gcd keeps common factors with minimal multiplicity") {
    FieldTower tw(5);
    const Gf& F = tw.base();
    std::vector<u32> x1{F.neg(1), 1}, x2{F.neg(2), 1}, x3{F.neg(3), 1};
    auto a = poly_mul(F, poly_mul(F, x1, x1), x2);  // (x-1)^2 (x-2)
    auto b = poly_mul(F, x1, x3);                   // (x-1)(x-3)
    auto g = poly_gcd(F, a, b);
    CHECK(poly_deg(g) == 1);
    auto r = poly_roots(F, g);
    REQUIRE(r.size() == 1);
    CHECK(r[0] == std::make_pair(1u, 1));
}

TEST_CASE("the moment curve is not special") {
    FieldTower tw(9);
    Frame fr(tw);
    RatCurve moment;
    moment.degree = 4;
    moment.space_dim = 4;
    for (auto& row : moment.m) row.fill(0);
    for (int i = 0; i < 5; ++i) moment.m[i][i] = 1;
    Specialness sp = specialness(fr, moment);
    CHECK(sp.kind == SpecialKind::not_special);
    // and a conic far from the congruence lines is not (PQ^q)-special
    RatCurve conic;
    conic.degree = 2;
    conic.space_dim = 4;
    for (auto& row : conic.m) row.fill(0);
    conic.m[0][0] = 1;
    conic.m[1][1] = 1;
    conic.m[4][2] = 1;  // (1, t, 0, 0, t^2): affine plane conic
    CHECK_FALSE(special_conic_wrt(fr, fr.g_point(0), fr.g_point(1), conic));
}

TEST_CASE("a random point set is not mistaken for a Baer subplane") {
    FieldTower tw(3);
    Frame fr(tw);
    const Gf& K = tw.quad();
    DetRng rng(99, 0);
    std::set<Pt> pts;
    while (pts.size() < 13) {
        std::array<u32, 3> c{rng.below(9), rng.below(9), rng.below(9)};
        bool nz = c[0] || c[1] || c[2];
        if (nz) pts.insert(make_point(K, std::span<const u32>(c.data(), 3)));
    }
    std::vector<Pt> v(pts.begin(), pts.end());
    CHECK_FALSE(is_baer_subplane(fr, v));
    // wrong size is rejected outright
    v.pop_back();
    CHECK_FALSE(is_baer_subplane(fr, v));
}

TEST_CASE("synthesize a g-special NRC4 directly") {
    FieldTower tw(9);
    Frame fr(tw);
    const Gf& F = tw.base();
    const Gf& K = tw.quad();
    DetRng rng(66, 12);
    // z-row: product of two distinct irreducible quadratics
    auto minpoly_quad = [&](u32 theta) {
        // (x - theta)(x - theta^q): trace and norm are rational
        u32 tr = K.add(theta, K.frob(theta));
        u32 nm = K.mul(theta, K.frob(theta));
        return std::vector<u32>{nm, F.neg(tr), 1};
    };
    int made = 0;
    while (made < 5) {
        u32 th1 = 9 + rng.below(72);  // outside F_q
        u32 th2 = 9 + rng.below(72);
        if (th1 == th2 || K.frob(th1) == th2) continue;
        if (th1 < 9 || th2 < 9) continue;
        auto z = poly_mul(F, minpoly_quad(th1), minpoly_quad(th2));
        auto curve = synthesize_special_curve(fr, 4, z, {th1, th2}, Level::quad, rng);
        if (!curve) continue;
        Specialness sp = specialness(fr, *curve);
        if (sp.kind != SpecialKind::g_special_nrc4) continue;
        CHECK(sp.g_params.size() == 2);
        ++made;
    }
    CHECK(made == 5);
}
