// Checkers for conics in Baer subplanes: the partition results, the secant
// case, and the specialness characterisations of twisted cubics and
// 4-dimensional normal rational curves.

#include <map>
#include <set>

#include "checks_common.hpp"

namespace bbv::checks {

using namespace bbv::detail;

namespace {

// the q+1 lines of a subplane B through one of its points, as point lists
std::vector<std::vector<Pt>> subplane_lines_through(const Frame& fr,
                                                    const BaerSubplane& B,
                                                    const Pt& X) {
    const Gf& Fq = fr.Fq();
    auto xhat = chart_coords(fr, B, X);
    std::vector<std::vector<Pt>> out;
    for (const Pt& dual : PointRange(Fq, 2)) {
        u32 dot = 0;
        for (int i = 0; i < 3; ++i) dot = Fq.add(dot, Fq.mul(dual.c[i], xhat[i]));
        if (dot != 0) continue;
        std::vector<Pt> line;
        for (const Pt& x : PointRange(Fq, 2)) {
            u32 d2 = 0;
            for (int i = 0; i < 3; ++i) d2 = Fq.add(d2, Fq.mul(dual.c[i], x.c[i]));
            if (d2 != 0) continue;
            std::array<u32, 3> xv{x.c[0], x.c[1], x.c[2]};
            line.push_back(chart_point(fr, B, std::span<const u32>(xv.data(), 3)));
        }
        out.push_back(std::move(line));
    }
    return out;
}

// [C] for an F_q-conic through the tangent point: the twisted cubic fitted
// from six affine images, validated on the rest
std::optional<RatCurve> tc_image(const Frame& fr, const SubplaneConic& C,
                                 const Pt& Tbar) {
    const Gf& Fq = fr.Fq();
    std::vector<Pt> imgs;
    for (const Pt& p : C.points)
        if (p != Tbar) imgs.push_back(fr.bb_map(p));
    if (imgs.size() < 6) return std::nullopt;
    RatCurve N;
    try {
        N = nrc_through(Fq, std::span<const Pt>(imgs.data(), 6));
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
    std::set<Pt> curve_pts;
    for (const Pt& p : N.points(Fq)) curve_pts.insert(p);
    for (const Pt& p : imgs)
        if (!curve_pts.count(p)) return std::nullopt;
    return N;
}

// [C] for an F_q-conic avoiding the tangent point: the NRC4 through the
// q+1 affine images
std::optional<RatCurve> nrc4_image(const Frame& fr, const SubplaneConic& C) {
    const Gf& Fq = fr.Fq();
    std::vector<Pt> imgs;
    for (const Pt& p : C.points) imgs.push_back(fr.bb_map(p));
    if (imgs.size() < 7) return std::nullopt;
    RatCurve N;
    try {
        N = nrc_through(Fq, std::span<const Pt>(imgs.data(), 7));
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
    std::set<Pt> curve_pts;
    for (const Pt& p : N.points(Fq)) curve_pts.insert(p);
    for (const Pt& p : imgs)
        if (!curve_pts.count(p)) return std::nullopt;
    return N;
}

}  // namespace

CheckRecord partition_intro(const Frame& fr, const Mode& mode) {
    if (fr.q() < 3)
        return skipped("thm:partition-intro", fr, "needs q>=3 for conic cells");
    CheckRecord rec = make_record("thm:partition-intro", fr);
    const Gf& Fq = fr.Fq();
    u32 q = fr.q();
    DetRng rng(mode.seed, stream_of("thm:partition-intro", q));
    u64 n = std::max<u64>(mode.samples / 40, 3);
    for (u64 i = 0; i < n; ++i) {
        BaerSubplane B = random_subplane(fr, true, rng);
        u32 dT = fr.linf_delta_of(B.tangent_point);
        u32 dP = rng.below(q * q + 1);
        u32 deltaP = dP == q * q ? INF : dP;
        if (deltaP == dT) continue;
        // every affine 3-space through [P] meets B in a conic through T or
        // in two lines; counts q^2-1 and q+1
        auto duals = fr.spread_line(deltaP).dual_forms(Fq);
        u64 conic_type = 0, twoline_type = 0;
        for (const Pt& combo : PointRange(Fq, 2)) {
            std::array<u32, 5> h{};
            for (int i = 0; i < 5; ++i)
                for (int r = 0; r < 3; ++r)
                    h[i] = Fq.add(h[i], Fq.mul(combo.c[r], duals[r][i]));
            bool sigma = h[0] == 0 && h[1] == 0 && h[2] == 0 && h[3] == 0;
            if (sigma) continue;
            // section of B: affine points whose image lies on the hyperplane
            std::vector<Pt> cell;
            for (const Pt& b : B.points) {
                if (b.c[2] == 0) continue;
                Pt img = fr.bb_map(b);
                u32 acc = 0;
                for (int k = 0; k < 5; ++k) acc = Fq.add(acc, Fq.mul(h[k], img.c[k]));
                if (acc == 0) cell.push_back(b);
            }
            // classify the cell plus the tangent point in chart coordinates
            std::vector<std::array<u32, 3>> coords;
            coords.push_back(chart_coords(fr, B, B.tangent_point));
            for (const Pt& p : cell) coords.push_back(chart_coords(fr, B, p));
            std::vector<std::vector<u32>> rows;
            for (auto& xyz : coords) {
                std::vector<u32> r(6, 0);
                int idx = 0;
                for (int a = 0; a < 3; ++a)
                    for (int b2 = a; b2 < 3; ++b2, ++idx)
                        r[idx] = Fq.mul(xyz[a], xyz[b2]);
                rows.push_back(std::move(r));
            }
            auto ns = null_space(Fq, rows);
            std::set<std::array<u32, 3>> want(coords.begin(), coords.end());
            bool classified = false;
            for (const Pt& cmb : PointRange(Fq, static_cast<int>(ns.size()) - 1)) {
                QuadForm f;
                f.nvars = 3;
                f.c.fill(0);
                for (size_t bi = 0; bi < ns.size(); ++bi)
                    for (int k = 0; k < 6; ++k)
                        f.c[k] = Fq.add(f.c[k], Fq.mul(cmb.c[bi], ns[bi][k]));
                if (f.is_zero()) continue;
                std::set<std::array<u32, 3>> zs;
                for (const Pt& x : PointRange(Fq, 2)) {
                    std::array<u32, 3> xv{x.c[0], x.c[1], x.c[2]};
                    if (f.eval(Fq, std::span<const u32>(xv.data(), 3)) == 0)
                        zs.insert(xv);
                }
                if (zs != want) continue;
                classified = true;
                if (conic_form_nondegenerate(Fq, f)) ++conic_type;
                else ++twoline_type;
                break;
            }
            if (!classified) {
                fail_with(rec, "pencil section of B fits no conic form",
                          json{{"cell_size", cell.size()}});
                return rec;
            }
        }
        u64 q64 = q;
        if (conic_type != q64 * q64 - 1 || twoline_type != q64 + 1) {
            fail_with(rec, "pencil type counts mismatch",
                      json{{"conic_type", conic_type},
                           {"two_lines", twoline_type}});
            return rec;
        }
    }
    rec.counts["instances"] = n;
    rec.counts["conic_type"] = static_cast<u64>(q) * q - 1;
    rec.counts["two_line_type"] = q + 1;
    return rec;
}

CheckRecord tgt_baby(const Frame& fr, const Mode& mode) {
    if (fr.q() < 3)
        return skipped("cor:tgt-baby", fr, "needs q>=3 for conic cells");
    CheckRecord rec = make_record("cor:tgt-baby", fr);
    const Gf& Fq = fr.Fq();
    u32 q = fr.q();
    DetRng rng(mode.seed, stream_of("cor:tgt-baby", q));
    u64 n = std::max<u64>(mode.samples / 10, 10);
    for (u64 i = 0; i < n; ++i) {
        BaerSubplane B = random_subplane(fr, true, rng);
        SubplaneConic C = random_conic_in_subplane(fr, B, 1, rng);
        // the unique l_inf-Baer pencil containing C: a 3-space over the
        // affine image whose section of B is exactly C
        std::vector<Pt> imgs;
        for (const Pt& p : C.points)
            if (p != B.tangent_point) imgs.push_back(fr.bb_map(p));
        Subspace sp = span(Fq, std::span<const Pt>(imgs.data(), imgs.size()));
        std::set<Pt> want(imgs.begin(), imgs.end());
        std::vector<u32> vertices;
        for (const Pt& dual : PointRange(Fq, 4)) {
            std::array<u32, 5> h{dual.c[0], dual.c[1], dual.c[2], dual.c[3],
                                 dual.c[4]};
            bool sigma = h[0] == 0 && h[1] == 0 && h[2] == 0 && h[3] == 0;
            if (sigma) continue;
            auto on = [&](const Pt& p) {
                u32 acc = 0;
                for (int k = 0; k < 5; ++k) acc = Fq.add(acc, Fq.mul(h[k], p.c[k]));
                return acc == 0;
            };
            bool contains_c = true;
            for (const Pt& p : imgs) contains_c &= on(p);
            if (!contains_c) continue;
            // the pencil of this 3-space meets B exactly in C
            std::set<Pt> got;
            for (const Pt& b : B.points) {
                if (b.c[2] == 0) continue;
                if (on(fr.bb_map(b))) got.insert(fr.bb_map(b));
            }
            if (got != want) continue;
            Subspace Pi =
                Subspace::hyperplane(Fq, 4, std::span<const u32>(h.data(), 5));
            for (u32 dc = 0; dc <= q * q; ++dc) {
                u32 d = dc == q * q ? INF : dc;
                if (Pi.contains(Fq, fr.spread_line(d))) vertices.push_back(d);
            }
        }
        auto linf = conic_linf_params(fr, C.cplus, Level::quad);
        u32 dT = fr.linf_delta_of(B.tangent_point);
        std::optional<u32> dL;
        for (auto [d, m] : linf)
            if (d != dT) dL = d;
        if (vertices.size() != 1 || !dL || vertices[0] != *dL) {
            fail_with(rec, "pencil vertex is not the second intersection",
                      json{{"pencils", vertices.size()},
                           {"Cplus_linf", dL ? param_str(*dL) : "none"},
                           {"span_dim", sp.proj_dim()}});
            return rec;
        }
    }
    rec.counts["conics"] = n;
    return rec;
}

CheckRecord partition(const Frame& fr, const Mode& mode) {
    if (fr.q() < 3)
        return skipped("thm:partition", fr, "needs q>=3 for conic cells");
    CheckRecord rec = make_record("thm:partition", fr);
    u32 q = fr.q();
    DetRng rng(mode.seed, stream_of("thm:partition", q));
    u64 n = std::max<u64>(mode.samples / 10, 20);
    u64 degenerate_size = 2 * q, conic_size = q;  // derived cell sizes
    for (u64 i = 0; i < n; ++i) {
        BaerSubplane B = random_subplane(fr, true, rng);
        auto lines = subplane_lines_through(fr, B, B.tangent_point);
        const auto& m = lines[rng.below(static_cast<u32>(lines.size()))];
        u32 dP = rng.below(q * q + 1);
        u32 deltaP = dP == q * q ? INF : dP;
        if (deltaP == fr.linf_delta_of(B.tangent_point)) {
            --i;
            continue;
        }
        Pt Pbar = fr.linf_point(deltaP);
        std::vector<TangentPartitionCell> cells;
        try {
            cells = partition_tangent_subplane(
                fr, B, std::span<const Pt>(m.data(), m.size()), Pbar);
        } catch (const std::exception& e) {
            fail_with(rec, std::string("partition failed: ") + e.what(),
                      json{{"P", pt_str(Pbar)}});
            return rec;
        }
        u64 degen = 0;
        bool ok = cells.size() == q;
        for (const auto& cell : cells) {
            if (cell.degenerate) {
                ++degen;
                ok &= cell.affine_points.size() == degenerate_size;
            } else {
                ok &= cell.affine_points.size() == conic_size;
                ok &= cell.extension.has_value();
                if (cell.extension) {
                    bool through = false;
                    for (const Pt& p : cell.extension->pts) through |= p == Pbar;
                    ok &= through;
                }
            }
        }
        ok &= degen == 1;
        if (!ok) {
            fail_with(rec, "partition cells malformed",
                      json{{"cells", cells.size()}, {"degenerate", degen}});
            return rec;
        }
    }
    rec.counts["triples"] = n;
    rec.counts["degenerate_cell_affine_points"] = degenerate_size;
    rec.counts["conic_cell_affine_points"] = conic_size;
    return rec;
}

CheckRecord sect_conic(const Frame& fr, const Mode& mode) {
    if (fr.q() < 3) return skipped("lem:sect-conic", fr, "needs q>=3");
    CheckRecord rec = make_record("lem:sect-conic", fr);
    const Gf& Fq = fr.Fq();
    u32 q = fr.q();
    DetRng rng(mode.seed, stream_of("lem:sect-conic", q));
    u64 n = std::max<u64>(mode.samples / 4, 30);
    u64 case1 = 0, case2 = 0, case3 = 0;
    for (u64 i = 0; i < n; ++i) {
        BaerSubplane B = random_subplane(fr, false, rng);
        SubplaneConic C = random_conic_in_subplane(fr, B, 0, rng);
        auto linf = conic_linf_params(fr, C.cplus, Level::quad);
        if (linf.empty()) {
            fail_with(rec, "C-plus misses l_inf over F_{q^2} in a secant subplane",
                      json{});
            return rec;
        }
        // [B] is a plane; [C] is a conic in it
        std::vector<Pt> imgsB;
        for (const Pt& p : B.points)
            if (p.c[2] != 0) imgsB.push_back(fr.bb_map(p));
        Subspace plane = span(Fq, std::span<const Pt>(imgsB.data(), imgsB.size()));
        std::vector<Pt> conic_pts;
        for (const Pt& p : C.points)
            if (p.c[2] != 0) conic_pts.push_back(fr.bb_map(p));
        std::set<Pt> bset(B.points.begin(), B.points.end());
        if (linf.size() == 1) {
            // case 1: P = Q in B; [C] meets Sigma_inf in [P] cap [B]
            Pt Pb = fr.linf_point(linf[0].first);
            bool inB = bset.count(Pb) > 0;
            Subspace mt = meet(Fq, fr.spread_line(linf[0].first), plane);
            bool ok = inB && mt.proj_dim() == 0;
            if (ok) {
                conic_pts.push_back(
                    make_point(Fq, std::span<const u32>(mt.row(0).data(), 5)));
                RatCurve cc;
                try {
                    cc = rational_conic_param(Fq, conic_pts);
                } catch (const std::invalid_argument&) {
                    ok = false;
                }
            }
            if (!ok) {
                fail_with(rec, "tangent-at-B case failed", json{{"P", pt_str(Pb)}});
                return rec;
            }
            ++case1;
        } else {
            Pt Pb = fr.linf_point(linf[0].first);
            Pt Qb = fr.linf_point(linf[1].first);
            bool pinB = bset.count(Pb) > 0, qinB = bset.count(Qb) > 0;
            if (pinB != qinB) {
                fail_with(rec, "exactly one of P,Q in the subplane",
                          json{{"P", pt_str(Pb)}, {"Q", pt_str(Qb)}});
                return rec;
            }
            if (pinB) {
                // case 2: [C] meets Sigma_inf in two points on [P], [Q]
                Subspace mp = meet(Fq, fr.spread_line(linf[0].first), plane);
                Subspace mq = meet(Fq, fr.spread_line(linf[1].first), plane);
                bool ok = mp.proj_dim() == 0 && mq.proj_dim() == 0;
                if (ok) {
                    conic_pts.push_back(
                        make_point(Fq, std::span<const u32>(mp.row(0).data(), 5)));
                    conic_pts.push_back(
                        make_point(Fq, std::span<const u32>(mq.row(0).data(), 5)));
                    try {
                        rational_conic_param(Fq, conic_pts);
                    } catch (const std::invalid_argument&) {
                        ok = false;
                    }
                }
                if (!ok) {
                    fail_with(rec, "secant-in-B case failed", json{});
                    return rec;
                }
                ++case2;
            } else {
                // case 3: [C] is a (PQ^q)-special conic
                RatCurve cc;
                try {
                    cc = rational_conic_param(Fq, conic_pts);
                } catch (const std::invalid_argument&) {
                    fail_with(rec, "affine conic image is not a conic", json{});
                    return rec;
                }
                Pt P = fr.g_point(linf[0].first), Q = fr.g_point(linf[1].first);
                if (!special_conic_wrt(fr, P, Q, cc)) {
                    fail_with(rec, "[C] is not (PQ^q)-special",
                              json{{"P", pt_str(Pb)}, {"Q", pt_str(Qb)}});
                    return rec;
                }
                ++case3;
            }
        }
    }
    rec.counts["case_P_eq_Q"] = case1;
    rec.counts["case_PQ_in_B"] = case2;
    rec.counts["case_PQ_out"] = case3;
    return rec;
}

CheckRecord sect_conic_conv(const Frame& fr, const Mode& mode) {
    if (fr.q() < 3) return skipped("lem:sect-conic-conv", fr, "needs q>=3");
    CheckRecord rec = make_record("lem:sect-conic-conv", fr);
    const Gf& Fq = fr.Fq();
    const Gf& K = fr.Fq2();
    u32 q = fr.q();
    DetRng rng(mode.seed, stream_of("lem:sect-conic-conv", q));
    u64 n = std::max<u64>(mode.samples / 4, 20);
    u64 done = 0;
    while (done < n) {
        // a random affine plane without a spread line, and a conic inside it
        Pt A = random_affine_pg4(fr, rng);
        Pt B2 = random_affine_pg4(fr, rng);
        Pt C2 = random_affine_pg4(fr, rng);
        std::array<Pt, 3> three{A, B2, C2};
        Subspace alpha = span(Fq, std::span<const Pt>(three.data(), 3));
        if (alpha.proj_dim() != 2) continue;
        bool has_spread = false;
        for (const Subspace& s : fr.spread())
            if (alpha.contains(Fq, s)) has_spread = true;
        if (has_spread) continue;
        std::vector<int> piv;
        for (int r = 0; r < 3; ++r)
            for (int j = 0; j <= 4; ++j)
                if (alpha.row(r)[j]) {
                    piv.push_back(j);
                    break;
                }
        QuadForm f3;
        f3.nvars = 3;
        f3.c.fill(0);
        bool nz = false;
        for (int k = 0; k < 6; ++k) {
            f3.c[k] = rng.below(q);
            nz |= f3.c[k] != 0;
        }
        if (!nz || !conic_form_nondegenerate(Fq, f3)) continue;
        std::vector<Pt> cpts;
        bool affine_only = true;
        for (const Pt& x : PointRange(Fq, 2)) {
            std::array<u32, 3> xv{x.c[0], x.c[1], x.c[2]};
            if (f3.eval(Fq, std::span<const u32>(xv.data(), 3)) != 0) continue;
            std::array<u32, 5> v{};
            for (int r = 0; r < 3; ++r)
                for (int j = 0; j <= 4; ++j)
                    v[j] = Fq.add(v[j], Fq.mul(xv[r], alpha.row(r)[j]));
            Pt p = make_point(Fq, std::span<const u32>(v.data(), 5));
            affine_only &= p.c[4] != 0;
            cpts.push_back(p);
        }
        if (cpts.size() != q + 1 || !affine_only) continue;  // case 3 shape
        RatCurve cc;
        try {
            cc = rational_conic_param(Fq, cpts);
        } catch (const std::invalid_argument&) {
            continue;
        }
        // the two points of the extended conic on the plane's infinite line
        Subspace m = meet(Fq, alpha, fr.sigma_inf());
        auto meets = curve_meet_subspace(K, cc, m);
        if (meets.size() != 2) continue;  // want the generic two-point case
        std::vector<Pt> X;
        for (auto [theta, mult] : meets) X.push_back(cc.at(K, theta));
        if (point_in_subfield(X[0], q)) continue;
        // the congruence lines through the two points name P and Q
        Subspace lx = congruence_line_through(fr, X[0], Level::quad);
        Subspace mx = meet(K, lx, fr.g());
        if (mx.proj_dim() != 0) continue;
        Pt P = make_point(K, std::span<const u32>(mx.row(0).data(), 5));
        u32 dP = fr.g_alpha_of(P, Level::quad);
        Subspace lq = meet(K, lx, fr.gq());
        Pt Qq = make_point(K, std::span<const u32>(lq.row(0).data(), 5));
        u32 dQ = fr.g_alpha_of(frobenius_point(K, Qq), Level::quad);
        // pull back: an F_q-conic of a secant subplane whose C-plus meets
        // l_inf exactly at P and Q
        std::vector<Pt> pulled;
        for (const Pt& p : cpts) pulled.push_back(fr.bb_unmap(p));
        std::sort(pulled.begin(), pulled.end());
        std::array<Pt, 4> quad{pulled[0], pulled[1], pulled[2], pulled[3]};
        BaerSubplane Bsub;
        try {
            Bsub = baer_subplane_through(fr, std::span<const Pt>(quad.data(), 4));
        } catch (const std::invalid_argument&) {
            continue;
        }
        bool ok = !Bsub.tangent;
        std::set<Pt> bset(Bsub.points.begin(), Bsub.points.end());
        for (const Pt& p : pulled) ok &= bset.count(p) > 0;
        if (!ok) continue;
        // fit the subplane conic in chart coordinates (zero-set match) and
        // transport it to PG(2,q^2) to obtain C-plus
        std::vector<std::array<u32, 3>> coords;
        for (const Pt& p : pulled) coords.push_back(chart_coords(fr, Bsub, p));
        std::vector<std::vector<u32>> rows;
        for (auto& xyz : coords) {
            std::vector<u32> r(6, 0);
            int idx = 0;
            for (int a2 = 0; a2 < 3; ++a2)
                for (int b2 = a2; b2 < 3; ++b2, ++idx)
                    r[idx] = Fq.mul(xyz[a2], xyz[b2]);
            rows.push_back(std::move(r));
        }
        auto ns = null_space(Fq, rows);
        std::set<std::array<u32, 3>> wantz(coords.begin(), coords.end());
        std::optional<QuadForm> fitted;
        for (const Pt& cmb : PointRange(Fq, static_cast<int>(ns.size()) - 1)) {
            QuadForm f;
            f.nvars = 3;
            f.c.fill(0);
            for (size_t bi = 0; bi < ns.size(); ++bi)
                for (int k2 = 0; k2 < 6; ++k2)
                    f.c[k2] = Fq.add(f.c[k2], Fq.mul(cmb.c[bi], ns[bi][k2]));
            if (f.is_zero() || !conic_form_nondegenerate(Fq, f)) continue;
            std::set<std::array<u32, 3>> zs;
            for (const Pt& x : PointRange(Fq, 2)) {
                std::array<u32, 3> xv{x.c[0], x.c[1], x.c[2]};
                if (f.eval(Fq, std::span<const u32>(xv.data(), 3)) == 0)
                    zs.insert(xv);
            }
            if (zs == wantz) {
                fitted = f;
                break;
            }
        }
        ok = fitted.has_value();
        if (ok) {
            Conic cplus = make_conic(K, chart_form_to_plane(fr, Bsub, *fitted));
            std::set<Pt> cps(cplus.pts.begin(), cplus.pts.end());
            for (const Pt& p : pulled) ok &= cps.count(p) > 0;
            auto linf = conic_linf_params(fr, cplus, Level::quad);
            ok = ok && linf.size() == 2;
            if (ok) {
                std::set<u32> got{linf[0].first, linf[1].first};
                ok = got == std::set<u32>{dP, dQ};
            }
        }
        if (!ok) {
            fail_with(rec, "special conic does not recover the secant subconic",
                      json{{"deltaP", param_str(dP)}, {"deltaQ", param_str(dQ)}});
            return rec;
        }
        ++done;
    }
    rec.counts["synthesized"] = done;
    return rec;
}

namespace {

CheckRecord tgt_forward_impl(const std::string& id, const Frame& fr,
                             const Mode& mode, bool check_witness) {
    if (fr.q() <= 5) return skipped(id, fr, "requires q>5");
    CheckRecord rec = make_record(id, fr);
    u32 q = fr.q();
    DetRng rng(mode.seed, stream_of(id, q));
    u64 n = std::max<u64>(mode.samples, 50);
    for (u64 i = 0; i < n; ++i) {
        BaerSubplane B = random_subplane(fr, true, rng);
        SubplaneConic C = random_conic_in_subplane(fr, B, 1, rng);
        auto N = tc_image(fr, C, B.tangent_point);
        if (!N) {
            fail_with(rec, "conic image is not a twisted cubic", json{});
            return rec;
        }
        Specialness sp = specialness(fr, *N);
        if (sp.kind != SpecialKind::g_special_twisted_cubic) {
            fail_with(rec, "[C] is not a g-special twisted cubic",
                      json{{"tangent_point", pt_str(B.tangent_point)}});
            return rec;
        }
        if (check_witness) {
            // the witness is the second point of C-plus on l_inf
            auto linf = conic_linf_params(fr, C.cplus, Level::quad);
            u32 dT = fr.linf_delta_of(B.tangent_point);
            std::optional<u32> dP;
            for (auto [d, m] : linf)
                if (d != dT) dP = d;
            if (!dP || sp.g_params.size() != 1 || sp.g_params[0].first != *dP) {
                fail_with(rec, "witness mismatch",
                          json{{"want", dP ? param_str(*dP) : "none"},
                               {"got", sp.g_params.empty()
                                           ? "none"
                                           : param_str(sp.g_params[0].first)}});
                return rec;
            }
        }
    }
    rec.counts["conics"] = n;
    return rec;
}

}  // namespace

CheckRecord tgt_conic_T_1(const Frame& fr, const Mode& mode) {
    return tgt_forward_impl("thm-tgt-conic-T-1", fr, mode, false);
}

CheckRecord tgt_conic_T_2(const Frame& fr, const Mode& mode) {
    return tgt_forward_impl("thm-tgt-conic-T-2", fr, mode, true);
}

CheckRecord conv_tgt(const Frame& fr, const Mode& mode) {
    if (fr.q() <= 5) return skipped("conv-tgt", fr, "requires q>5");
    CheckRecord rec = make_record("conv-tgt", fr);
    const Gf& Fq = fr.Fq();
    const Gf& K = fr.Fq2();
    u32 q = fr.q();
    DetRng rng(mode.seed, stream_of("conv-tgt", q));
    u64 n = std::max<u64>(mode.samples / 4, 50);
    u64 done = 0;
    while (done < n) {
        // synthesize a g-special twisted cubic from a point of g and a
        // rational z-polynomial, then discover the subplane
        u32 a = rng.below(q);
        u32 theta0 = q + rng.below(q * q - q);  // outside F_q
        u32 tr = K.add(theta0, K.frob(theta0));
        u32 nm = K.mul(theta0, K.frob(theta0));
        auto zrow = poly_mul(Fq, std::vector<u32>{Fq.neg(a), 1},
                             std::vector<u32>{nm, Fq.neg(tr), 1});
        auto N = synthesize_special_curve(fr, 3, zrow, {theta0}, Level::quad, rng);
        if (!N) continue;
        Specialness sp = specialness(fr, *N);
        if (sp.kind != SpecialKind::g_special_twisted_cubic) continue;
        // recovery: X = N cap Sigma_inf is rational, on some spread line [T]
        Pt X = N->at(Fq, a);
        if (X.c[4] != 0) continue;
        u32 dT = fr.spread_delta_of(X);
        Pt Tbar = fr.linf_point(dT);
        // three affine points
        std::vector<Pt> affine;
        for (u32 th = 0; th < q && affine.size() < 3; ++th) {
            if (th == a) continue;
            affine.push_back(N->at(Fq, th));
        }
        if (affine.size() < 3) continue;
        std::vector<Pt> quad{Tbar, fr.bb_unmap(affine[0]), fr.bb_unmap(affine[1]),
                             fr.bb_unmap(affine[2])};
        BaerSubplane B;
        try {
            B = baer_subplane_through(fr, std::span<const Pt>(quad.data(), 4));
        } catch (const std::invalid_argument&) {
            continue;
        }
        bool ok = B.tangent && B.tangent_point == Tbar;
        // all curve points pull back into B, and together with Tbar they are
        // a conic of B
        std::set<Pt> bset(B.points.begin(), B.points.end());
        std::vector<std::array<u32, 3>> coords;
        coords.push_back(chart_coords(fr, B, Tbar));
        for (const Pt& p : N->points(Fq)) {
            if (p.c[4] == 0) continue;
            Pt back = fr.bb_unmap(p);
            ok &= bset.count(back) > 0;
            if (!ok) break;
            coords.push_back(chart_coords(fr, B, back));
        }
        if (ok) {
            auto form = conic_form_through(
                Fq, std::span<const std::array<u32, 3>>(coords.data(),
                                                        coords.size()));
            ok = form.has_value() && conic_form_nondegenerate(Fq, *form);
        }
        if (!ok) {
            fail_with(rec, "g-special twisted cubic is not a subconic image",
                      json{{"theta0", param_str(theta0)}});
            return rec;
        }
        ++done;
    }
    rec.counts["synthesized"] = done;
    return rec;
}

namespace {

// l_inf parameters of C-plus at the right level, distinguishing the three
// C-plus types; returns (case, params): case 1 tangent, 2 secant, 3 exterior
std::pair<int, std::vector<u32>> cplus_type(const Frame& fr, const Conic& cplus) {
    auto quad_params = conic_linf_params(fr, cplus, Level::quad);
    if (quad_params.size() == 1 && quad_params[0].second == 2)
        return {1, {quad_params[0].first}};
    if (quad_params.size() == 2)
        return {2, {quad_params[0].first, quad_params[1].first}};
    auto quart = conic_linf_params(fr, cplus, Level::quartic);
    std::vector<u32> ps;
    for (auto [d, m] : quart) ps.push_back(d);
    return {3, ps};
}

}  // namespace

CheckRecord smiley_conic(const Frame& fr, const Mode& mode) {
    if (fr.q() <= 7) return skipped("smiley-conic", fr, "requires q>7");
    CheckRecord rec = make_record("smiley-conic", fr);
    u32 q = fr.q();
    DetRng rng(mode.seed, stream_of("smiley-conic", q));
    u64 n = std::max<u64>(mode.samples, 50);
    u64 cases[4] = {0, 0, 0, 0};
    for (u64 i = 0; i < n; ++i) {
        BaerSubplane B = random_subplane(fr, true, rng);
        SubplaneConic C = random_conic_in_subplane(fr, B, -1, rng);
        auto N = nrc4_image(fr, C);
        if (!N) {
            fail_with(rec, "conic image is not an NRC4", json{});
            return rec;
        }
        Specialness sp = specialness(fr, *N);
        auto [tp, params] = cplus_type(fr, C.cplus);
        bool ok = (tp == 3 && sp.kind == SpecialKind::gstar_special_nrc4) ||
                  (tp != 3 && sp.kind == SpecialKind::g_special_nrc4);
        if (!ok) {
            fail_with(rec, "[C] is not g-special or g-star-special",
                      json{{"cplus_case", tp}});
            return rec;
        }
        ++cases[tp];
    }
    rec.counts["secant"] = cases[2];
    rec.counts["tangent"] = cases[1];
    rec.counts["exterior"] = cases[3];
    return rec;
}

CheckRecord baby_not_T_part2(const Frame& fr, const Mode& mode) {
    if (fr.q() <= 7) return skipped("baby-not-T-part2", fr, "requires q>7");
    CheckRecord rec = make_record("baby-not-T-part2", fr);
    u32 q = fr.q();
    DetRng rng(mode.seed, stream_of("baby-not-T-part2", q));
    u64 n = std::max<u64>(mode.samples, 50);
    u64 cases[4] = {0, 0, 0, 0};
    for (u64 i = 0; i < n; ++i) {
        BaerSubplane B = random_subplane(fr, true, rng);
        SubplaneConic C = random_conic_in_subplane(fr, B, -1, rng);
        auto N = nrc4_image(fr, C);
        if (!N) {
            fail_with(rec, "conic image is not an NRC4", json{});
            return rec;
        }
        Specialness sp = specialness(fr, *N);
        auto [tp, params] = cplus_type(fr, C.cplus);
        std::set<u32> want(params.begin(), params.end());
        std::set<u32> got;
        for (auto [alpha, mult] : sp.g_params) got.insert(alpha);
        bool ok = false;
        if (tp == 1)
            ok = sp.kind == SpecialKind::g_special_nrc4 && got == want &&
                 sp.g_params.size() == 1 && sp.g_params[0].second == 2;
        else if (tp == 2)
            ok = sp.kind == SpecialKind::g_special_nrc4 && got == want &&
                 got.size() == 2;
        else
            ok = sp.kind == SpecialKind::gstar_special_nrc4 && got == want &&
                 got.size() == 2;
        if (!ok) {
            json w;
            w["cplus_case"] = tp;
            w["want"] = json::array();
            for (u32 d : want) w["want"].push_back(param_str(d));
            w["got"] = json::array();
            for (u32 d : got) w["got"].push_back(param_str(d));
            fail_with(rec, "witness points mismatch", w);
            return rec;
        }
        ++cases[tp];
    }
    rec.counts["tangent"] = cases[1];
    rec.counts["secant"] = cases[2];
    rec.counts["exterior"] = cases[3];
    return rec;
}

CheckRecord nrc4_is_baby(const Frame& fr, const Mode& mode) {
    if (fr.q() <= 7) return skipped("4nrc-is-baby-1", fr, "requires q>7");
    CheckRecord rec = make_record("4nrc-is-baby-1", fr);
    const Gf& Fq = fr.Fq();
    const Gf& K = fr.Fq2();
    const Gf& L = fr.Fq4();
    u32 q = fr.q(), q2 = q * q;
    DetRng rng(mode.seed, stream_of("4nrc-is-baby-1", q));
    u64 n = std::max<u64>(mode.samples / 4, 50);
    u64 done[4] = {0, 0, 0, 0};
    auto minpoly_quad = [&](u32 theta) {
        u32 tr = K.add(theta, K.frob(theta));
        u32 nm = K.mul(theta, K.frob(theta));
        return std::vector<u32>{nm, Fq.neg(tr), 1};
    };
    u64 total = 0;
    while (total < n) {
        int kind = static_cast<int>(total % 3) + 1;  // 1 tangent 2 secant 3 ext
        std::vector<u32> zrow, gparams;
        Level glevel = Level::quad;
        if (kind == 2) {
            u32 th1 = q + rng.below(q2 - q);
            u32 th2 = q + rng.below(q2 - q);
            if (th1 == th2 || K.frob(th1) == th2) continue;
            zrow = poly_mul(Fq, minpoly_quad(th1), minpoly_quad(th2));
            gparams = {th1, th2};
        } else if (kind == 1) {
            u32 th1 = q + rng.below(q2 - q);
            auto m = minpoly_quad(th1);
            zrow = poly_mul(Fq, m, m);
            gparams = {th1};
        } else {
            u32 th = q2 + rng.below(L.order() - q2);  // outside F_{q^2}
            // minimal polynomial over F_q: degree 4
            std::vector<u32> m{1};
            u32 cur = th;
            for (int k = 0; k < 4; ++k) {
                m = poly_mul(L, m, std::vector<u32>{L.neg(cur), 1});
                cur = L.frob(cur);
            }
            bool rational = true;
            for (u32 cv : m) rational &= cv < q;
            if (!rational || poly_deg(m) != 4) continue;
            zrow = m;
            gparams = {th};
            glevel = Level::quartic;
        }
        auto N = synthesize_special_curve(fr, 4, zrow, gparams, glevel, rng);
        if (!N) continue;
        Specialness sp = specialness(fr, *N);
        if (kind == 3 && sp.kind != SpecialKind::gstar_special_nrc4) continue;
        if (kind != 3 && sp.kind != SpecialKind::g_special_nrc4) continue;
        if (kind == 1 && (sp.g_params.size() != 1 || sp.g_params[0].second != 2))
            continue;
        if (kind == 2 && sp.g_params.size() != 2) continue;
        // recovery: three affine points and the witness l_inf points pin an
        // F_{q^2}-conic; its F_q-subconic through A,B,C must be the curve
        std::vector<Pt> affine;
        for (u32 th = 0; th < q && affine.size() < 3; ++th)
            affine.push_back(N->at(Fq, th));
        std::vector<Pt> pulled;
        for (const Pt& p : affine) pulled.push_back(fr.bb_unmap(p));
        Conic cplus;
        bool built = false;
        if (kind == 2) {
            std::vector<Pt> five{fr.linf_point(sp.g_params[0].first),
                                 fr.linf_point(sp.g_params[1].first), pulled[0],
                                 pulled[1], pulled[2]};
            try {
                cplus = conic_through(K, std::span<const Pt>(five.data(), 5));
                built = true;
            } catch (const std::invalid_argument&) {
            }
        } else if (kind == 1) {
            // conic through Pbar, A, B, C tangent to l_inf at Pbar
            Pt Pbar = fr.linf_point(sp.g_params[0].first);
            std::vector<std::vector<u32>> rows;
            auto monrow = [&](const Pt& p) {
                std::vector<u32> r(6, 0);
                int idx = 0;
                for (int a2 = 0; a2 < 3; ++a2)
                    for (int b2 = a2; b2 < 3; ++b2, ++idx)
                        r[idx] = K.mul(p.c[a2], p.c[b2]);
                return r;
            };
            rows.push_back(monrow(Pbar));
            for (const Pt& p : pulled) rows.push_back(monrow(p));
            // tangency at Pbar: the polar of Pbar is (0,0,*): two conditions
            for (int comp = 0; comp < 2; ++comp) {
                std::vector<u32> r(6, 0);
                int idx = 0;
                for (int a2 = 0; a2 < 3; ++a2)
                    for (int b2 = a2; b2 < 3; ++b2, ++idx) {
                        u32 v = 0;
                        if (a2 == comp) v = K.add(v, Pbar.c[b2]);
                        if (b2 == comp) v = K.add(v, Pbar.c[a2]);
                        r[idx] = v;
                    }
                rows.push_back(std::move(r));
            }
            auto ns = null_space(K, rows);
            if (ns.size() == 1) {
                QuadForm f;
                f.nvars = 3;
                f.c.fill(0);
                for (int k2 = 0; k2 < 6; ++k2) f.c[k2] = ns[0][k2];
                try {
                    cplus = make_conic(K, f);
                    built = true;
                } catch (const std::exception&) {
                }
            }
        } else {
            // quartic-level fit through Pbar, Qbar and the affine points
            std::vector<std::array<u32, 3>> five;
            Pt Pb = make_point(L, {sp.g_params[0].first, 1, 0});
            Pt Qb = make_point(L, {sp.g_params[1].first, 1, 0});
            five.push_back({Pb.c[0], Pb.c[1], Pb.c[2]});
            five.push_back({Qb.c[0], Qb.c[1], Qb.c[2]});
            for (const Pt& p : pulled) five.push_back({p.c[0], p.c[1], p.c[2]});
            auto form = conic_form_through(
                L, std::span<const std::array<u32, 3>>(five.data(), five.size()));
            if (form) {
                bool rational = true;
                for (int k2 = 0; k2 < 6; ++k2)
                    rational &= fr.tower().lies_in((*form).c[k2], Level::quad);
                if (rational) {
                    try {
                        cplus = make_conic(K, *form);
                        built = true;
                    } catch (const std::exception&) {
                    }
                }
            }
        }
        if (!built) continue;
        FqConic C;
        try {
            C = fq_conic_through(fr, cplus, pulled[0], pulled[1], pulled[2]);
        } catch (const std::exception&) {
            continue;
        }
        bool ok = C.host.tangent;
        std::set<Pt> curve_affine;
        for (const Pt& p : N->points(Fq))
            if (p.c[4] != 0) curve_affine.insert(p);
        std::set<Pt> img;
        for (const Pt& p : C.points)
            if (p.c[2] != 0) img.insert(fr.bb_map(p));
        ok = ok && curve_affine == img && C.points.size() == q + 1;
        if (!ok) {
            fail_with(rec, "special NRC4 does not recover a tangent subconic",
                      json{{"case", kind}});
            return rec;
        }
        ++done[kind];
        ++total;
    }
    rec.counts["tangent"] = done[1];
    rec.counts["secant"] = done[2];
    rec.counts["exterior"] = done[3];
    return rec;
}

CheckRecord cath_conic(const Frame& fr, const Mode& mode) {
    if (fr.q() < 3) return skipped("cath-conic", fr, "needs q>=3");
    CheckRecord rec = make_record("cath-conic", fr);
    const Gf& Fq = fr.Fq();
    u32 q = fr.q();
    DetRng rng(mode.seed, stream_of("cath-conic", q));
    u64 n = std::max<u64>(mode.samples / 10, 10);
    bool fit_tc = q >= 6;   // a twisted cubic needs 6 points to pin down
    bool fit_nrc4 = q >= 7; // an NRC4 needs 7
    u64 case1 = 0, case2 = 0, case3 = 0;
    for (u64 i = 0; i < n; ++i) {
        // case 1: secant subplane
        {
            BaerSubplane B = random_subplane(fr, false, rng);
            SubplaneConic C = random_conic_in_subplane(fr, B, 0, rng);
            std::vector<Pt> imgsB;
            for (const Pt& p : B.points)
                if (p.c[2] != 0) imgsB.push_back(fr.bb_map(p));
            Subspace plane =
                span(Fq, std::span<const Pt>(imgsB.data(), imgsB.size()));
            bool ok = plane.proj_dim() == 2;
            for (const Pt& p : C.points)
                if (p.c[2] != 0) ok &= plane.contains(Fq, fr.bb_map(p));
            if (!ok) {
                fail_with(rec, "secant case: image escapes the plane", json{});
                return rec;
            }
            ++case1;
        }
        // cases 2 and 3: tangent subplane
        BaerSubplane B = random_subplane(fr, true, rng);
        RuledCubic V = ruled_cubic_from_tangent_subplane(fr, B);
        std::set<Pt> vpts(V.points.begin(), V.points.end());
        {
            SubplaneConic C = random_conic_in_subplane(fr, B, 1, rng);
            bool ok = true;
            size_t onV = 0;
            for (const Pt& p : C.points)
                if (p.c[2] != 0) {
                    ok &= vpts.count(fr.bb_map(p)) > 0;
                    ++onV;
                }
            ok = ok && onV == q;
            if (ok && fit_tc) {
                auto N = tc_image(fr, C, B.tangent_point);
                ok = N.has_value();
                if (ok) {
                    // the twisted cubic meets Sigma_inf on [T]
                    auto meets =
                        curve_meet_subspace(Fq, *N, fr.sigma_inf());
                    ok = meets.size() == 1;
                    if (ok) {
                        Pt X = N->at(Fq, meets[0].first);
                        ok = fr
                                 .spread_line(
                                     fr.linf_delta_of(B.tangent_point))
                                 .contains(Fq, X);
                    }
                }
            }
            if (!ok) {
                fail_with(rec, "tangent case through T failed", json{});
                return rec;
            }
            ++case2;
        }
        {
            SubplaneConic C = random_conic_in_subplane(fr, B, -1, rng);
            bool ok = true;
            for (const Pt& p : C.points) ok &= vpts.count(fr.bb_map(p)) > 0;
            if (ok && fit_nrc4) {
                auto N = nrc4_image(fr, C);
                ok = N.has_value();
                if (ok) ok = N->ambient_span(Fq).proj_dim() == 4;
            }
            if (!ok) {
                fail_with(rec, "tangent case avoiding T failed", json{});
                return rec;
            }
            ++case3;
        }
    }
    rec.counts["secant_conics"] = case1;
    rec.counts["through_T"] = case2;
    rec.counts["avoiding_T"] = case3;
    if (!fit_tc || !fit_nrc4)
        rec.counts["note"] =
            "curve fits need 6 or 7 points; below that the point placement "
            "on the ruled cubic is verified and the fit is observational";
    return rec;
}

}  // namespace bbv::checks
