#include "bbv/bruckbose.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace bbv {

Frame::Frame(const FieldTower& tower) : tw_(&tower), q2_(tower.q() * tower.q()) {
    const Gf& Fq = tw_->base();
    const Gf& Fq2 = tw_->quad();

    std::array<u32, 5> zform{0, 0, 0, 0, 1};
    sigma_inf_ = Subspace::hyperplane(Fq, 4, std::span<const u32>(zform.data(), 5));
    std::array<u32, 3> zform3{0, 0, 1};
    ell_inf_ = Subspace::hyperplane(Fq2, 2, std::span<const u32>(zform3.data(), 3));

    u32 tq = tw_->tau_q();
    A0_ = make_point(Fq2, {tq, Fq2.neg(1), 0, 0, 0});
    A1_ = make_point(Fq2, {0, 0, tq, Fq2.neg(1), 0});
    std::array<Pt, 2> gpts{A0_, A1_};
    g_ = span(Fq2, std::span<const Pt>(gpts.data(), 2));
    std::array<Pt, 2> gqpts{frobenius_point(Fq2, A0_), frobenius_point(Fq2, A1_)};
    gq_ = span(Fq2, std::span<const Pt>(gqpts.data(), 2));

    spread_.reserve(q2_ + 1);
    for (u32 delta = 0; delta < q2_; ++delta) {
        auto [d0, d1] = tw_->split_tau(delta);
        std::array<std::array<u32, 5>, 2> rows{};
        rows[0] = {d0, d1, 1, 0, 0};
        rows[1] = {Fq.mul(tw_->t0(), d1), Fq.add(d0, Fq.mul(tw_->t1(), d1)),
                   0, 1, 0};
        spread_.push_back(Subspace::from_rows(
            Fq, 4, std::span<const std::array<u32, 5>>(rows.data(), 2)));
    }
    std::array<std::array<u32, 5>, 2> rows{};
    rows[0] = {1, 0, 0, 0, 0};
    rows[1] = {0, 1, 0, 0, 0};
    spread_.push_back(Subspace::from_rows(
        Fq, 4, std::span<const std::array<u32, 5>>(rows.data(), 2)));
}

u32 Frame::spread_delta_of(const Pt& p) const {
    const Gf& Fq = tw_->base();
    if (p.c[4] != 0) throw std::invalid_argument("point not in Sigma_inf");
    u32 y0 = p.c[2], y1 = p.c[3];
    if (y0 == 0 && y1 == 0) return INF;
    // (x0, x1) = d0 (y0, y1) + d1 (t0 y1, y0 + t1 y1)
    u32 a = y0, b = Fq.mul(tw_->t0(), y1);
    u32 c = y1, d = Fq.add(y0, Fq.mul(tw_->t1(), y1));
    u32 det = det2(Fq, a, b, c, d);
    u32 idet = Fq.inv(det);
    u32 d0 = Fq.mul(idet, det2(Fq, p.c[0], b, p.c[1], d));
    u32 d1 = Fq.mul(idet, det2(Fq, a, p.c[0], c, p.c[1]));
    return tw_->join_tau(d0, d1);
}

Pt Frame::bb_map(const Pt& A) const {
    const Gf& Fq2 = tw_->quad();
    if (A.n != 2) throw std::invalid_argument("bb_map expects a PG(2,q^2) point");
    if (A.c[2] == 0)
        throw std::invalid_argument("bb_map: point on l_inf (use spread_line)");
    u32 s = Fq2.inv(A.c[2]);
    auto [x0, x1] = tw_->split_tau(Fq2.mul(A.c[0], s));
    auto [y0, y1] = tw_->split_tau(Fq2.mul(A.c[1], s));
    return make_point(tw_->base(), {x0, x1, y0, y1, 1});
}

Pt Frame::bb_unmap(const Pt& P) const {
    const Gf& Fq = tw_->base();
    if (P.n != 4) throw std::invalid_argument("bb_unmap expects a PG(4,q) point");
    if (P.c[4] == 0) throw std::invalid_argument("bb_unmap: point in Sigma_inf");
    u32 s = Fq.inv(P.c[4]);
    u32 x = tw_->join_tau(Fq.mul(P.c[0], s), Fq.mul(P.c[1], s));
    u32 y = tw_->join_tau(Fq.mul(P.c[2], s), Fq.mul(P.c[3], s));
    return make_point(tw_->quad(), {x, y, 1});
}

Pt Frame::linf_point(u32 delta) const {
    const Gf& Fq2 = tw_->quad();
    if (delta == INF) return make_point(Fq2, {1, 0, 0});
    return make_point(Fq2, {delta, 1, 0});
}

u32 Frame::linf_delta_of(const Pt& p) const {
    if (p.c[2] != 0 || (p.c[0] == 0 && p.c[1] == 0))
        throw std::invalid_argument("not a point of l_inf");
    const Gf* F = p.c[0] < tw_->quad().order() && p.c[1] < tw_->quad().order()
                      ? &tw_->quad()
                      : &tw_->quartic();
    if (p.c[1] == 0) return INF;
    return F->div(p.c[0], p.c[1]);
}

Pt Frame::g_point(u32 alpha, Level lv) const {
    const Gf& F = tw_->level(lv);
    u32 tq = tw_->tau_q();
    if (alpha == INF)
        return make_point(F, {tq, F.neg(1), 0, 0, 0});
    // alpha A0 + A1 = (alpha tau^q, -alpha, tau^q, -1, 0)
    return make_point(F, {F.mul(alpha, tq), F.neg(alpha), tq, F.neg(1), 0});
}

u32 Frame::g_alpha_of(const Pt& p, Level lv) const {
    const Gf& F = tw_->level(lv);
    u32 tq = tw_->tau_q();
    // on g: c0 = -tau^q c1 and c2 = -tau^q c3, with (c1,c3) != (0,0)
    if (p.c[4] != 0 || F.add(p.c[0], F.mul(tq, p.c[1])) != 0 ||
        F.add(p.c[2], F.mul(tq, p.c[3])) != 0)
        throw std::invalid_argument("point not on g / g-star");
    if (p.c[3] == 0) return INF;
    return F.div(p.c[1], p.c[3]);
}

Subspace Frame::spread_line_from_transversal(u32 delta) const {
    const Gf& Fq2 = tw_->quad();
    Pt T = g_point(delta, Level::quad);
    Pt Tq = frobenius_point(Fq2, T);
    std::array<Pt, 2> pts{T, Tq};
    Subspace ext = span(Fq2, std::span<const Pt>(pts.data(), 2));
    std::vector<Pt> rational;
    for (const Pt& p : ext.points(Fq2))
        if (point_in_subfield(p, tw_->q())) rational.push_back(p);
    if (rational.size() != tw_->q() + 1)
        throw std::logic_error("transversal line has wrong rational part");
    return span(tw_->base(), std::span<const Pt>(rational.data(), rational.size()));
}

Frame::IncidenceReport Frame::incidence_plane_check() const {
    return incidence_plane_check(spread_);
}

Frame::IncidenceReport Frame::incidence_plane_check(
    const std::vector<Subspace>& lines) const {
    const Gf& Fq = tw_->base();
    u32 q = tw_->q();
    IncidenceReport rep;

    std::vector<Pt> affine;
    for (u32 x0 = 0; x0 < q; ++x0)
        for (u32 x1 = 0; x1 < q; ++x1)
            for (u32 y0 = 0; y0 < q; ++y0)
                for (u32 y1 = 0; y1 < q; ++y1)
                    affine.push_back(make_point(Fq, {x0, x1, y0, y1, 1}));
    rep.points = affine.size();

    std::set<Subspace> as_lines;
    for (const Subspace& s : lines)
        for (const Pt& A : affine) as_lines.insert(span_of(Fq, s, A));
    rep.lines = as_lines.size();

    for (size_t i = 0; i < affine.size(); ++i) {
        for (size_t j = i + 1; j < affine.size(); ++j) {
            int through = 0;
            for (const Subspace& s : lines) {
                std::vector<std::array<u32, 5>> rows;
                rows.push_back(s.row(0));
                rows.push_back(s.row(1));
                rows.push_back(affine[i].c);
                rows.push_back(affine[j].c);
                Subspace sp = Subspace::from_rows(
                    Fq, 4, std::span<const std::array<u32, 5>>(rows.data(), 4));
                if (sp.rank() == 3) ++through;
            }
            if (through != 1) {
                rep.pass = false;
                rep.detail = "pair on " + std::to_string(through) + " lines";
                return rep;
            }
        }
    }
    u64 expect_lines = static_cast<u64>(q) * q * q * q + static_cast<u64>(q) * q;
    rep.pass = rep.lines == expect_lines;
    if (!rep.pass) rep.detail = "unexpected line count";
    return rep;
}

bool spread_is_partition(const Gf& F, const std::vector<Subspace>& lines,
                         const Subspace& ambient) {
    std::set<Pt> covered;
    u64 total = 0;
    for (const Subspace& l : lines) {
        if (l.proj_dim() != 1) return false;
        if (!ambient.contains(F, l)) return false;
        for (const Pt& p : l.points(F)) {
            covered.insert(p);
            ++total;
        }
    }
    return covered.size() == total && total == ambient.num_points(F);
}

namespace {

Subspace transversal_through(const Gf& F, const Pt& X, const Subspace& l2,
                             const Subspace& l3) {
    Subspace t = meet(F, span_of(F, l2, X), span_of(F, l3, X));
    if (t.proj_dim() != 1) throw std::logic_error("transversal is not a line");
    return t;
}

}  // namespace

std::vector<Subspace> regulus_lines(const Gf& F, const Subspace& l1,
                                    const Subspace& l2, const Subspace& l3,
                                    std::vector<Subspace>* opposite_out) {
    if (meet(F, l1, l2).rank() || meet(F, l1, l3).rank() ||
        meet(F, l2, l3).rank())
        throw std::invalid_argument("regulus needs mutually skew lines");
    std::vector<Subspace> opposite;
    for (const Pt& X : l1.points(F))
        opposite.push_back(transversal_through(F, X, l2, l3));
    std::vector<Subspace> reg;
    for (const Pt& Y : opposite[0].points(F))
        reg.push_back(transversal_through(F, Y, opposite[1], opposite[2]));
    std::sort(reg.begin(), reg.end());
    std::sort(opposite.begin(), opposite.end());
    if (opposite_out) *opposite_out = opposite;
    return reg;
}

Subspace congruence_line_through(const Frame& fr, const Pt& X, Level lv) {
    const Gf& F = fr.tower().level(lv);
    const Subspace& g = fr.g();
    Subspace gq = fr.gq();
    if (g.contains(F, X) || gq.contains(F, X))
        throw std::invalid_argument("point on a transversal");
    Subspace plane = span_of(F, g, X);
    Subspace W = meet(F, plane, gq);
    if (W.proj_dim() != 0)
        throw std::logic_error("congruence line construction failed");
    Pt w;
    w.n = 4;
    w.c = W.row(0);
    Pt wn = make_point(F, std::span<const u32>(w.c.data(), 5));
    std::array<Pt, 2> pts{X, wn};
    return span(F, std::span<const Pt>(pts.data(), 2));
}

bool spread_is_regular(const Gf& F, const std::vector<Subspace>& lines) {
    std::set<Subspace> all(lines.begin(), lines.end());
    for (size_t i = 0; i < lines.size(); ++i)
        for (size_t j = i + 1; j < lines.size(); ++j)
            for (size_t k = j + 1; k < lines.size(); ++k) {
                auto reg = regulus_lines(F, lines[i], lines[j], lines[k], nullptr);
                for (const Subspace& r : reg)
                    if (!all.count(r)) return false;
            }
    return true;
}

}  // namespace bbv
