#include "bbv/theorems.hpp"

#include <set>

#include "checks_common.hpp"

namespace bbv {

std::string status_name(Status s) {
    switch (s) {
        case Status::pass: return "pass";
        case Status::fail: return "fail";
        case Status::skip: return "skip";
    }
    return "?";
}

namespace checks {
// checks_frame.cpp
CheckRecord bb_baer_1(const Frame&, const Mode&);
CheckRecord bb_baer_2(const Frame&, const Mode&);
CheckRecord bb_baer_3(const Frame&, const Mode&);
CheckRecord bb_baer_4(const Frame&, const Mode&);
CheckRecord bb_baer_5(const Frame&, const Mode&);
CheckRecord lemma_3_baer(const Frame&, const Mode&);
CheckRecord three_space_meets_ruled(const Frame&, const Mode&);
CheckRecord tc_brs(const Frame&, const Mode&);
CheckRecord ruled_extension_agreement(const Frame&, const Mode&);
CheckRecord nrc_extn(const Frame&, const Mode&);
CheckRecord nrc_extn_tight(const Frame&, const Mode&);
// checks_conics.cpp
CheckRecord adult_conic_g(const Frame&, const Mode&);
CheckRecord pcorr_psigma(const Frame&, const Mode&);
CheckRecord ccapsi(const Frame&, const Mode&);
CheckRecord adult_conic_T(const Frame&, const Mode&);
CheckRecord adult_baby(const Frame&, const Mode&);
CheckRecord part_sec_conic(const Frame&, const Mode&);
CheckRecord res_circle(const Frame&, const Mode&);
CheckRecord sec3_regulus_special(const Frame&, const Mode&);
CheckRecord baerline_trans(const Frame&, const Mode&);
CheckRecord baerplane_trans(const Frame&, const Mode&);
// checks_subconics.cpp
CheckRecord partition_intro(const Frame&, const Mode&);
CheckRecord tgt_baby(const Frame&, const Mode&);
CheckRecord partition(const Frame&, const Mode&);
CheckRecord sect_conic(const Frame&, const Mode&);
CheckRecord sect_conic_conv(const Frame&, const Mode&);
CheckRecord tgt_conic_T_1(const Frame&, const Mode&);
CheckRecord conv_tgt(const Frame&, const Mode&);
CheckRecord tgt_conic_T_2(const Frame&, const Mode&);
CheckRecord smiley_conic(const Frame&, const Mode&);
CheckRecord nrc4_is_baby(const Frame&, const Mode&);
CheckRecord baby_not_T_part2(const Frame&, const Mode&);
CheckRecord cath_conic(const Frame&, const Mode&);
}  // namespace checks

const std::vector<std::pair<std::string, CheckFn>>& check_registry() {
    static const std::vector<std::pair<std::string, CheckFn>> reg = {
        {"BB-Baer-1", checks::bb_baer_1},
        {"BB-Baer-2", checks::bb_baer_2},
        {"BB-Baer-3", checks::bb_baer_3},
        {"BB-Baer-4", checks::bb_baer_4},
        {"BB-Baer-5", checks::bb_baer_5},
        {"cath-conic", checks::cath_conic},
        {"part-sec-conic", checks::part_sec_conic},
        {"res:circle", checks::res_circle},
        {"lemma-3-Baer", checks::lemma_3_baer},
        {"thm:partition-intro", checks::partition_intro},
        {"cor:tgt-baby", checks::tgt_baby},
        {"thm:partition", checks::partition},
        {"sec3-regulus-special", checks::sec3_regulus_special},
        {"thm:Baerline-trans", checks::baerline_trans},
        {"cor:Baerplane-trans", checks::baerplane_trans},
        {"adult-conic-g", checks::adult_conic_g},
        {"cor:PcorrPsigma", checks::pcorr_psigma},
        {"thm:Ccapsi", checks::ccapsi},
        {"adult-conic-T", checks::adult_conic_T},
        {"adult-baby", checks::adult_baby},
        {"lem:sect-conic", checks::sect_conic},
        {"lem:sect-conic-conv", checks::sect_conic_conv},
        {"thm-tgt-conic-T-1", checks::tgt_conic_T_1},
        {"conv-tgt", checks::conv_tgt},
        {"thm-tgt-conic-T-2", checks::tgt_conic_T_2},
        {"smiley-conic", checks::smiley_conic},
        {"4nrc-is-baby-1", checks::nrc4_is_baby},
        {"baby-not-T-part2", checks::baby_not_T_part2},
        {"3-space-meets-ruled", checks::three_space_meets_ruled},
        {"lem:tc-brs", checks::tc_brs},
        {"lem:nrc-extn", checks::nrc_extn},
        {"lem:nrc-extn-tight", checks::nrc_extn_tight},
        {"ruled-extension-agreement", checks::ruled_extension_agreement},
    };
    return reg;
}

bool is_registered(const std::string& id) {
    for (auto& [name, fn] : check_registry())
        if (name == id) return true;
    return false;
}

std::vector<std::string> registered_ids() {
    std::vector<std::string> out;
    for (auto& [name, fn] : check_registry()) out.push_back(name);
    return out;
}

CheckRecord run_check(const std::string& id, const Frame& fr, const Mode& mode) {
    for (auto& [name, fn] : check_registry()) {
        if (name != id) continue;
        detail::Timer t;
        CheckRecord rec;
        try {
            rec = fn(fr, mode);
        } catch (const std::exception& e) {
            rec = detail::make_record(id, fr);
            rec.status = Status::fail;
            rec.reason = std::string("exception: ") + e.what();
        }
        rec.theorem_id = id;
        rec.q = fr.q();
        rec.elapsed_ms = t.ms();
        return rec;
    }
    throw std::invalid_argument("unknown theorem id: " + id);
}

namespace detail {

u64 stream_of(const std::string& id, u32 q) {
    u64 h = 1469598103934665603ull;
    for (char c : id) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    h ^= q;
    h *= 1099511628211ull;
    return h;
}

std::string pt_str(const Pt& p) {
    std::string s = "(";
    for (int i = 0; i <= p.n; ++i) {
        if (i) s += ":";
        s += std::to_string(p.c[i]);
    }
    return s + ")";
}

std::string param_str(u32 s) {
    return s == INF ? std::string("inf") : std::to_string(s);
}

json pts_json(const std::vector<Pt>& pts) {
    json arr = json::array();
    for (const Pt& p : pts) arr.push_back(pt_str(p));
    return arr;
}

CheckRecord make_record(const std::string& id, const Frame& fr) {
    CheckRecord rec;
    rec.theorem_id = id;
    rec.q = fr.q();
    rec.status = Status::pass;
    return rec;
}

CheckRecord skipped(const std::string& id, const Frame& fr,
                    const std::string& why) {
    CheckRecord rec = make_record(id, fr);
    rec.status = Status::skip;
    rec.reason = why;
    return rec;
}

void fail_with(CheckRecord& rec, const std::string& why, json witness) {
    if (rec.status == Status::fail) return;  // keep the first counterexample
    rec.status = Status::fail;
    rec.reason = why;
    rec.witnesses["counterexample"] = std::move(witness);
}

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
        if (!conic_form_nondegenerate(K, f)) continue;
        std::vector<u32> bin{f.c[qf_index(1, 1, 3)], f.c[qf_index(0, 1, 3)],
                             f.c[qf_index(0, 0, 3)]};
        if (poly_deg(bin) < 0) continue;  // l_inf would lie on the conic
        int at_inf = static_cast<int>(poly_proj_roots(K, bin, 2).size());
        if (want >= 0 && at_inf != want) continue;
        return make_conic(K, f);
    }
}

BaerSubplane random_subplane(const Frame& fr, bool tangent, DetRng& rng) {
    const Gf& K = fr.Fq2();
    while (true) {
        std::vector<std::vector<u32>> m(3, std::vector<u32>(3));
        for (auto& row : m)
            for (u32& v : row) v = rng.below(K.order());
        std::vector<std::vector<u32>> inv;
        if (!invert_matrix(K, m, inv)) continue;
        // classification without building the point set: the preimage of
        // l_inf under the chart is the line with dual = bottom row of m
        std::array<u32, 3> h{m[2][0], m[2][1], m[2][2]};
        int onc = 0;
        for (const Pt& p : PointRange(fr.Fq(), 2)) {
            u32 acc = 0;
            for (int j = 0; j < 3; ++j) acc = K.add(acc, K.mul(h[j], p.c[j]));
            if (acc == 0) ++onc;
        }
        bool is_tangent = onc == 1;
        bool is_secant = onc == static_cast<int>(fr.q()) + 1;
        if (!(is_tangent || is_secant) || is_tangent != tangent) continue;
        return subplane_from_chart(fr, m);
    }
}

Pt random_affine_pg4(const Frame& fr, DetRng& rng) {
    const Gf& F = fr.Fq();
    return make_point(F, {rng.below(F.order()), rng.below(F.order()),
                          rng.below(F.order()), rng.below(F.order()), 1});
}

QuadForm chart_form_to_plane(const Frame& fr, const BaerSubplane& B,
                             const QuadForm& f) {
    const Gf& K = fr.Fq2();
    const auto& inv = B.chart_inv;
    QuadForm out;
    out.nvars = 3;
    out.c.fill(0);
    int idx = 0;
    for (int a = 0; a < 3; ++a)
        for (int b = a; b < 3; ++b, ++idx) {
            u32 cab = f.c[idx];
            if (!cab) continue;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    u32 add = K.mul(cab, K.mul(inv[a][i], inv[b][j]));
                    int pos = qf_index(std::min(i, j), std::max(i, j), 3);
                    out.c[pos] = K.add(out.c[pos], add);
                }
        }
    return out;
}

SubplaneConic random_conic_in_subplane(const Frame& fr, const BaerSubplane& B,
                                       int through_T, DetRng& rng) {
    const Gf& Fq = fr.Fq();
    std::array<u32, 3> that{};
    if (through_T != 0) that = chart_coords(fr, B, B.tangent_point);
    while (true) {
        QuadForm f;
        f.nvars = 3;
        f.c.fill(0);
        bool nz = false;
        for (int i = 0; i < 6; ++i) {
            f.c[i] = rng.below(Fq.order());
            nz |= f.c[i] != 0;
        }
        if (!nz) continue;
        if (!conic_form_nondegenerate(Fq, f)) continue;
        u32 at_T = f.eval(Fq, std::span<const u32>(that.data(), 3));
        if (through_T == 1 && at_T != 0) continue;
        if (through_T == -1 && at_T == 0) continue;
        SubplaneConic out;
        out.chart_form = f;
        for (const Pt& x : PointRange(Fq, 2)) {
            std::array<u32, 3> xv{x.c[0], x.c[1], x.c[2]};
            if (f.eval(Fq, std::span<const u32>(xv.data(), 3)) == 0)
                out.points.push_back(
                    chart_point(fr, B, std::span<const u32>(xv.data(), 3)));
        }
        if (out.points.size() != fr.q() + 1) continue;
        std::sort(out.points.begin(), out.points.end());
        out.cplus = make_conic(fr.Fq2(), chart_form_to_plane(fr, B, f));
        return out;
    }
}

std::vector<std::pair<u32, int>> conic_linf_params(const Frame& fr,
                                                   const Conic& O, Level lv) {
    const Gf& F = fr.tower().level(lv);
    // restriction to z = 0 read as a polynomial in delta = x/y
    std::vector<u32> bin{O.form.c[qf_index(1, 1, 3)], O.form.c[qf_index(0, 1, 3)],
                         O.form.c[qf_index(0, 0, 3)]};
    return poly_proj_roots(F, bin, 2);
}

RatCurve rational_conic_param(const Gf& F, const std::vector<Pt>& pts) {
    if (pts.size() < 4) throw std::invalid_argument("need q+1 >= 4 points");
    std::set<Pt> want(pts.begin(), pts.end());
    for (u32 s4 = 2; s4 < F.order(); ++s4) {
        std::vector<std::pair<u32, Pt>> entries{
            {0, pts[0]}, {1, pts[1]}, {INF, pts[2]}, {s4, pts[3]}};
        try {
            RatCurve c = conic_from_params(
                F, std::span<const std::pair<u32, Pt>>(entries.data(), 4));
            std::set<Pt> got;
            for (const Pt& p : c.points(F)) got.insert(p);
            if (got == want) return c;
        } catch (const std::invalid_argument&) {
        }
    }
    throw std::invalid_argument("points do not admit a conic parameterisation");
}

std::vector<std::vector<u32>> all_baer_subline_param_sets(const Gf& K, u32 q) {
    std::set<std::vector<u32>> out;
    u32 n = K.order();
    std::vector<u32> params;
    for (u32 s = 0; s < n; ++s) params.push_back(s);
    params.push_back(INF);
    for (size_t i = 0; i < params.size(); ++i)
        for (size_t j = i + 1; j < params.size(); ++j)
            for (size_t k = j + 1; k < params.size(); ++k)
                out.insert(
                    baer_subline_params(K, q, params[i], params[j], params[k]));
    return std::vector<std::vector<u32>>(out.begin(), out.end());
}

}  // namespace detail

}  // namespace bbv
