#include "bbv/varieties.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace bbv {

// ------------------------------------------------------------ quadratic forms

int qf_index(int i, int j, int nvars) {
    if (i > j) std::swap(i, j);
    return i * nvars - i * (i - 1) / 2 + (j - i);
}

u32 QuadForm::eval(const Gf& F, std::span<const u32> x) const {
    u32 acc = 0;
    int idx = 0;
    for (int i = 0; i < nvars; ++i)
        for (int j = i; j < nvars; ++j, ++idx) {
            if (!c[idx]) continue;
            acc = F.add(acc, F.mul(c[idx], F.mul(x[i], x[j])));
        }
    return acc;
}

bool QuadForm::is_zero() const {
    for (u32 v : c)
        if (v) return false;
    return true;
}

QuadForm qf_scale(const Gf& F, QuadForm f, u32 s) {
    for (u32& v : f.c) v = F.mul(v, s);
    return f;
}

QuadForm qf_add(const Gf& F, QuadForm f, const QuadForm& g) {
    for (size_t i = 0; i < f.c.size(); ++i) f.c[i] = F.add(f.c[i], g.c[i]);
    return f;
}

bool conic_form_nondegenerate(const Gf& F, const QuadForm& f) {
    // matrix of the associated bilinear form
    std::vector<std::vector<u32>> M(3, std::vector<u32>(3, 0));
    for (int i = 0; i < 3; ++i) {
        u32 cii = f.c[qf_index(i, i, 3)];
        M[i][i] = F.add(cii, cii);
        for (int j = i + 1; j < 3; ++j) M[i][j] = M[j][i] = f.c[qf_index(i, j, 3)];
    }
    auto ns = null_space(F, M);
    if (F.characteristic() != 2) return ns.empty();
    if (ns.size() != 1) return false;
    // char 2: nondegenerate iff the nucleus is off the conic
    return f.eval(F, std::span<const u32>(ns[0].data(), 3)) != 0;
}

std::optional<QuadForm> conic_form_through(
    const Gf& F, std::span<const std::array<u32, 3>> pts) {
    std::vector<std::vector<u32>> rows;
    for (const auto& p : pts) {
        std::vector<u32> r(6, 0);
        int idx = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j, ++idx) r[idx] = F.mul(p[i], p[j]);
        rows.push_back(std::move(r));
    }
    auto ns = null_space(F, rows);
    if (ns.size() != 1) return std::nullopt;
    QuadForm f;
    f.nvars = 3;
    f.c.fill(0);
    for (int i = 0; i < 6; ++i) f.c[i] = ns[0][i];
    for (int i = 0; i < 6; ++i)
        if (f.c[i]) {
            f = qf_scale(F, f, F.inv(f.c[i]));
            break;
        }
    return f;
}

// ------------------------------------------------------------ conics in PG(2)

namespace {

bool three_collinear(const Gf& F, const Pt& a, const Pt& b, const Pt& c) {
    u32 d = F.mul(a.c[0], det2(F, b.c[1], b.c[2], c.c[1], c.c[2]));
    d = F.sub(d, F.mul(a.c[1], det2(F, b.c[0], b.c[2], c.c[0], c.c[2])));
    d = F.add(d, F.mul(a.c[2], det2(F, b.c[0], b.c[1], c.c[0], c.c[1])));
    return d == 0;
}

}  // namespace

Conic make_conic(const Gf& F, const QuadForm& form) {
    if (form.nvars != 3 || form.is_zero())
        throw std::invalid_argument("not a ternary quadratic form");
    if (!conic_form_nondegenerate(F, form))
        throw std::invalid_argument("degenerate conic");
    Conic O;
    O.form = form;  // scale preserved: the pencil inherits it verbatim
    for (const Pt& p : PointRange(F, 2))
        if (form.eval(F, std::span<const u32>(p.c.data(), 3)) == 0)
            O.pts.push_back(p);
    if (O.pts.size() != F.order() + 1)
        throw std::logic_error("conic point count off");
    for (size_t i = 0; i < O.pts.size(); ++i)
        for (size_t j = i + 1; j < O.pts.size(); ++j)
            for (size_t k = j + 1; k < O.pts.size(); ++k)
                if (three_collinear(F, O.pts[i], O.pts[j], O.pts[k]))
                    throw std::logic_error("conic has three collinear points");
    return O;
}

Conic conic_through(const Gf& F, std::span<const Pt> five) {
    if (five.size() != 5) throw std::invalid_argument("need five points");
    for (size_t i = 0; i < 5; ++i)
        for (size_t j = i + 1; j < 5; ++j)
            for (size_t k = j + 1; k < 5; ++k)
                if (three_collinear(F, five[i], five[j], five[k]))
                    throw std::invalid_argument("three of the points collinear");
    std::vector<std::array<u32, 3>> coords;
    for (const Pt& p : five) coords.push_back({p.c[0], p.c[1], p.c[2]});
    auto f = conic_form_through(F, coords);
    if (!f) throw std::invalid_argument("no unique conic through the points");
    return make_conic(F, *f);
}

// ------------------------------------------------------------ moebius helpers

std::pair<u32, u32> param_vec(u32 s) {
    return s == INF ? std::make_pair(1u, 0u) : std::make_pair(s, 1u);
}

u32 param_of_vec(const Gf& F, u32 u, u32 v) {
    if (v == 0) {
        if (u == 0) throw std::domain_error("zero parameter vector");
        return INF;
    }
    return F.div(u, v);
}

u32 mob_apply(const Gf& F, const Mob& m, u32 s) {
    auto [u, v] = param_vec(s);
    u32 nu = F.add(F.mul(m[0][0], u), F.mul(m[0][1], v));
    u32 nv = F.add(F.mul(m[1][0], u), F.mul(m[1][1], v));
    return param_of_vec(F, nu, nv);
}

Mob mob_inverse(const Gf& F, const Mob& m) {
    return Mob{{{m[1][1], F.neg(m[0][1])}, {F.neg(m[1][0]), m[0][0]}}};
}

Mob mob_through(const Gf& F, u32 s1, u32 s2, u32 s3) {
    auto [u1, v1] = param_vec(s1);
    auto [u2, v2] = param_vec(s2);
    auto [u3, v3] = param_vec(s3);
    // alpha (u3,v3) + beta (u1,v1) = (u2,v2)
    u32 det = det2(F, u3, u1, v3, v1);
    if (det == 0) throw std::invalid_argument("moebius needs distinct parameters");
    u32 alpha = F.div(det2(F, u2, u1, v2, v1), det);
    u32 beta = F.div(det2(F, u3, u2, v3, v2), det);
    if (alpha == 0 || beta == 0)
        throw std::invalid_argument("moebius needs distinct parameters");
    Mob minv{{{F.mul(alpha, u3), F.mul(beta, u1)},
              {F.mul(alpha, v3), F.mul(beta, v1)}}};
    return mob_inverse(F, minv);
}

u32 cross_ratio(const Gf& F, u32 a, u32 b, u32 c, u32 d) {
    return mob_apply(F, mob_through(F, b, c, d), a);
}

bool params_in_baer_subline(const Gf& F, u32 suborder,
                            std::span<const u32> params) {
    if (params.size() <= 3) return true;
    Mob m = mob_through(F, params[0], params[1], params[2]);
    for (size_t i = 3; i < params.size(); ++i) {
        u32 x = mob_apply(F, m, params[i]);
        if (x != INF && x >= suborder) return false;
    }
    return true;
}

std::vector<u32> baer_subline_params(const Gf& F, u32 suborder, u32 s1, u32 s2,
                                     u32 s3) {
    Mob minv = mob_inverse(F, mob_through(F, s1, s2, s3));
    std::vector<u32> out;
    for (u32 t = 0; t < suborder; ++t) out.push_back(mob_apply(F, minv, t));
    out.push_back(mob_apply(F, minv, INF));
    std::sort(out.begin(), out.end());
    return out;
}

u32 baer_involution(const Gf& F, u32 s1, u32 s2, u32 s3, u32 s) {
    Mob m = mob_through(F, s1, s2, s3);
    u32 x = mob_apply(F, m, s);
    u32 xq = x == INF ? INF : F.frob(x);
    return mob_apply(F, mob_inverse(F, m), xq);
}

// ------------------------------------------------------------ rational curves

Pt RatCurve::at(const Gf& F, u32 theta) const {
    std::array<u32, 5> v{};
    if (theta == INF) {
        for (int r = 0; r <= space_dim; ++r) v[r] = m[r][degree];
    } else {
        for (int r = 0; r <= space_dim; ++r) {
            u32 acc = 0;
            for (int k = degree; k >= 0; --k) acc = F.add(F.mul(acc, theta), m[r][k]);
            v[r] = acc;
        }
    }
    return make_point(F, std::span<const u32>(v.data(), space_dim + 1));
}

std::vector<Pt> RatCurve::points(const Gf& F) const {
    std::vector<Pt> out;
    for (u32 t = 0; t < F.order(); ++t) out.push_back(at(F, t));
    out.push_back(at(F, INF));
    return out;
}

std::vector<u32> RatCurve::coord_poly(int row) const {
    return std::vector<u32>(m[row].begin(), m[row].begin() + degree + 1);
}

u32 RatCurve::param_of(const Gf& F, const Pt& p) const {
    for (u32 t = 0; t < F.order(); ++t)
        if (at(F, t) == p) return t;
    if (at(F, INF) == p) return INF;
    throw std::invalid_argument("point not on curve");
}

Subspace RatCurve::ambient_span(const Gf& F) const {
    auto all = points(F);
    return span(F, std::span<const Pt>(all.data(), all.size()));
}

RatCurve nrc_through(const Gf& F, std::span<const Pt> pts) {
    const int k = static_cast<int>(pts.size());
    if (k < 5 || k > 7) throw std::invalid_argument("need 5, 6 or 7 points");
    const int n = k - 3;
    Subspace amb = span(F, pts);
    if (amb.rank() != n + 1)
        throw std::invalid_argument("points span the wrong dimension");
    std::vector<int> piv;
    for (int r = 0; r < amb.rank(); ++r)
        for (int j = 0; j <= amb.space_dim(); ++j)
            if (amb.row(r)[j]) {
                piv.push_back(j);
                break;
            }
    auto coords = [&](const Pt& p) {
        std::vector<u32> c(n + 1);
        for (int r = 0; r <= n; ++r) c[r] = p.c[piv[r]];
        return c;
    };
    std::vector<std::vector<u32>> cols;
    for (int i = 0; i <= n; ++i) cols.push_back(coords(pts[i]));
    std::vector<u32> target = coords(pts[n + 1]);
    std::vector<std::vector<u32>> sys(n + 1, std::vector<u32>(n + 1));
    for (int r = 0; r <= n; ++r)
        for (int i = 0; i <= n; ++i) sys[r][i] = cols[i][r];
    auto lam = solve_linear(F, sys, target);
    if (!lam) throw std::invalid_argument("degenerate position (frame)");
    for (u32 l : *lam)
        if (l == 0) throw std::invalid_argument("degenerate position (frame)");
    std::vector<std::vector<u32>> Tinv(n + 1, std::vector<u32>(n + 1));
    for (int r = 0; r <= n; ++r)
        for (int i = 0; i <= n; ++i) Tinv[r][i] = F.mul((*lam)[i], cols[i][r]);
    std::vector<std::vector<u32>> T;
    if (!invert_matrix(F, Tinv, T))
        throw std::invalid_argument("degenerate position (frame)");
    std::vector<u32> X = mat_vec(F, T, coords(pts.back()));
    std::vector<u32> a(n + 1);
    for (int i = 0; i <= n; ++i) {
        if (X[i] == 0) throw std::invalid_argument("degenerate position (unit)");
        a[i] = F.neg(F.inv(X[i]));
    }
    for (int i = 0; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            if (a[i] == a[j])
                throw std::invalid_argument("degenerate position (parameters)");
    std::vector<u32> full{1};
    for (int j = 0; j <= n; ++j)
        full = poly_mul(F, full, std::vector<u32>{F.neg(a[j]), 1});
    std::vector<std::vector<u32>> Mstd;
    for (int i = 0; i <= n; ++i) {
        u32 rem = 0;
        auto row = poly_div_linear(F, full, a[i], &rem);
        if (rem != 0) throw std::logic_error("division failure in nrc fit");
        Mstd.push_back(row);
    }
    RatCurve curve;
    curve.degree = n;
    curve.space_dim = pts[0].n;
    for (auto& row : curve.m) row.fill(0);
    for (int r5 = 0; r5 <= curve.space_dim; ++r5)
        for (int col = 0; col <= n; ++col) {
            u32 acc = 0;
            for (int r = 0; r <= n; ++r) {
                u32 tm = 0;
                for (int s = 0; s <= n; ++s)
                    tm = F.add(tm, F.mul(Tinv[r][s], Mstd[s][col]));
                acc = F.add(acc, F.mul(amb.row(r)[r5], tm));
            }
            curve.m[r5][col] = acc;
        }
    // pts[i] sits at theta = a_i, pts[n+1] at INF, the last point at 0
    for (int i = 0; i <= n; ++i)
        if (curve.at(F, a[i]) != pts[i]) throw std::logic_error("nrc fit check");
    if (curve.at(F, INF) != pts[n + 1] || curve.at(F, 0) != pts.back())
        throw std::logic_error("nrc fit check");
    return curve;
}

namespace {

// rows: coefficients of (a theta + b)^k (c theta + d)^{n-k}; composing a
// curve matrix with R on the right rewrites it in the original parameter.
std::vector<std::vector<u32>> mob_reparam_matrix(const Gf& F, const Mob& mob,
                                                 int degree) {
    u32 a = mob[0][0], b = mob[0][1], c = mob[1][0], d = mob[1][1];
    std::vector<std::vector<u32>> R(degree + 1);
    for (int k = 0; k <= degree; ++k) {
        std::vector<u32> poly{1};
        for (int i = 0; i < k; ++i) poly = poly_mul(F, poly, std::vector<u32>{b, a});
        for (int i = 0; i < degree - k; ++i)
            poly = poly_mul(F, poly, std::vector<u32>{d, c});
        poly.resize(degree + 1, 0);
        R[k] = poly;
    }
    return R;
}

}  // namespace

RatCurve conic_from_params(const Gf& F,
                           std::span<const std::pair<u32, Pt>> entries) {
    if (entries.size() < 4) throw std::invalid_argument("need four entries");
    Mob mob = mob_through(F, entries[0].first, entries[1].first,
                          entries[2].first);
    const Pt& A = entries[0].second;  // mapped parameter 0
    const Pt& B = entries[1].second;  // mapped parameter 1
    const Pt& C = entries[2].second;  // mapped parameter INF
    u32 t4 = mob_apply(F, mob, entries[3].first);
    const Pt& P4 = entries[3].second;
    if (t4 == 0 || t4 == 1 || t4 == INF)
        throw std::invalid_argument("parameters not distinct");
    // a A (1 - t4) + d B t4 + b C (t4^2 - t4) = e P4
    int nc = A.n + 1;
    std::vector<std::vector<u32>> sys(nc, std::vector<u32>(4));
    u32 one_m = F.sub(1, t4), tsq = F.sub(F.mul(t4, t4), t4);
    for (int r = 0; r < nc; ++r) {
        sys[r][0] = F.mul(A.c[r], one_m);
        sys[r][1] = F.mul(B.c[r], t4);
        sys[r][2] = F.mul(C.c[r], tsq);
        sys[r][3] = P4.c[r];
    }
    auto ns = null_space(F, sys);
    if (ns.size() != 1) throw std::invalid_argument("no unique conic (params)");
    u32 ca = ns[0][0], cd = ns[0][1], cb = ns[0][2];
    if (ca == 0 || cd == 0 || cb == 0 || ns[0][3] == 0)
        throw std::invalid_argument("degenerate conic data");
    RatCurve fitted;
    fitted.degree = 2;
    fitted.space_dim = A.n;
    for (auto& row : fitted.m) row.fill(0);
    for (int r = 0; r < nc; ++r) {
        u32 c0 = F.mul(ca, A.c[r]);
        u32 c2 = F.mul(cb, C.c[r]);
        u32 c1 = F.sub(F.sub(F.mul(cd, B.c[r]), c0), c2);
        fitted.m[r][0] = c0;
        fitted.m[r][1] = c1;
        fitted.m[r][2] = c2;
    }
    auto R = mob_reparam_matrix(F, mob, 2);
    RatCurve out = fitted;
    for (int r = 0; r < nc; ++r)
        for (int j = 0; j <= 2; ++j) {
            u32 acc = 0;
            for (int k = 0; k <= 2; ++k)
                acc = F.add(acc, F.mul(fitted.m[r][k], R[k][j]));
            out.m[r][j] = acc;
        }
    for (const auto& [s, p] : entries)
        if (out.at(F, s) != p)
            throw std::invalid_argument("inconsistent parameterised conic data");
    return out;
}

std::vector<std::pair<u32, int>> curve_meet_subspace(const Gf& F,
                                                     const RatCurve& curve,
                                                     const Subspace& sub) {
    auto duals = sub.dual_forms(F);
    int inf_mult = curve.degree + 1;
    std::vector<u32> g;
    bool any = false;
    for (const auto& h : duals) {
        std::vector<u32> f(curve.degree + 1, 0);
        for (int j = 0; j <= curve.degree; ++j) {
            u32 acc = 0;
            for (int r = 0; r <= curve.space_dim; ++r)
                acc = F.add(acc, F.mul(h[r], curve.m[r][j]));
            f[j] = acc;
        }
        int d = poly_deg(f);
        if (d < 0) continue;  // this form vanishes on the whole curve
        inf_mult = std::min(inf_mult, curve.degree - d);
        g = any ? poly_gcd(F, g, f) : f;
        any = true;
    }
    if (!any) throw std::logic_error("curve contained in the subspace");
    std::vector<std::pair<u32, int>> out;
    if (poly_deg(g) >= 1) out = poly_roots(F, g);
    if (inf_mult > 0) out.emplace_back(INF, inf_mult);
    return out;
}

std::vector<u32> compose_quadform_with_curve(const Gf& F, const QuadForm& qf,
                                             const RatCurve& curve) {
    std::vector<u32> acc;
    int idx = 0;
    for (int i = 0; i < qf.nvars; ++i)
        for (int j = i; j < qf.nvars; ++j, ++idx) {
            if (!qf.c[idx]) continue;
            auto pi = curve.coord_poly(i);
            auto pj = curve.coord_poly(j);
            acc = poly_add(F, acc, poly_scale(F, poly_mul(F, pi, pj), qf.c[idx]));
        }
    acc.resize(2 * curve.degree + 1, 0);
    return acc;
}

bool curve_in_quadric(const Gf& F, const RatCurve& curve, const QuadForm& qf) {
    return poly_deg(compose_quadform_with_curve(F, qf, curve)) < 0;
}

std::vector<QuadForm> quadrics_through(const Gf& F, std::span<const Pt> pts) {
    std::vector<std::vector<u32>> rows;
    for (const Pt& p : pts) {
        std::vector<u32> r(15, 0);
        int idx = 0;
        for (int i = 0; i < 5; ++i)
            for (int j = i; j < 5; ++j, ++idx) r[idx] = F.mul(p.c[i], p.c[j]);
        rows.push_back(std::move(r));
    }
    std::vector<QuadForm> out;
    for (auto& v : null_space(F, rows)) {
        QuadForm f;
        f.nvars = 5;
        f.c.fill(0);
        for (int i = 0; i < 15; ++i) f.c[i] = v[i];
        out.push_back(f);
    }
    return out;
}

// ------------------------------------------------------------ quadric pencils

QuadForm Pencil::member(const Gf& F, u32 t) const {
    if (t == INF) return qinf;
    return qf_add(F, qf_scale(F, qinf, t), q0);
}

Pencil conic_to_pencil(const Frame& fr, const Conic& O) {
    const FieldTower& tw = fr.tower();
    const Gf& K = tw.quad();
    struct Term {
        int var;
        u32 coef;
    };
    std::vector<std::vector<Term>> sub(3);
    sub[0] = {{0, 1}, {1, tw.tau()}};
    sub[1] = {{2, 1}, {3, tw.tau()}};
    sub[2] = {{4, 1}};
    std::array<u32, 15> big{};
    int idx = 0;
    for (int a = 0; a < 3; ++a)
        for (int b = a; b < 3; ++b, ++idx) {
            u32 cab = O.form.c[idx];
            if (!cab) continue;
            for (const Term& ti : sub[a])
                for (const Term& tj : sub[b]) {
                    int i = ti.var, j = tj.var;
                    u32 add = K.mul(cab, K.mul(ti.coef, tj.coef));
                    int pos = qf_index(std::min(i, j), std::max(i, j), 5);
                    big[pos] = K.add(big[pos], add);
                }
        }
    Pencil pe;
    pe.qinf.nvars = pe.q0.nvars = 5;
    pe.qinf.c.fill(0);
    pe.q0.c.fill(0);
    for (int i = 0; i < 15; ++i) {
        auto [lo, hi] = tw.split_tau(big[i]);
        pe.qinf.c[i] = lo;
        pe.q0.c[i] = hi;
    }
    return pe;
}

std::vector<Pt> pencil_member_on_g(const Frame& fr, const Pencil& pe, u32 t,
                                   Level lv) {
    const Gf& F = fr.tower().level(lv);
    QuadForm Q = pe.member(fr.tower().base(), t);
    Pt a0 = fr.g_point(INF, lv);
    Pt a1 = fr.g_point(0, lv);
    std::vector<std::vector<u32>> cp(5);
    for (int i = 0; i < 5; ++i) cp[i] = {a1.c[i], a0.c[i]};
    std::vector<u32> f;
    int idx = 0;
    for (int i = 0; i < 5; ++i)
        for (int j = i; j < 5; ++j, ++idx) {
            if (!Q.c[idx]) continue;
            f = poly_add(F, f, poly_scale(F, poly_mul(F, cp[i], cp[j]), Q.c[idx]));
        }
    f.resize(3, 0);
    std::vector<Pt> out;
    if (poly_deg(f) < 0) throw std::logic_error("quadric contains g");
    for (auto [beta, mult] : poly_proj_roots(F, f, 2))
        out.push_back(fr.g_point(beta, lv));
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------- locus at infinity

namespace {

struct SigmaForm {
    std::array<u32, 10> c{};  // 4-var restriction of a 5-var form to z = 0
};

int sf_index(int i, int j) {
    if (i > j) std::swap(i, j);
    return i * 4 - i * (i - 1) / 2 + (j - i);
}

SigmaForm restrict_to_sigma(const QuadForm& q) {
    SigmaForm s;
    int idx = 0;
    for (int i = 0; i < 5; ++i)
        for (int j = i; j < 5; ++j, ++idx)
            if (j < 4) s.c[sf_index(i, j)] = q.c[idx];
    return s;
}

}  // namespace

std::vector<Pt> quadric_pair_locus_in_sigma(const Gf& F, const QuadForm& qa,
                                            const QuadForm& qb) {
    SigmaForm A = restrict_to_sigma(qa), B = restrict_to_sigma(qb);
    std::vector<Pt> out;
    auto push = [&](u32 x0, u32 x1, u32 y0, u32 y1) {
        std::array<u32, 5> v{x0, x1, y0, y1, 0};
        out.push_back(make_point(F, std::span<const u32>(v.data(), 5)));
    };
    // the common line l0 = {x0 = x1 = 0}
    for (const Pt& p : PointRange(F, 1)) {
        u32 y0 = p.c[0], y1 = p.c[1];
        auto ev = [&](const SigmaForm& S) {
            return F.add(F.add(F.mul(S.c[sf_index(2, 2)], F.mul(y0, y0)),
                               F.mul(S.c[sf_index(2, 3)], F.mul(y0, y1))),
                         F.mul(S.c[sf_index(3, 3)], F.mul(y1, y1)));
        };
        if (ev(A) == 0 && ev(B) == 0) push(0, 0, y0, y1);
    }
    // slices x0 = c x1 (x1 = 1) for c in F, and the slice x1 = 0 (x0 = 1)
    auto slice = [&](bool inf_slice, u32 c) {
        auto build = [&](const SigmaForm& S, u32& cww, u32& cwy0, u32& cwy1) {
            if (!inf_slice) {
                cww = F.add(F.add(F.mul(S.c[sf_index(0, 0)], F.mul(c, c)),
                                  F.mul(S.c[sf_index(0, 1)], c)),
                            S.c[sf_index(1, 1)]);
                cwy0 = F.add(F.mul(S.c[sf_index(0, 2)], c), S.c[sf_index(1, 2)]);
                cwy1 = F.add(F.mul(S.c[sf_index(0, 3)], c), S.c[sf_index(1, 3)]);
            } else {
                cww = S.c[sf_index(0, 0)];
                cwy0 = S.c[sf_index(0, 2)];
                cwy1 = S.c[sf_index(0, 3)];
            }
        };
        u32 aww, awy0, awy1, bww, bwy0, bwy1;
        build(A, aww, awy0, awy1);
        build(B, bww, bwy0, bwy1);
        u32 a22 = A.c[sf_index(2, 2)], a23 = A.c[sf_index(2, 3)],
            a33 = A.c[sf_index(3, 3)];
        u32 b22 = B.c[sf_index(2, 2)], b23 = B.c[sf_index(2, 3)],
            b33 = B.c[sf_index(3, 3)];
        auto emit = [&](u32 y0, u32 y1) {
            if (!inf_slice) push(c, 1, y0, y1);
            else push(1, 0, y0, y1);
        };
        for (u32 y0 = 0; y0 < F.order(); ++y0) {
            u32 Aq = a33;
            u32 Bq = F.add(F.mul(a23, y0), awy1);
            u32 Cq = F.add(F.add(F.mul(a22, F.mul(y0, y0)), F.mul(awy0, y0)), aww);
            u32 Ar = b33;
            u32 Br = F.add(F.mul(b23, y0), bwy1);
            u32 Cr = F.add(F.add(F.mul(b22, F.mul(y0, y0)), F.mul(bwy0, y0)), bww);
            auto r1 = F.roots_upto2(Aq, Bq, Cq);
            auto r2 = F.roots_upto2(Ar, Br, Cr);
            if (r1.n < 0 && r2.n < 0) {
                for (u32 y1 = 0; y1 < F.order(); ++y1) emit(y0, y1);
            } else if (r1.n < 0) {
                for (int k = 0; k < r2.n; ++k) emit(y0, r2.r[k]);
            } else if (r2.n < 0) {
                for (int k = 0; k < r1.n; ++k) emit(y0, r1.r[k]);
            } else {
                for (int k = 0; k < r1.n; ++k) {
                    u32 y1 = r1.r[k];
                    u32 val =
                        F.add(F.add(F.mul(Ar, F.mul(y1, y1)), F.mul(Br, y1)), Cr);
                    if (val == 0) emit(y0, y1);
                }
            }
        }
    };
    for (u32 c = 0; c < F.order(); ++c) slice(false, c);
    slice(true, 0);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::optional<std::vector<Subspace>> decompose_into_lines(const Gf& F,
                                                          std::vector<Pt> pts) {
    std::sort(pts.begin(), pts.end());
    std::vector<Subspace> lines;
    std::set<Pt> claimed;
    const u64 others = F.order();  // a full line carries order+1 points
    // key a point by reducing it modulo X and packing the coordinates
    auto reduce_key = [&](const Pt& X, int lead, const Pt& y) -> u64 {
        std::array<u32, 5> v{};
        u32 f = y.c[lead];
        for (int j = 0; j <= y.n; ++j) v[j] = F.sub(y.c[j], F.mul(f, X.c[j]));
        int l2 = -1;
        for (int j = 0; j <= y.n; ++j)
            if (v[j]) {
                l2 = j;
                break;
            }
        if (l2 < 0) return ~0ull;  // y == X projectively (cannot happen)
        u32 s = F.inv(v[l2]);
        u64 key = 0;
        for (int j = 0; j <= y.n; ++j) {
            if (j == lead) continue;  // always zero after the reduction
            key = (key << 16) | F.mul(v[j], s);
        }
        return key;
    };
    while (true) {
        const Pt* X = nullptr;
        for (const Pt& p : pts)
            if (!claimed.count(p)) {
                X = &p;
                break;
            }
        if (!X) break;
        int lead = 0;
        while (X->c[lead] == 0) ++lead;
        std::map<u64, std::pair<u64, const Pt*>> groups;
        for (const Pt& y : pts) {
            if (y == *X) continue;
            auto& slot = groups[reduce_key(*X, lead, y)];
            ++slot.first;
            slot.second = &y;
        }
        bool found = false;
        for (auto& [key, slot] : groups) {
            if (slot.first != others) continue;
            found = true;
            std::array<Pt, 2> two{*X, *slot.second};
            Subspace line = span(F, std::span<const Pt>(two.data(), 2));
            lines.push_back(line);
            for (const Pt& p : line.points(F)) claimed.insert(p);
        }
        if (!found) return std::nullopt;
    }
    std::sort(lines.begin(), lines.end());
    lines.erase(std::unique(lines.begin(), lines.end()), lines.end());
    return lines;
}

InfinityLocus locus_at_infinity(const Frame& fr, const Pencil& pe, Level lv) {
    const Gf& F = fr.tower().level(lv);
    InfinityLocus loc;
    loc.points = quadric_pair_locus_in_sigma(F, pe.qinf, pe.q0);
    auto lines = decompose_into_lines(F, loc.points);
    if (!lines)
        throw std::runtime_error("locus at infinity is not a union of lines");
    loc.lines = *lines;
    return loc;
}

// ------------------------------------------------------------ Baer subplanes

BaerSubplane subplane_from_chart(const Frame& fr,
                                 const std::vector<std::vector<u32>>& chart) {
    const Gf& K = fr.Fq2();
    BaerSubplane B;
    B.chart = chart;
    if (!invert_matrix(K, chart, B.chart_inv))
        throw std::invalid_argument("chart is singular");
    for (const Pt& p : PointRange(fr.Fq(), 2)) {
        std::array<u32, 3> v{p.c[0], p.c[1], p.c[2]};
        auto img = mat_vec(K, chart, std::span<const u32>(v.data(), 3));
        B.points.push_back(make_point(K, std::span<const u32>(img.data(), 3)));
    }
    std::sort(B.points.begin(), B.points.end());
    B.points.erase(std::unique(B.points.begin(), B.points.end()), B.points.end());
    if (B.points.size() != static_cast<size_t>(fr.q()) * fr.q() + fr.q() + 1)
        throw std::invalid_argument("chart is not injective");
    for (const Pt& p : B.points)
        if (p.c[2] == 0) B.linf_points.push_back(p);
    if (B.linf_points.size() == 1) {
        B.tangent = true;
        B.tangent_point = B.linf_points[0];
    } else if (B.linf_points.size() != fr.q() + 1) {
        throw std::logic_error("chart image is not secant or tangent");
    }
    return B;
}

BaerSubplane baer_subplane_through(const Frame& fr, std::span<const Pt> quad) {
    const Gf& K = fr.Fq2();
    if (quad.size() != 4) throw std::invalid_argument("need a quadrangle");
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            for (int k = j + 1; k < 4; ++k)
                if (three_collinear(K, quad[i], quad[j], quad[k]))
                    throw std::invalid_argument("three of the points collinear");
    std::vector<std::vector<u32>> sys(3, std::vector<u32>(3));
    std::vector<u32> rhs(3);
    for (int r = 0; r < 3; ++r) {
        for (int i = 0; i < 3; ++i) sys[r][i] = quad[i].c[r];
        rhs[r] = quad[3].c[r];
    }
    auto sol = solve_linear(K, sys, rhs);
    if (!sol || (*sol)[0] == 0 || (*sol)[1] == 0 || (*sol)[2] == 0)
        throw std::invalid_argument("degenerate quadrangle");
    std::vector<std::vector<u32>> chart(3, std::vector<u32>(3));
    for (int r = 0; r < 3; ++r)
        for (int i = 0; i < 3; ++i) chart[r][i] = K.mul((*sol)[i], quad[i].c[r]);
    BaerSubplane B = subplane_from_chart(fr, chart);
    for (const Pt& p : quad)
        if (!std::binary_search(B.points.begin(), B.points.end(), p))
            throw std::logic_error("quadrangle escaped its subplane");
    return B;
}

bool is_baer_subplane(const Frame& fr, const std::vector<Pt>& pts) {
    const Gf& K = fr.Fq2();
    u64 q = fr.q();
    if (pts.size() != q * q + q + 1) return false;
    std::set<Pt> uniq(pts.begin(), pts.end());
    if (uniq.size() != pts.size()) return false;
    std::map<Subspace, u64> cnt;
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = i + 1; j < pts.size(); ++j) {
            std::array<Pt, 2> two{pts[i], pts[j]};
            ++cnt[span(K, std::span<const Pt>(two.data(), 2))];
        }
    if (cnt.size() != q * q + q + 1) return false;
    for (auto& [line, c] : cnt)
        if (c != (q + 1) * q / 2) return false;
    return true;
}

std::array<u32, 3> chart_coords(const Frame& fr, const BaerSubplane& B,
                                const Pt& p) {
    const Gf& K = fr.Fq2();
    std::array<u32, 3> v{p.c[0], p.c[1], p.c[2]};
    auto raw = mat_vec(K, B.chart_inv, std::span<const u32>(v.data(), 3));
    Pt n = make_point(K, std::span<const u32>(raw.data(), 3));
    for (int i = 0; i < 3; ++i)
        if (n.c[i] >= fr.q())
            throw std::invalid_argument("point not on the subplane");
    return {n.c[0], n.c[1], n.c[2]};
}

Pt chart_point(const Frame& fr, const BaerSubplane& B, std::span<const u32> xyz) {
    const Gf& K = fr.Fq2();
    auto img = mat_vec(K, B.chart, xyz);
    return make_point(K, std::span<const u32>(img.data(), 3));
}

// ------------------------------------------------------------ F_q-conics

RatCurve conic_param(const Gf& F, const Conic& O) {
    return nrc_through(F, std::span<const Pt>(O.pts.data(), 5));
}

FqConic fq_conic_through(const Frame& fr, const Conic& O, const Pt& a,
                         const Pt& b, const Pt& c) {
    const Gf& K = fr.Fq2();
    RatCurve par = conic_param(K, O);
    u32 sa = par.param_of(K, a), sb = par.param_of(K, b), sc = par.param_of(K, c);
    if (sa == sb || sb == sc || sa == sc)
        throw std::invalid_argument("points not distinct");
    FqConic C;
    for (u32 s : baer_subline_params(K, fr.q(), sa, sb, sc))
        C.points.push_back(par.at(K, s));
    std::sort(C.points.begin(), C.points.end());
    std::array<Pt, 4> quad{C.points[0], C.points[1], C.points[2], C.points[3]};
    C.host = baer_subplane_through(fr, std::span<const Pt>(quad.data(), 4));
    for (const Pt& p : C.points)
        if (!std::binary_search(C.host.points.begin(), C.host.points.end(), p))
            throw std::logic_error("subconic escaped its Baer subplane");
    C.cplus = O;
    return C;
}

// ------------------------------------------------------------ line params

Pt line_point_at(const Gf& F, const Subspace& line, u32 theta) {
    if (theta == INF) {
        return make_point(F, std::span<const u32>(line.row(0).data(),
                                                  line.space_dim() + 1));
    }
    std::array<u32, 5> v{};
    for (int j = 0; j <= line.space_dim(); ++j)
        v[j] = F.add(F.mul(theta, line.row(0)[j]), line.row(1)[j]);
    return make_point(F, std::span<const u32>(v.data(), line.space_dim() + 1));
}

u32 line_param_of(const Gf& F, const Subspace& line, const Pt& p) {
    int piv0 = -1, piv1 = -1;
    for (int j = 0; j <= line.space_dim(); ++j) {
        if (piv0 < 0 && line.row(0)[j]) piv0 = j;
        else if (piv0 >= 0 && piv1 < 0 && line.row(1)[j]) piv1 = j;
    }
    u32 a = p.c[piv0], b = p.c[piv1];
    if (b == 0) return INF;
    return F.div(a, b);
}

// ------------------------------------------------------------ ruled cubics

RuledCubic ruled_cubic_from_tangent_subplane(const Frame& fr,
                                             const BaerSubplane& B) {
    if (!B.tangent) throw std::invalid_argument("subplane not tangent");
    const Gf& Fq = fr.Fq();
    u32 q = fr.q();
    RuledCubic V;
    u32 deltaT = fr.linf_delta_of(B.tangent_point);
    V.directrix = fr.spread_line(deltaT);

    auto that = chart_coords(fr, B, B.tangent_point);
    std::map<u32, Subspace> gens;  // keyed by the t-parameter of the meet
    for (const Pt& dual : PointRange(Fq, 2)) {
        u32 dot = 0;
        for (int i = 0; i < 3; ++i) dot = Fq.add(dot, Fq.mul(dual.c[i], that[i]));
        if (dot != 0) continue;
        std::vector<Pt> imgs;
        for (const Pt& x : PointRange(Fq, 2)) {
            u32 d2 = 0;
            for (int i = 0; i < 3; ++i) d2 = Fq.add(d2, Fq.mul(dual.c[i], x.c[i]));
            if (d2 != 0) continue;
            std::array<u32, 3> xv{x.c[0], x.c[1], x.c[2]};
            Pt bp = chart_point(fr, B, std::span<const u32>(xv.data(), 3));
            if (bp.c[2] == 0) continue;  // the tangent point itself
            imgs.push_back(fr.bb_map(bp));
        }
        if (imgs.size() != q) throw std::logic_error("bad generator line");
        Subspace gen = span(Fq, std::span<const Pt>(imgs.data(), imgs.size()));
        if (gen.proj_dim() != 1) throw std::logic_error("generator not a line");
        Pt X{};
        bool foundX = false;
        for (const Pt& p : gen.points(Fq))
            if (p.c[4] == 0) {
                X = p;
                foundX = true;
            }
        if (!foundX || !V.directrix.contains(Fq, X))
            throw std::logic_error("generator misses the directrix");
        u32 theta = line_param_of(Fq, V.directrix, X);
        if (gens.count(theta))
            throw std::logic_error("two generators at one directrix point");
        gens.emplace(theta, gen);
    }
    if (gens.size() != q + 1) throw std::logic_error("generator count off");
    std::set<Pt> ptset;
    for (auto& [theta, gen] : gens) {
        V.gen_params.push_back(theta);
        V.generators.push_back(gen);
        for (const Pt& p : gen.points(Fq)) ptset.insert(p);
    }
    for (const Pt& p : V.directrix.points(Fq)) ptset.insert(p);
    V.points.assign(ptset.begin(), ptset.end());
    if (V.points.size() != static_cast<size_t>(q) * q + 2 * q + 1)
        throw std::logic_error("ruled cubic point count off");

    // conic directrix: a plane section off the line directrix whose points
    // are parameter-aligned with the generators
    for (const Pt& dual : PointRange(Fq, 4)) {
        auto on = [&](const Pt& p) {
            u32 acc = 0;
            for (int i = 0; i < 5; ++i) acc = Fq.add(acc, Fq.mul(dual.c[i], p.c[i]));
            return acc == 0;
        };
        bool cut_t = true;
        for (const Pt& p : V.directrix.points(Fq)) cut_t &= on(p);
        if (cut_t) continue;
        std::vector<size_t> full;
        for (size_t gi = 0; gi < V.generators.size(); ++gi) {
            bool whole = true;
            for (const Pt& p : V.generators[gi].points(Fq)) whole &= on(p);
            if (whole) full.push_back(gi);
        }
        if (full.size() != 1) continue;
        std::vector<Pt> section;
        for (const Pt& p : V.points)
            if (on(p)) section.push_back(p);
        if (section.size() != 2 * q + 1) continue;
        std::set<Pt> genset;
        for (const Pt& p : V.generators[full[0]].points(Fq)) genset.insert(p);
        std::vector<Pt> rest;
        for (const Pt& p : section)
            if (!genset.count(p)) rest.push_back(p);
        if (rest.size() != q) continue;
        for (const Pt& extra : V.generators[full[0]].points(Fq)) {
            std::vector<Pt> cand = rest;
            cand.push_back(extra);
            Subspace pl = span(Fq, std::span<const Pt>(cand.data(), cand.size()));
            if (pl.proj_dim() != 2) continue;
            if (meet(Fq, pl, V.directrix).rank() != 0) continue;
            std::set<Pt> cset(cand.begin(), cand.end());
            std::vector<std::pair<u32, Pt>> entries;
            bool ok = true;
            for (size_t gi = 0; gi < V.generators.size() && ok; ++gi) {
                int hits = 0;
                Pt hit{};
                for (const Pt& p : V.generators[gi].points(Fq))
                    if (cset.count(p)) {
                        ++hits;
                        hit = p;
                    }
                if (hits != 1) ok = false;
                else entries.push_back({V.gen_params[gi], hit});
            }
            if (!ok) continue;
            try {
                V.conic_directrix =
                    conic_from_params(Fq, std::span<const std::pair<u32, Pt>>(
                                              entries.data(), entries.size()));
            } catch (const std::invalid_argument&) {
                continue;
            }
            return V;
        }
    }
    throw std::logic_error("no conic directrix section found");
}

RuledCubic ruled_cubic_from_directrices(const Frame& fr, const Subspace& t,
                                        const RatCurve& conic) {
    const Gf& Fq = fr.Fq();
    u32 q = fr.q();
    RuledCubic V;
    V.directrix = t;
    V.conic_directrix = conic;
    std::set<Pt> ptset;
    for (u32 th = 0; th <= q; ++th) {
        u32 theta = th == q ? INF : th;
        Pt a = line_point_at(Fq, t, theta);
        Pt b = conic.at(Fq, theta);
        std::array<Pt, 2> two{a, b};
        Subspace gen = span(Fq, std::span<const Pt>(two.data(), 2));
        if (gen.proj_dim() != 1) throw std::invalid_argument("degenerate ruling");
        for (const Subspace& other : V.generators)
            if (meet(Fq, gen, other).rank() != 0)
                throw std::invalid_argument("generators not disjoint");
        V.generators.push_back(gen);
        V.gen_params.push_back(theta);
        for (const Pt& p : gen.points(Fq)) ptset.insert(p);
    }
    for (const Pt& p : t.points(Fq)) ptset.insert(p);
    V.points.assign(ptset.begin(), ptset.end());
    if (V.points.size() != static_cast<size_t>(q) * q + 2 * q + 1)
        throw std::invalid_argument("ruling does not sweep a ruled cubic");
    return V;
}

std::vector<QuadForm> ruled_cubic_quadrics(const Frame& fr, const RuledCubic& V) {
    const Gf& F = fr.Fq();
    // generator sweep P(theta, s) = s t(theta) + C(theta); coordinates are
    // bivariate polynomials, s-degree 1, theta-degree <= 2
    // coord[i][sdeg] = poly in theta
    std::array<std::array<std::vector<u32>, 2>, 5> coord;
    for (int i = 0; i < 5; ++i) {
        coord[i][1] = {V.directrix.row(1)[i], V.directrix.row(0)[i]};
        coord[i][0] = V.conic_directrix.coord_poly(i);
    }
    // rows indexed by (s-degree, theta-degree) cells; columns by the 15
    // quadric coefficients
    std::vector<std::vector<u32>> rows(3 * 5, std::vector<u32>(15, 0));
    int col = 0;
    for (int i = 0; i < 5; ++i)
        for (int j = i; j < 5; ++j, ++col) {
            // P_i P_j: s-degree a+b, theta poly product
            for (int a = 0; a <= 1; ++a)
                for (int b = 0; b <= 1; ++b) {
                    auto prod = poly_mul(F, coord[i][a], coord[j][b]);
                    for (size_t d = 0; d < prod.size(); ++d) {
                        int cell = (a + b) * 5 + static_cast<int>(d);
                        rows[cell][col] = F.add(rows[cell][col], prod[d]);
                    }
                }
        }
    std::vector<QuadForm> out;
    for (auto& v : null_space(F, rows)) {
        QuadForm f;
        f.nvars = 5;
        f.c.fill(0);
        for (int i = 0; i < 15; ++i) f.c[i] = v[i];
        out.push_back(f);
    }
    return out;
}

std::vector<Pt> ruled_cubic_points_by_parameterisation(const Frame& fr,
                                                       const RuledCubic& V,
                                                       Level lv) {
    const Gf& F = fr.tower().level(lv);
    std::set<Pt> ptset;
    for (u32 th = 0; th <= F.order(); ++th) {
        u32 theta = th == F.order() ? INF : th;
        Pt a = line_point_at(F, V.directrix, theta);
        Pt b = V.conic_directrix.at(F, theta);
        std::array<Pt, 2> two{a, b};
        Subspace gen = span(F, std::span<const Pt>(two.data(), 2));
        for (const Pt& p : gen.points(F)) ptset.insert(p);
    }
    for (const Pt& p : V.directrix.points(F)) ptset.insert(p);
    return std::vector<Pt>(ptset.begin(), ptset.end());
}

CensusCounts hyperplane_census(const Frame& fr, const RuledCubic& V) {
    const Gf& Fq = fr.Fq();
    u32 q = fr.q();
    CensusCounts cc;
    std::vector<std::set<Pt>> genpts;
    for (const Subspace& g : V.generators) {
        std::set<Pt> s;
        for (const Pt& p : g.points(Fq)) s.insert(p);
        genpts.push_back(std::move(s));
    }
    std::set<Pt> tpts;
    for (const Pt& p : V.directrix.points(Fq)) tpts.insert(p);

    for (const Pt& dual : PointRange(Fq, 4)) {
        auto on = [&](const Pt& p) {
            u32 acc = 0;
            for (int i = 0; i < 5; ++i)
                acc = Fq.add(acc, Fq.mul(dual.c[i], p.c[i]));
            return acc == 0;
        };
        std::vector<Pt> section;
        for (const Pt& p : V.points)
            if (on(p)) section.push_back(p);
        std::set<Pt> sset(section.begin(), section.end());
        bool has_t = true;
        for (const Pt& p : tpts) has_t &= sset.count(p) > 0;
        std::vector<size_t> full;
        for (size_t gi = 0; gi < genpts.size(); ++gi) {
            bool whole = true;
            for (const Pt& p : genpts[gi]) whole &= sset.count(p) > 0;
            if (whole) full.push_back(gi);
        }
        if (has_t) {
            if (full.size() == 0 && section.size() == q + 1) ++cc.directrix_only;
            else if (full.size() == 1 && section.size() == 2 * q + 1)
                ++cc.directrix_one_gen;
            else if (full.size() == 2 && section.size() == 3 * q + 1)
                ++cc.directrix_two_gen;
            else
                throw std::runtime_error("hyperplane section fits no census type");
            continue;
        }
        if (full.size() == 1 && section.size() == 2 * q + 1) {
            // conic plus one generator
            std::vector<Pt> rest;
            for (const Pt& p : section)
                if (!genpts[full[0]].count(p)) rest.push_back(p);
            bool ok = false;
            for (const Pt& extra : genpts[full[0]]) {
                std::vector<Pt> cand = rest;
                cand.push_back(extra);
                Subspace pl = span(Fq, std::span<const Pt>(cand.data(), cand.size()));
                if (pl.proj_dim() != 2) continue;
                bool arc = true;
                for (size_t i = 0; i < cand.size() && arc; ++i)
                    for (size_t j = i + 1; j < cand.size() && arc; ++j)
                        for (size_t k = j + 1; k < cand.size() && arc; ++k) {
                            std::array<Pt, 3> tri{cand[i], cand[j], cand[k]};
                            if (span(Fq, std::span<const Pt>(tri.data(), 3))
                                    .proj_dim() < 2)
                                arc = false;
                        }
                if (arc) {
                    ok = true;
                    break;
                }
            }
            if (!ok)
                throw std::runtime_error("hyperplane section fits no census type");
            ++cc.conic_and_gen;
            continue;
        }
        if (full.empty() && section.size() == q + 1) {
            // twisted cubic section
            Subspace sp =
                span(Fq, std::span<const Pt>(section.data(), section.size()));
            bool ok = sp.proj_dim() == 3;
            int tcount = 0;
            for (const Pt& p : section)
                if (tpts.count(p)) ++tcount;
            ok = ok && tcount == 1;
            for (size_t i = 0; i < section.size() && ok; ++i)
                for (size_t j = i + 1; j < section.size() && ok; ++j)
                    for (size_t k = j + 1; k < section.size() && ok; ++k) {
                        std::array<Pt, 3> tri{section[i], section[j], section[k]};
                        if (span(Fq, std::span<const Pt>(tri.data(), 3)).proj_dim() <
                            2)
                            ok = false;
                        else
                            for (size_t l = k + 1; l < section.size() && ok; ++l) {
                                std::array<Pt, 4> qd{section[i], section[j],
                                                     section[k], section[l]};
                                if (span(Fq, std::span<const Pt>(qd.data(), 4))
                                        .proj_dim() < 3)
                                    ok = false;
                            }
                    }
            if (!ok)
                throw std::runtime_error("hyperplane section fits no census type");
            for (const auto& gp : genpts) {
                int hits = 0;
                for (const Pt& p : gp)
                    if (sset.count(p)) ++hits;
                if (hits != 1) cc.tc_generator_property = false;
            }
            ++cc.twisted_cubic;
            continue;
        }
        throw std::runtime_error("hyperplane section fits no census type");
    }
    return cc;
}

// ------------------------------------------------------------ specialness

Specialness specialness(const Frame& fr, const RatCurve& curve) {
    const Gf& K = fr.Fq2();
    const Gf& L = fr.Fq4();
    Specialness out;
    auto meets_g = curve_meet_subspace(K, curve, fr.g());
    auto meets_gq = curve_meet_subspace(K, curve, fr.gq());
    auto record = [&](const Gf& F, Level lv,
                      const std::vector<std::pair<u32, int>>& meets) {
        for (auto [theta, mult] : meets) {
            Pt p = curve.at(F, theta);
            out.g_points.push_back(p);
            out.g_params.emplace_back(fr.g_alpha_of(p, lv), mult);
        }
    };
    if (curve.degree == 2 || curve.degree == 3) {
        if (meets_g.size() == 1 && meets_gq.size() == 1) {
            out.kind = curve.degree == 2 ? SpecialKind::g_special_conic
                                         : SpecialKind::g_special_twisted_cubic;
            record(K, Level::quad, meets_g);
        }
        return out;
    }
    if (curve.degree != 4) return out;
    int total = 0;
    for (auto [theta, mult] : meets_g) total += mult;
    if (total == 2) {
        out.kind = SpecialKind::g_special_nrc4;
        record(K, Level::quad, meets_g);
        return out;
    }
    auto meets_q4 = curve_meet_subspace(L, curve, fr.g());
    std::vector<std::pair<u32, int>> off_g;
    for (auto [theta, mult] : meets_q4) {
        Pt p = curve.at(L, theta);
        u32 alpha = fr.g_alpha_of(p, Level::quartic);
        if (alpha != INF && !fr.tower().lies_in(alpha, Level::quad))
            off_g.emplace_back(theta, mult);
    }
    if (off_g.size() == 2) {
        out.kind = SpecialKind::gstar_special_nrc4;
        record(L, Level::quartic, off_g);
    }
    return out;
}

bool special_conic_wrt(const Frame& fr, const Pt& P, const Pt& Q,
                       const RatCurve& conic) {
    const Gf& K = fr.Fq2();
    Pt Qq = frobenius_point(K, Q);
    Pt Pq = frobenius_point(K, P);
    std::array<Pt, 2> l1{P, Qq}, l2{Pq, Q};
    Subspace pqq = span(K, std::span<const Pt>(l1.data(), 2));
    Subspace pqQ = span(K, std::span<const Pt>(l2.data(), 2));
    return !curve_meet_subspace(K, conic, pqq).empty() &&
           !curve_meet_subspace(K, conic, pqQ).empty();
}

std::optional<RatCurve> synthesize_special_curve(const Frame& fr, int degree,
                                                 const std::vector<u32>& zrow,
                                                 const std::vector<u32>& g_params,
                                                 Level glevel, DetRng& rng) {
    const FieldTower& tw = fr.tower();
    const Gf& L = tw.level(glevel);
    const u32 q = tw.q();
    const int nc = degree + 1;
    const int ncomp = glevel == Level::quad ? 2 : 4;
    u32 tq = tw.tau_q();
    // F_q-linear conditions (r0 + tau^q r1) . v(theta) = 0 for each theta
    std::vector<std::vector<u32>> rows;
    for (u32 theta : g_params) {
        std::vector<u32> w(2 * nc);
        u32 pw = 1;
        for (int k = 0; k < nc; ++k) {
            w[k] = pw;
            w[nc + k] = L.mul(tq, pw);
            pw = L.mul(pw, theta);
        }
        for (int comp = 0; comp < ncomp; ++comp) {
            std::vector<u32> r(2 * nc);
            for (int j = 0; j < 2 * nc; ++j) r[j] = tw.component(w[j], comp);
            rows.push_back(std::move(r));
        }
    }
    auto basis = null_space(tw.base(), rows);
    if (basis.empty()) return std::nullopt;
    auto pick = [&]() {
        std::vector<u32> v(2 * nc, 0);
        bool nz = false;
        for (auto& bvec : basis) {
            u32 coef = rng.below(q);
            if (coef == 0) continue;
            nz = true;
            for (int j = 0; j < 2 * nc; ++j)
                v[j] = tw.base().add(v[j], tw.base().mul(coef, bvec[j]));
        }
        if (!nz) v = basis[0];
        return v;
    };
    RatCurve curve;
    curve.degree = degree;
    curve.space_dim = 4;
    for (auto& row : curve.m) row.fill(0);
    auto xpair = pick();
    auto ypair = pick();
    for (int k = 0; k < nc; ++k) {
        curve.m[0][k] = xpair[k];
        curve.m[1][k] = xpair[nc + k];
        curve.m[2][k] = ypair[k];
        curve.m[3][k] = ypair[nc + k];
        curve.m[4][k] = zrow[k];
    }
    std::vector<std::vector<u32>> chk(5, std::vector<u32>(nc));
    for (int r = 0; r < 5; ++r)
        for (int k = 0; k < nc; ++k) chk[r][k] = curve.m[r][k];
    if (rref(tw.base(), chk) != nc) return std::nullopt;
    for (u32 theta : g_params) {
        Pt p = curve.at(L, theta);
        if (!fr.g().contains(L, p)) return std::nullopt;
    }
    return curve;
}

// ------------------------------------------------------------ reguli

Regulus regulus_through(const Gf& F, const Subspace& l1, const Subspace& l2,
                        const Subspace& l3) {
    Regulus R;
    R.lines = regulus_lines(F, l1, l2, l3, &R.opposite);
    return R;
}

CirclePartition circle_partition(const Frame& fr, u32 deltaP, u32 deltaQ) {
    const Gf& K = fr.Fq2();
    const Gf& Fq = fr.Fq();
    u32 q = fr.q(), q2 = q * q;
    if (deltaP == deltaQ) throw std::invalid_argument("need distinct points");
    u32 mid = 0;
    while (mid == deltaP || mid == deltaQ) ++mid;
    Mob mob = mob_through(K, deltaP, mid, deltaQ);  // P -> 0, Q -> INF
    std::map<u32, std::vector<u32>> cells;
    for (u32 delta = 0; delta <= q2; ++delta) {
        u32 d = delta == q2 ? INF : delta;
        if (d == deltaP || d == deltaQ) continue;
        u32 x = mob_apply(K, mob, d);
        u32 nrm = K.mul(x, K.frob(x));  // the norm lands in F_q
        if (nrm == 0 || nrm >= q) throw std::logic_error("norm escaped F_q*");
        cells[nrm].push_back(d);
    }
    CirclePartition out;
    if (cells.size() != q - 1) throw std::logic_error("wrong cell count");
    for (auto& [nrm, ds] : cells) {
        if (ds.size() != q + 1) throw std::logic_error("wrong cell size");
        Regulus R = regulus_through(Fq, fr.spread_line(ds[0]),
                                    fr.spread_line(ds[1]), fr.spread_line(ds[2]));
        std::vector<Subspace> expect;
        for (u32 d : ds) expect.push_back(fr.spread_line(d));
        std::sort(expect.begin(), expect.end());
        if (expect != R.lines)
            throw std::logic_error("cell is not a regulus of the spread");
        out.cells.push_back(ds);
        out.reguli.push_back(R);
    }
    out.swapped_spread.push_back(fr.spread_line(deltaP));
    out.swapped_spread.push_back(fr.spread_line(deltaQ));
    for (const Regulus& R : out.reguli)
        for (const Subspace& l : R.opposite) out.swapped_spread.push_back(l);
    if (!spread_is_partition(Fq, out.swapped_spread, fr.sigma_inf()))
        throw std::logic_error("opposite swap is not a spread");
    Pt P = fr.g_point(deltaP), Q = fr.g_point(deltaQ);
    std::array<Pt, 2> l1{P, frobenius_point(K, Q)};
    std::array<Pt, 2> l2{frobenius_point(K, P), Q};
    Subspace pqq = span(K, std::span<const Pt>(l1.data(), 2));
    Subspace pqQ = span(K, std::span<const Pt>(l2.data(), 2));
    for (const Subspace& l : out.swapped_spread)
        if (meet(K, l, pqq).proj_dim() != 0 || meet(K, l, pqQ).proj_dim() != 0)
            throw std::logic_error("swapped spread misses the new transversals");
    return out;
}

// ------------------------------------------------------------ Baer pencils

BaerPencil ell_inf_pencil_of_3space(const Frame& fr, const Subspace& Pi) {
    const Gf& Fq = fr.Fq();
    const Gf& K = fr.Fq2();
    u32 q = fr.q();
    if (Pi.proj_dim() != 3 || Pi == fr.sigma_inf())
        throw std::invalid_argument("need a 3-space distinct from Sigma_inf");
    BaerPencil out;
    std::optional<u32> delta;
    for (u32 d = 0; d <= q * q; ++d) {
        u32 dd = d == q * q ? INF : d;
        if (Pi.contains(Fq, fr.spread_line(dd))) {
            if (delta) throw std::logic_error("two spread lines in a 3-space");
            delta = dd;
        }
    }
    if (!delta) throw std::logic_error("no spread line in the 3-space");
    out.vertex = fr.linf_point(*delta);
    for (const Pt& p : Pi.points(Fq))
        if (p.c[4] != 0) out.affine_points.push_back(fr.bb_unmap(p));
    std::sort(out.affine_points.begin(), out.affine_points.end());
    if (out.affine_points.size() != static_cast<size_t>(q) * q * q)
        throw std::logic_error("pencil affine point count off");
    std::set<Subspace> lineset;
    for (const Pt& A : out.affine_points) {
        std::array<Pt, 2> two{out.vertex, A};
        lineset.insert(span(K, std::span<const Pt>(two.data(), 2)));
    }
    lineset.insert(fr.ell_inf());
    if (lineset.size() != q + 1) throw std::logic_error("cone line count off");
    out.lines.assign(lineset.begin(), lineset.end());
    out.ell_inf_pencil = true;
    // base: section by the first line not through the vertex
    for (const Pt& dual : PointRange(K, 2)) {
        u32 dv = 0;
        for (int i = 0; i < 3; ++i) dv = K.add(dv, K.mul(dual.c[i], out.vertex.c[i]));
        if (dv == 0) continue;
        std::array<u32, 3> h{dual.c[0], dual.c[1], dual.c[2]};
        Subspace ell = Subspace::hyperplane(K, 2, std::span<const u32>(h.data(), 3));
        for (const Subspace& cone : out.lines) {
            Subspace pt = meet(K, ell, cone);
            if (pt.proj_dim() != 0) throw std::logic_error("cone meet failure");
            out.base.push_back(
                make_point(K, std::span<const u32>(pt.row(0).data(), 3)));
        }
        std::sort(out.base.begin(), out.base.end());
        std::vector<u32> params;
        for (const Pt& b : out.base) params.push_back(line_param_of(K, ell, b));
        if (!params_in_baer_subline(
                K, q, std::span<const u32>(params.data(), params.size())))
            throw std::logic_error("pencil base is not a Baer subline");
        break;
    }
    return out;
}

Subspace pencil_to_3space(const Frame& fr, const BaerPencil& K) {
    const Gf& Fq = fr.Fq();
    u32 delta = fr.linf_delta_of(K.vertex);
    Subspace acc = fr.spread_line(delta);
    for (const Pt& A : K.affine_points) {
        if (acc.proj_dim() >= 3) break;
        acc = span_of(Fq, acc, fr.bb_map(A));
    }
    if (acc.proj_dim() != 3)
        throw std::logic_error("pencil does not span a 3-space");
    for (const Pt& A : K.affine_points)
        if (!acc.contains(Fq, fr.bb_map(A)))
            throw std::logic_error("pencil affine points escape the 3-space");
    return acc;
}

// ------------------------------------------------------------ partitions

namespace {

QuadForm qf_chart_transport(const Gf& K, const QuadForm& f,
                            const std::vector<std::vector<u32>>& chart_inv) {
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
                    u32 add = K.mul(cab, K.mul(chart_inv[a][i], chart_inv[b][j]));
                    int pos = qf_index(std::min(i, j), std::max(i, j), 3);
                    out.c[pos] = K.add(out.c[pos], add);
                }
        }
    return out;
}

}  // namespace

std::vector<TangentPartitionCell> partition_tangent_subplane(
    const Frame& fr, const BaerSubplane& B, std::span<const Pt> m_line,
    const Pt& Pbar) {
    const Gf& Fq = fr.Fq();
    const Gf& K = fr.Fq2();
    u32 q = fr.q();
    if (!B.tangent) throw std::invalid_argument("subplane not tangent");
    if (Pbar == B.tangent_point || Pbar.c[2] != 0)
        throw std::invalid_argument("vertex must be on l_inf away from T");
    std::vector<Pt> imgs;
    bool has_T = false;
    for (const Pt& p : m_line) {
        if (p == B.tangent_point) {
            has_T = true;
            continue;
        }
        imgs.push_back(fr.bb_map(p));
    }
    if (!has_T || imgs.size() != q)
        throw std::invalid_argument("m must be a line of B through the tangent point");
    Subspace mimg = span(Fq, std::span<const Pt>(imgs.data(), imgs.size()));
    if (mimg.proj_dim() != 1) throw std::invalid_argument("m image is not a line");
    Pt X{};
    bool foundX = false;
    for (const Pt& p : mimg.points(Fq))
        if (p.c[4] == 0) {
            X = p;
            foundX = true;
        }
    u32 deltaT = fr.linf_delta_of(B.tangent_point);
    if (!foundX || !fr.spread_line(deltaT).contains(Fq, X))
        throw std::logic_error("m image misses the directrix");
    u32 deltaP = fr.linf_delta_of(Pbar);
    Subspace alpha = span_of(Fq, fr.spread_line(deltaP), X);
    if (alpha.proj_dim() != 2) throw std::logic_error("alpha is not a plane");
    auto duals = alpha.dual_forms(Fq);
    if (duals.size() != 2) throw std::logic_error("alpha dual rank off");
    std::vector<std::array<u32, 5>> hyp;
    for (const Pt& combo : PointRange(Fq, 1)) {
        std::array<u32, 5> h{};
        for (int i = 0; i < 5; ++i)
            h[i] = Fq.add(Fq.mul(combo.c[0], duals[0][i]),
                          Fq.mul(combo.c[1], duals[1][i]));
        bool is_sigma = true;
        for (int i = 0; i < 4; ++i) is_sigma &= h[i] == 0;
        if (!is_sigma) hyp.push_back(h);
    }
    if (hyp.size() != q) throw std::logic_error("hyperplane pencil size off");

    std::vector<TangentPartitionCell> cells;
    std::set<Pt> covered;
    for (const auto& h : hyp) {
        TangentPartitionCell cell;
        for (const Pt& b : B.points) {
            if (b.c[2] == 0) continue;
            Pt img = fr.bb_map(b);
            u32 acc = 0;
            for (int i = 0; i < 5; ++i) acc = Fq.add(acc, Fq.mul(h[i], img.c[i]));
            if (acc == 0) cell.affine_points.push_back(b);
        }
        std::sort(cell.affine_points.begin(), cell.affine_points.end());
        for (const Pt& p : cell.affine_points) {
            if (covered.count(p)) throw std::logic_error("cells overlap");
            covered.insert(p);
        }
        std::vector<std::array<u32, 3>> coords;
        coords.push_back(chart_coords(fr, B, B.tangent_point));
        for (const Pt& p : cell.affine_points)
            coords.push_back(chart_coords(fr, B, p));
        std::vector<std::vector<u32>> rows;
        for (auto& xyz : coords) {
            std::vector<u32> r(6, 0);
            int idx = 0;
            for (int i = 0; i < 3; ++i)
                for (int j = i; j < 3; ++j, ++idx) r[idx] = Fq.mul(xyz[i], xyz[j]);
            rows.push_back(std::move(r));
        }
        auto ns = null_space(Fq, rows);
        if (ns.empty()) throw std::logic_error("cell admits no conic form");
        std::set<std::array<u32, 3>> want(coords.begin(), coords.end());
        std::optional<QuadForm> fitted;
        for (const Pt& combo : PointRange(Fq, static_cast<int>(ns.size()) - 1)) {
            QuadForm f;
            f.nvars = 3;
            f.c.fill(0);
            for (size_t bi = 0; bi < ns.size(); ++bi)
                for (int i = 0; i < 6; ++i)
                    f.c[i] = Fq.add(f.c[i], Fq.mul(combo.c[bi], ns[bi][i]));
            if (f.is_zero()) continue;
            std::set<std::array<u32, 3>> zs;
            for (const Pt& x : PointRange(Fq, 2)) {
                std::array<u32, 3> xv{x.c[0], x.c[1], x.c[2]};
                if (f.eval(Fq, std::span<const u32>(xv.data(), 3)) == 0)
                    zs.insert(xv);
            }
            if (zs == want) {
                fitted = f;
                break;
            }
        }
        if (!fitted) throw std::logic_error("no form matches the cell");
        cell.degenerate = !conic_form_nondegenerate(Fq, *fitted);
        if (!cell.degenerate) {
            QuadForm big = qf_chart_transport(K, *fitted, B.chart_inv);
            cell.extension = make_conic(K, big);
        }
        cells.push_back(std::move(cell));
    }
    if (covered.size() != static_cast<size_t>(q) * q + q)
        throw std::logic_error("cells do not cover the affine points");
    return cells;
}

}  // namespace bbv
