#include "bbv/projective.hpp"

#include <algorithm>
#include <stdexcept>

namespace bbv {

Pt make_point(const Gf& F, std::span<const u32> coords) {
    if (coords.size() < 2 || coords.size() > 5)
        throw std::invalid_argument("point needs 2..5 coordinates");
    Pt p;
    p.n = static_cast<int>(coords.size()) - 1;
    int lead = -1;
    for (size_t i = 0; i < coords.size(); ++i) {
        if (coords[i] >= F.order())
            throw std::invalid_argument("coordinate code out of field range");
        p.c[i] = coords[i];
        if (lead < 0 && coords[i]) lead = static_cast<int>(i);
    }
    if (lead < 0) throw std::invalid_argument("zero vector is not a point");
    u32 s = F.inv(p.c[lead]);
    for (size_t i = 0; i < coords.size(); ++i) p.c[i] = F.mul(p.c[i], s);
    return p;
}

Pt make_point(const Gf& F, std::initializer_list<u32> coords) {
    std::vector<u32> v(coords);
    return make_point(F, std::span<const u32>(v));
}

Pt frobenius_point(const Gf& F, const Pt& p, u32 power) {
    std::array<u32, 5> c = p.c;
    for (int i = 0; i <= p.n; ++i) c[i] = F.frob_pow(c[i], power);
    return make_point(F, std::span<const u32>(c.data(), p.n + 1));
}

bool point_in_subfield(const Pt& p, u32 suborder) {
    for (int i = 0; i <= p.n; ++i)
        if (p.c[i] >= suborder) return false;
    return true;
}

namespace {

// RREF on rows of length n+1; returns rank.
int rref5(const Gf& F, std::vector<std::array<u32, 5>>& rows, int width) {
    int rank = 0;
    for (int col = 0; col < width && rank < static_cast<int>(rows.size());
         ++col) {
        int piv = -1;
        for (int r = rank; r < static_cast<int>(rows.size()); ++r)
            if (rows[r][col]) {
                piv = r;
                break;
            }
        if (piv < 0) continue;
        std::swap(rows[rank], rows[piv]);
        u32 s = F.inv(rows[rank][col]);
        for (int j = 0; j < width; ++j) rows[rank][j] = F.mul(rows[rank][j], s);
        for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
            if (r == rank || rows[r][col] == 0) continue;
            u32 f = rows[r][col];
            for (int j = 0; j < width; ++j)
                rows[r][j] = F.sub(rows[r][j], F.mul(f, rows[rank][j]));
        }
        ++rank;
    }
    return rank;
}

}  // namespace

Subspace Subspace::empty(int n) {
    Subspace s;
    s.n_ = n;
    s.rank_ = 0;
    return s;
}

Subspace Subspace::from_rows(const Gf& F, int n,
                             std::span<const std::array<u32, 5>> rows) {
    std::vector<std::array<u32, 5>> work(rows.begin(), rows.end());
    int rank = rref5(F, work, n + 1);
    Subspace s;
    s.n_ = n;
    s.rank_ = rank;
    for (int i = 0; i < rank; ++i) s.rows_[i] = work[i];
    return s;
}

Subspace Subspace::from_points(const Gf& F, std::span<const Pt> pts) {
    if (pts.empty()) throw std::invalid_argument("span of nothing");
    std::vector<std::array<u32, 5>> rows;
    for (const Pt& p : pts) {
        if (p.n != pts[0].n) throw std::invalid_argument("mixed dimensions");
        rows.push_back(p.c);
    }
    return from_rows(F, pts[0].n, rows);
}

Subspace Subspace::hyperplane(const Gf& F, int n, std::span<const u32> h) {
    std::vector<std::vector<u32>> m(1, std::vector<u32>(h.begin(), h.end()));
    auto ns = null_space(F, m);
    std::vector<std::array<u32, 5>> rows;
    for (auto& v : ns) {
        std::array<u32, 5> r{};
        std::copy(v.begin(), v.end(), r.begin());
        rows.push_back(r);
    }
    return from_rows(F, n, rows);
}

bool Subspace::contains(const Gf& F, const Pt& p) const {
    // reduce p against the RREF basis
    std::array<u32, 5> v = p.c;
    for (int r = 0; r < rank_; ++r) {
        int lead = -1;
        for (int j = 0; j <= n_; ++j)
            if (rows_[r][j]) {
                lead = j;
                break;
            }
        if (lead < 0 || v[lead] == 0) continue;
        u32 f = v[lead];
        for (int j = 0; j <= n_; ++j) v[j] = F.sub(v[j], F.mul(f, rows_[r][j]));
    }
    for (int j = 0; j <= n_; ++j)
        if (v[j]) return false;
    return true;
}

bool Subspace::contains(const Gf& F, const Subspace& s) const {
    for (int i = 0; i < s.rank_; ++i) {
        Pt p;
        p.n = n_;
        p.c = s.rows_[i];
        bool nonzero = false;
        for (int j = 0; j <= n_; ++j) nonzero |= p.c[j] != 0;
        if (nonzero && !contains(F, p)) return false;
    }
    return true;
}

std::vector<Pt> Subspace::points(const Gf& F) const {
    std::vector<Pt> out;
    if (rank_ == 0) return out;
    u64 cnt = pg_num_points(F.order(), rank_ - 1);
    out.reserve(cnt);
    for (u64 k = 0; k < cnt; ++k) {
        Pt coef = pg_point_at(F, rank_ - 1, k);
        std::array<u32, 5> v{};
        for (int r = 0; r < rank_; ++r) {
            if (!coef.c[r]) continue;
            for (int j = 0; j <= n_; ++j)
                v[j] = F.add(v[j], F.mul(coef.c[r], rows_[r][j]));
        }
        out.push_back(make_point(F, std::span<const u32>(v.data(), n_ + 1)));
    }
    return out;
}

u64 Subspace::num_points(const Gf& F) const {
    return rank_ == 0 ? 0 : pg_num_points(F.order(), rank_ - 1);
}

std::vector<std::array<u32, 5>> Subspace::dual_forms(const Gf& F) const {
    std::vector<std::vector<u32>> m;
    for (int i = 0; i < rank_; ++i)
        m.emplace_back(rows_[i].begin(), rows_[i].begin() + n_ + 1);
    std::vector<std::array<u32, 5>> out;
    if (m.empty()) {
        for (int i = 0; i <= n_; ++i) {
            std::array<u32, 5> r{};
            r[i] = 1;
            out.push_back(r);
        }
        return out;
    }
    for (auto& v : null_space(F, m)) {
        std::array<u32, 5> r{};
        std::copy(v.begin(), v.end(), r.begin());
        out.push_back(r);
    }
    return out;
}

Subspace span(const Gf& F, std::span<const Subspace> parts) {
    if (parts.empty()) throw std::invalid_argument("span of nothing");
    std::vector<std::array<u32, 5>> rows;
    for (const Subspace& s : parts) {
        if (s.space_dim() != parts[0].space_dim())
            throw std::invalid_argument("mixed dimensions");
        for (int i = 0; i < s.rank(); ++i) rows.push_back(s.row(i));
    }
    return Subspace::from_rows(F, parts[0].space_dim(), rows);
}

Subspace span(const Gf& F, std::span<const Pt> pts) {
    return Subspace::from_points(F, pts);
}

Subspace span_of(const Gf& F, const Subspace& a, const Pt& p) {
    std::vector<std::array<u32, 5>> rows;
    for (int i = 0; i < a.rank(); ++i) rows.push_back(a.row(i));
    rows.push_back(p.c);
    return Subspace::from_rows(F, a.space_dim(), rows);
}

Subspace span_of(const Gf& F, const Subspace& a, const Subspace& b) {
    std::array<Subspace, 2> parts{a, b};
    return span(F, parts);
}

Subspace meet(const Gf& F, const Subspace& a, const Subspace& b) {
    if (a.space_dim() != b.space_dim())
        throw std::invalid_argument("mixed dimensions");
    // dual(span(dual a, dual b))
    std::vector<std::vector<u32>> forms;
    for (auto& f : a.dual_forms(F))
        forms.emplace_back(f.begin(), f.begin() + a.space_dim() + 1);
    for (auto& f : b.dual_forms(F))
        forms.emplace_back(f.begin(), f.begin() + a.space_dim() + 1);
    auto ns = null_space(F, forms);
    std::vector<std::array<u32, 5>> rows;
    for (auto& v : ns) {
        std::array<u32, 5> r{};
        std::copy(v.begin(), v.end(), r.begin());
        rows.push_back(r);
    }
    return Subspace::from_rows(F, a.space_dim(), rows);
}

u64 pg_num_points(u64 s, int n) {
    u64 total = 0, power = 1;
    for (int i = 0; i <= n; ++i) {
        if (total > (1ull << 62) || power > (1ull << 62))
            throw std::invalid_argument("enumeration budget exceeded");
        total += power;
        power *= s;
    }
    return total;
}

Pt pg_point_at(const Gf& F, int n, u64 index) {
    u64 s = F.order();
    // points grouped by leading position: lead=0 has s^n points, etc.
    int lead = 0;
    u64 block = 1;
    for (int i = 0; i < n; ++i) block *= s;  // s^n
    while (index >= block) {
        index -= block;
        block /= s;
        ++lead;
    }
    Pt p;
    p.n = n;
    p.c.fill(0);
    p.c[lead] = 1;
    // remaining coordinates: index written base s, last coordinate fastest
    for (int j = n; j > lead; --j) {
        p.c[j] = static_cast<u32>(index % s);
        index /= s;
    }
    return p;
}

int rref(const Gf& F, std::vector<std::vector<u32>>& m) {
    if (m.empty()) return 0;
    int rows = static_cast<int>(m.size());
    int cols = static_cast<int>(m[0].size());
    int rank = 0;
    for (int col = 0; col < cols && rank < rows; ++col) {
        int piv = -1;
        for (int r = rank; r < rows; ++r)
            if (m[r][col]) {
                piv = r;
                break;
            }
        if (piv < 0) continue;
        std::swap(m[rank], m[piv]);
        u32 sc = F.inv(m[rank][col]);
        for (int j = 0; j < cols; ++j) m[rank][j] = F.mul(m[rank][j], sc);
        for (int r = 0; r < rows; ++r) {
            if (r == rank || m[r][col] == 0) continue;
            u32 f = m[r][col];
            for (int j = 0; j < cols; ++j)
                m[r][j] = F.sub(m[r][j], F.mul(f, m[rank][j]));
        }
        ++rank;
    }
    return rank;
}

std::vector<std::vector<u32>> null_space(const Gf& F,
                                         const std::vector<std::vector<u32>>& m_in) {
    std::vector<std::vector<u32>> m = m_in;
    int cols = m.empty() ? 0 : static_cast<int>(m[0].size());
    int rank = rref(F, m);
    // identify pivot columns
    std::vector<int> pivot_col(rank, -1);
    std::vector<bool> is_pivot(cols, false);
    for (int r = 0; r < rank; ++r)
        for (int j = 0; j < cols; ++j)
            if (m[r][j]) {
                pivot_col[r] = j;
                is_pivot[j] = true;
                break;
            }
    std::vector<std::vector<u32>> basis;
    for (int free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        std::vector<u32> v(cols, 0);
        v[free] = 1;
        for (int r = 0; r < rank; ++r)
            v[pivot_col[r]] = F.neg(m[r][free]);
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<std::vector<u32>> solve_linear(const Gf& F,
                                             std::vector<std::vector<u32>> m,
                                             std::vector<u32> rhs) {
    int rows = static_cast<int>(m.size());
    int cols = m.empty() ? 0 : static_cast<int>(m[0].size());
    for (int r = 0; r < rows; ++r) m[r].push_back(rhs[r]);
    int rank = rref(F, m);
    std::vector<u32> x(cols, 0);
    for (int r = 0; r < rank; ++r) {
        int lead = -1;
        for (int j = 0; j <= cols; ++j)
            if (m[r][j]) {
                lead = j;
                break;
            }
        if (lead == cols) return std::nullopt;  // 0 = nonzero
        if (lead >= 0) x[lead] = m[r][cols];
    }
    return x;
}

u32 det2(const Gf& F, u32 a, u32 b, u32 c, u32 d) {
    return F.sub(F.mul(a, d), F.mul(b, c));
}

bool invert_matrix(const Gf& F, const std::vector<std::vector<u32>>& m,
                   std::vector<std::vector<u32>>& out) {
    int n = static_cast<int>(m.size());
    std::vector<std::vector<u32>> work(n, std::vector<u32>(2 * n, 0));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) work[i][j] = m[i][j];
        work[i][n + i] = 1;
    }
    rref(F, work);
    // m is invertible iff the left block reduced to the identity
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (work[i][j] != (i == j ? 1u : 0u)) return false;
    out.assign(n, std::vector<u32>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out[i][j] = work[i][n + j];
    return true;
}

std::vector<u32> mat_vec(const Gf& F, const std::vector<std::vector<u32>>& m,
                         std::span<const u32> v) {
    std::vector<u32> out(m.size(), 0);
    for (size_t i = 0; i < m.size(); ++i)
        for (size_t j = 0; j < m[i].size(); ++j)
            out[i] = F.add(out[i], F.mul(m[i][j], v[j]));
    return out;
}

}  // namespace bbv
