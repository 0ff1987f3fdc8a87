// Points, subspaces, incidence, meet/join and enumeration in PG(n, F)
// for n <= 4.  All arithmetic is exact over a Gf level; points are
// normalised (first nonzero coordinate 1) and subspaces carried in reduced
// row echelon form, so equality of objects is equality of representations.

#ifndef BBV_PROJECTIVE_HPP
#define BBV_PROJECTIVE_HPP

#include <array>
#include <compare>
#include <span>
#include <vector>

#include "bbv/gf.hpp"

namespace bbv {

struct Pt {
    std::array<u32, 5> c{};  // coordinates, positions >= n+1 are zero
    int n = 0;               // projective dimension of the ambient space

    auto operator<=>(const Pt&) const = default;
};

// Normalised point; throws on the zero vector.
Pt make_point(const Gf& F, std::span<const u32> coords);
Pt make_point(const Gf& F, std::initializer_list<u32> coords);

Pt frobenius_point(const Gf& F, const Pt& p, u32 power = 1);
// True if every coordinate of the normalised point lies in the subfield of
// the given order (codes below `suborder`).
bool point_in_subfield(const Pt& p, u32 suborder);

class Subspace {
public:
    Subspace() = default;  // the empty subspace of undetermined ambient
    static Subspace empty(int n);
    // Rows are spanning vectors (not necessarily independent).
    static Subspace from_rows(const Gf& F, int n,
                              std::span<const std::array<u32, 5>> rows);
    static Subspace from_points(const Gf& F, std::span<const Pt> pts);
    // Solution space of one linear form h.x = 0.
    static Subspace hyperplane(const Gf& F, int n, std::span<const u32> h);

    int space_dim() const { return n_; }
    int rank() const { return rank_; }
    int proj_dim() const { return rank_ - 1; }
    const std::array<u32, 5>& row(int i) const { return rows_[i]; }

    bool contains(const Gf& F, const Pt& p) const;
    bool contains(const Gf& F, const Subspace& s) const;

    // All points, in the canonical order induced by coefficient enumeration.
    std::vector<Pt> points(const Gf& F) const;
    u64 num_points(const Gf& F) const;

    // Basis of the space of linear forms vanishing on this subspace.
    std::vector<std::array<u32, 5>> dual_forms(const Gf& F) const;

    // Same basis read at a higher tower level (codes embed unchanged).
    const Subspace& as_level() const { return *this; }

    auto operator<=>(const Subspace&) const = default;

private:
    std::array<std::array<u32, 5>, 5> rows_{};
    int n_ = 0;
    int rank_ = 0;
    friend Subspace span_impl(const Gf&, int,
                              std::vector<std::array<u32, 5>>&);
};

Subspace span(const Gf& F, std::span<const Subspace> parts);
Subspace span(const Gf& F, std::span<const Pt> pts);
Subspace span_of(const Gf& F, const Subspace& a, const Pt& p);
Subspace span_of(const Gf& F, const Subspace& a, const Subspace& b);
Subspace meet(const Gf& F, const Subspace& a, const Subspace& b);

// Deterministic enumeration of PG(n, F): lexicographic on normalised
// coordinate vectors.  Restartable via the index-based accessor.
u64 pg_num_points(u64 field_order, int n);
Pt pg_point_at(const Gf& F, int n, u64 index);

class PointRange {
public:
    PointRange(const Gf& F, int n) : F_(F), n_(n), count_(pg_num_points(F.order(), n)) {}
    struct iterator {
        const PointRange* r;
        u64 i;
        Pt operator*() const { return pg_point_at(r->F_, r->n_, i); }
        iterator& operator++() { ++i; return *this; }
        bool operator!=(const iterator& o) const { return i != o.i; }
    };
    iterator begin() const { return {this, 0}; }
    iterator end() const { return {this, count_}; }
    u64 size() const { return count_; }

private:
    const Gf& F_;
    int n_;
    u64 count_;
};

// Gaussian elimination helpers shared by the variety code.
// Returns the rank; `m` is reduced in place to RREF.
int rref(const Gf& F, std::vector<std::vector<u32>>& m);
// Null space basis (as rows) of the matrix m (given as rows).
std::vector<std::vector<u32>> null_space(const Gf& F,
                                         const std::vector<std::vector<u32>>& m);
// Solve m.x = rhs; empty optional if inconsistent.  m need not be square.
std::optional<std::vector<u32>> solve_linear(const Gf& F,
                                             std::vector<std::vector<u32>> m,
                                             std::vector<u32> rhs);

// 2x2 / 3x3 utilities over a level.
u32 det2(const Gf& F, u32 a, u32 b, u32 c, u32 d);
bool invert_matrix(const Gf& F, const std::vector<std::vector<u32>>& m,
                   std::vector<std::vector<u32>>& out);
std::vector<u32> mat_vec(const Gf& F, const std::vector<std::vector<u32>>& m,
                         std::span<const u32> v);

}  // namespace bbv

#endif
