// Conics and quadric pencils, Baer sublines/subplanes, ruled cubic surfaces,
// twisted cubics and 4-dimensional normal rational curves, reguli and the
// hyperbolic congruence, together with the specialness classifiers.

#ifndef BBV_VARIETIES_HPP
#define BBV_VARIETIES_HPP

#include <optional>

#include "bbv/bruckbose.hpp"

namespace bbv {

// ------------------------------------------------------------ quadratic forms

// Homogeneous quadratic form in `nvars` variables, upper-triangular
// coefficients (index via qf_index).  Stored coefficient codes live at
// whatever level the evaluating Gf supplies; extension to a higher level is
// the same coefficient array.
struct QuadForm {
    int nvars = 5;
    std::array<u32, 15> c{};

    u32 eval(const Gf& F, std::span<const u32> x) const;
    bool is_zero() const;
    auto operator<=>(const QuadForm&) const = default;
};

int qf_index(int i, int j, int nvars);
QuadForm qf_scale(const Gf& F, QuadForm f, u32 s);
QuadForm qf_add(const Gf& F, QuadForm f, const QuadForm& g);

// Is the ternary form a nondegenerate conic?  (kernel criterion, valid in
// odd and even characteristic)
bool conic_form_nondegenerate(const Gf& F, const QuadForm& f);

// The unique form (up to scale) vanishing on the given plane points; empty
// when none or more than one.  Points are coordinates in the 3-variable
// chart the caller fixed.
std::optional<QuadForm> conic_form_through(const Gf& F,
                                           std::span<const std::array<u32, 3>> pts);

// ------------------------------------------------------------ conics in PG(2)

struct Conic {
    QuadForm form;         // 3 vars
    std::vector<Pt> pts;   // s+1 points, canonical order
};

// Validates nondegeneracy (kernel criterion, point count, no 3 collinear).
Conic make_conic(const Gf& F, const QuadForm& form);
Conic conic_through(const Gf& F, std::span<const Pt> five);

// ------------------------------------------------------------ moebius helpers

using Mob = std::array<std::array<u32, 2>, 2>;

std::pair<u32, u32> param_vec(u32 s);        // s or INF -> projective pair
u32 param_of_vec(const Gf& F, u32 u, u32 v); // pair -> s or INF
u32 mob_apply(const Gf& F, const Mob& m, u32 s);
Mob mob_inverse(const Gf& F, const Mob& m);
// Moebius map sending s1, s2, s3 to 0, 1, INF.
Mob mob_through(const Gf& F, u32 s1, u32 s2, u32 s3);
u32 cross_ratio(const Gf& F, u32 a, u32 b, u32 c, u32 d);
// Do all parameters lie in one Baer subline of the parameter line PG(1,s)?
bool params_in_baer_subline(const Gf& F, u32 suborder, std::span<const u32> params);

// Line parameterisation: point(theta) = theta row0 + row1, theta = INF
// giving row0; the inverse reads the pivot coordinates.
Pt line_point_at(const Gf& F, const Subspace& line, u32 theta);
u32 line_param_of(const Gf& F, const Subspace& line, const Pt& p);
// The q+1 parameters of the Baer subline through three parameters.
std::vector<u32> baer_subline_params(const Gf& F, u32 suborder, u32 s1, u32 s2,
                                     u32 s3);
// Image of s under the involution fixing the subline through s1,s2,s3.
u32 baer_involution(const Gf& F, u32 s1, u32 s2, u32 s3, u32 s);

// ------------------------------------------------------------ rational curves

// Parameterisation-first rational curve of degree n in PG(m, .): the point
// at theta is M . (1, theta, ..., theta^n), theta = INF giving the leading
// column.  Rows m[r], columns are theta powers.
struct RatCurve {
    int degree = 2;
    int space_dim = 4;
    std::array<std::array<u32, 5>, 5> m{};

    Pt at(const Gf& F, u32 theta) const;
    std::vector<Pt> points(const Gf& F) const;  // order: theta = 0,1,...,INF
    std::vector<u32> coord_poly(int row) const; // degree+1 coefficients
    // Exhaustive parameter lookup; INF considered; throws if absent.
    u32 param_of(const Gf& F, const Pt& p) const;
    Subspace ambient_span(const Gf& F) const;
};

// The unique normal rational curve of degree k-3 through k points in
// general position (k = 5, 6, 7 for conic / twisted cubic / NRC4).
// Throws std::invalid_argument on degenerate position.
RatCurve nrc_through(const Gf& F, std::span<const Pt> pts);

// The unique conic through >= 4 points with prescribed parameters
// (projectively consistent data required; verified on the remaining points).
RatCurve conic_from_params(const Gf& F,
                           std::span<const std::pair<u32, Pt>> entries);

// theta-roots (with multiplicity, INF included) of the intersection of the
// curve with a subspace, over the field F (which may be an extension of the
// curve's field of definition).
std::vector<std::pair<u32, int>> curve_meet_subspace(const Gf& F,
                                                     const RatCurve& curve,
                                                     const Subspace& sub);
// Composition Q(N(theta)) as a polynomial in theta over F.
std::vector<u32> compose_quadform_with_curve(const Gf& F, const QuadForm& qf,
                                             const RatCurve& curve);
bool curve_in_quadric(const Gf& F, const RatCurve& curve, const QuadForm& qf);

// Basis of the space of quadratic forms (5 vars) vanishing on all points.
std::vector<QuadForm> quadrics_through(const Gf& F, std::span<const Pt> pts);

// Basis of the quadrics vanishing identically on the parameterised surface
// (the generator sweep s.t(theta) + C(theta)), not merely on its rational
// points; this is the defining system and is 3-dimensional for every q.
struct RuledCubic;
std::vector<QuadForm> ruled_cubic_quadrics(const Frame& fr, const RuledCubic& V);

// ------------------------------------------------------------ quadric pencils

struct Pencil {
    QuadForm qinf, q0;  // 5 vars, coefficients over F_q
    QuadForm member(const Gf& F, u32 t) const;  // t INF -> qinf
};

// Split f(x,y,z) = 0 over the basis {1, tau} after the Bruck-Bose
// substitution x = x0 + x1 tau, y = y0 + y1 tau.
Pencil conic_to_pencil(const Frame& fr, const Conic& O);

// Points of g (level quad) or g-star (level quartic) on the extended
// pencil member Q_t.
std::vector<Pt> pencil_member_on_g(const Frame& fr, const Pencil& pe, u32 t,
                                   Level lv);

// The exact intersection of the extended base locus with the extended
// hyperplane at infinity, decomposed into lines.  Throws std::runtime_error
// if the locus is not a union of lines.
struct InfinityLocus {
    std::vector<Pt> points;
    std::vector<Subspace> lines;
};
InfinityLocus locus_at_infinity(const Frame& fr, const Pencil& pe, Level lv);

// All common zeros of two quadrics inside the hyperplane z = 0 at the given
// level, by plane slicing (no full space scan).
std::vector<Pt> quadric_pair_locus_in_sigma(const Gf& F, const QuadForm& a,
                                            const QuadForm& b);
// Decompose a point set into full lines; nullopt if impossible.
std::optional<std::vector<Subspace>> decompose_into_lines(const Gf& F,
                                                          std::vector<Pt> pts);

// ------------------------------------------------------------ Baer subplanes

struct BaerSubplane {
    std::vector<Pt> points;       // q^2+q+1 points of PG(2,q^2), sorted
    std::vector<std::vector<u32>> chart;  // 3x3 over F_{q^2}: PG(2,q) -> B
    std::vector<std::vector<u32>> chart_inv;
    bool tangent = false;
    Pt tangent_point;             // valid when tangent
    std::vector<Pt> linf_points;  // B cap l_inf
};

BaerSubplane subplane_from_chart(const Frame& fr,
                                 const std::vector<std::vector<u32>>& chart);
// The unique Baer subplane through a quadrangle (no 3 collinear).
BaerSubplane baer_subplane_through(const Frame& fr, std::span<const Pt> quad);
// Line-profile acceptance test on an arbitrary candidate point set.
bool is_baer_subplane(const Frame& fr, const std::vector<Pt>& pts);
// Pull a PG(2,q^2) point back to PG(2,q) coordinates of the subplane chart.
std::array<u32, 3> chart_coords(const Frame& fr, const BaerSubplane& B,
                                const Pt& p);
Pt chart_point(const Frame& fr, const BaerSubplane& B,
               std::span<const u32> xyz);

// ------------------------------------------------------------ F_q-conics

struct FqConic {
    std::vector<Pt> points;  // q+1 points of PG(2,q^2)
    BaerSubplane host;
    Conic cplus;             // the unique F_{q^2}-conic containing them
};

// Parameterisation of an F_{q^2}-conic (canonical: through its first five
// points).
RatCurve conic_param(const Gf& F, const Conic& O);
// The unique F_q-conic of O through three of its points.
FqConic fq_conic_through(const Frame& fr, const Conic& O, const Pt& a,
                         const Pt& b, const Pt& c);

// ------------------------------------------------------------ ruled cubics

struct RuledCubic {
    Subspace directrix;            // the spread line [T]
    RatCurve conic_directrix;      // degree 2, parameter aligned with t
    std::array<std::array<u32, 2>, 2> omega{{{1, 0}, {0, 1}}};
    std::vector<Subspace> generators;  // q+1 lines, generator i at t-param i
    std::vector<u32> gen_params;       // t-params of the generators
    std::vector<Pt> points;            // q^2+2q+1 points, sorted
};

RuledCubic ruled_cubic_from_tangent_subplane(const Frame& fr,
                                             const BaerSubplane& B);
// Ruled cubic built directly from a line directrix, an aligned conic
// directrix and the identity ruling (converse-synthesis entry point).
RuledCubic ruled_cubic_from_directrices(const Frame& fr, const Subspace& t,
                                        const RatCurve& conic);

struct CensusCounts {
    u64 directrix_only = 0;       // (q^2-q)/2
    u64 directrix_one_gen = 0;    // q+1
    u64 directrix_two_gen = 0;    // (q^2+q)/2
    u64 conic_and_gen = 0;        // q^3+q^2
    u64 twisted_cubic = 0;        // q^4-q^2
    bool tc_generator_property = true;  // every TC section meets each gen once
};
CensusCounts hyperplane_census(const Frame& fr, const RuledCubic& V);

// Point set of the surface extended by parameters over the quad level.
std::vector<Pt> ruled_cubic_points_by_parameterisation(const Frame& fr,
                                                       const RuledCubic& V,
                                                       Level lv);

// ------------------------------------------------------------ specialness

enum class SpecialKind {
    not_special,
    g_special_conic,
    g_special_twisted_cubic,
    g_special_nrc4,
    gstar_special_nrc4,
};

struct Specialness {
    SpecialKind kind = SpecialKind::not_special;
    // parameters on g / g-star of the witness points with multiplicity
    std::vector<std::pair<u32, int>> g_params;
    std::vector<Pt> g_points;  // at level quad (or quartic for gstar)
};

Specialness specialness(const Frame& fr, const RatCurve& curve);

// True iff extend(C) meets both P Q^q and P^q Q (P, Q points of g).
bool special_conic_wrt(const Frame& fr, const Pt& P, const Pt& Q,
                       const RatCurve& conic);

// Synthesize a degree-n curve over F_q with prescribed z-row and prescribed
// parameters mapping onto g (quad) or g-star (quartic).  Returns nullopt if
// the random completion failed (caller retries).
std::optional<RatCurve> synthesize_special_curve(const Frame& fr, int degree,
                                                 const std::vector<u32>& zrow,
                                                 const std::vector<u32>& g_params,
                                                 Level glevel, DetRng& rng);

// ------------------------------------------------------------ reguli

struct Regulus {
    std::vector<Subspace> lines;     // q+1 lines, sorted
    std::vector<Subspace> opposite;  // the transversals, sorted
};

Regulus regulus_through(const Gf& F, const Subspace& l1, const Subspace& l2,
                        const Subspace& l3);

struct CirclePartition {
    std::vector<std::vector<u32>> cells;  // q-1 cells of spread deltas
    std::vector<Regulus> reguli;          // the cell reguli
    std::vector<Subspace> swapped_spread; // [P], [Q], opposite reguli lines
};

// Partition of S \ {[P],[Q]} into q-1 reguli, plus the opposite-swapped
// spread whose transversals are P Q^q and P^q Q.
CirclePartition circle_partition(const Frame& fr, u32 deltaP, u32 deltaQ);

// ------------------------------------------------------------ Baer pencils

struct BaerPencil {
    Pt vertex;                     // point of PG(2,q^2)
    std::vector<Pt> base;          // q+1 points of a Baer subline
    std::vector<Subspace> lines;   // the q+1 cone lines
    bool ell_inf_pencil = false;
    std::vector<Pt> affine_points; // the q^3 affine points (l_inf pencils)
};

BaerPencil ell_inf_pencil_of_3space(const Frame& fr, const Subspace& Pi);
Subspace pencil_to_3space(const Frame& fr, const BaerPencil& K);

// ------------------------------------------------------------ partitions

struct TangentPartitionCell {
    bool degenerate = false;
    std::vector<Pt> affine_points;      // points of B \ {T} in the cell
    std::optional<Conic> extension;     // C-plus for nondegenerate cells
};

// The q cells cut on a tangent Baer subplane B by the 3-spaces through
// <X, [P]> where X = [m] cap [T].
std::vector<TangentPartitionCell> partition_tangent_subplane(
    const Frame& fr, const BaerSubplane& B, std::span<const Pt> m_line,
    const Pt& Pbar);

}  // namespace bbv

#endif
