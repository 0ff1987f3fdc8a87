// The Bruck-Bose frame: hyperplane at infinity, the regular spread with its
// transversals g, g^q, the affine bijection between PG(2,q^2) \ l_inf and
// PG(4,q) \ Sigma_inf, and the point dictionaries between l_inf (and its
// quadratic extension) and g (and g-star).
//
// Coordinates are hard-wired: Sigma_inf and l_inf are z = 0,
//   g  = < A0 = (tau^q, -1, 0, 0, 0), A1 = (0, 0, tau^q, -1, 0) >,
// and the spread line of delta = d0 + d1 tau is
//   [T] = < (d0, d1, 1, 0, 0), (t0 d1, d0 + t1 d1, 0, 1, 0) >,
// with delta = INF giving <(1,0,0,0,0), (0,1,0,0,0)>.

#ifndef BBV_BRUCKBOSE_HPP
#define BBV_BRUCKBOSE_HPP

#include "bbv/gf.hpp"
#include "bbv/projective.hpp"

namespace bbv {

class Frame {
public:
    explicit Frame(const FieldTower& tower);

    const FieldTower& tower() const { return *tw_; }
    u32 q() const { return tw_->q(); }
    const Gf& Fq() const { return tw_->base(); }
    const Gf& Fq2() const { return tw_->quad(); }
    const Gf& Fq4() const { return tw_->quartic(); }

    const Subspace& sigma_inf() const { return sigma_inf_; }   // PG(4,q)
    const Subspace& ell_inf() const { return ell_inf_; }       // PG(2,q^2)
    const Pt& A0() const { return A0_; }                       // level quad
    const Pt& A1() const { return A1_; }
    const Subspace& g() const { return g_; }                   // level quad
    const Subspace& gq() const { return gq_; }

    // delta is a code of F_{q^2} or INF.
    const Subspace& spread_line(u32 delta) const {
        return spread_[delta == INF ? q2_ : delta];
    }
    const std::vector<Subspace>& spread() const { return spread_; }
    // delta of the unique spread line containing a point of Sigma_inf.
    u32 spread_delta_of(const Pt& sigma_point) const;

    // The affine Bruck-Bose bijection (throws off the affine part).
    Pt bb_map(const Pt& A_pg2) const;
    Pt bb_unmap(const Pt& A_pg4) const;

    // Point (delta, 1, 0) of l_inf; delta = INF gives (1, 0, 0).
    Pt linf_point(u32 delta) const;
    u32 linf_delta_of(const Pt& p) const;  // p on l_inf (or its extension)

    // alpha A0 + A1 on g (alpha in F_{q^2}) or g-star (alpha in F_{q^4});
    // alpha = INF gives A0.  lv selects the coordinate level of the result.
    Pt g_point(u32 alpha, Level lv = Level::quad) const;
    // Inverse dictionary for a point on g / g-star at the given level.
    u32 g_alpha_of(const Pt& on_g, Level lv) const;

    // Spread line built per the transversal construction: the rational part
    // of the line T T^q for T = g_point(delta).  Used to cross-check the
    // coordinate spread.
    Subspace spread_line_from_transversal(u32 delta) const;

    // Line m of Sigma_inf extended to level lv (same basis).
    Subspace extend(const Subspace& s, Level lv) const { (void)lv; return s; }

    // Affine-plane axioms of the incidence structure A(S).
    struct IncidenceReport {
        bool pass = false;
        u64 points = 0;
        u64 lines = 0;
        std::string detail;
    };
    IncidenceReport incidence_plane_check() const;
    // Same axiom check against an arbitrary line set (test fixtures).
    IncidenceReport incidence_plane_check(const std::vector<Subspace>& lines) const;

private:
    const FieldTower* tw_;
    u32 q2_;
    Subspace sigma_inf_, ell_inf_, g_, gq_;
    Pt A0_, A1_;
    std::vector<Subspace> spread_;  // index delta code, last entry INF
};

// Spread diagnostics, usable on fixture line sets as well.
bool spread_is_partition(const Gf& F, const std::vector<Subspace>& lines,
                         const Subspace& ambient);
// Closure under reguli (regularity).  Cubic in the line count; meant for
// small q and fixture tests only.
bool spread_is_regular(const Gf& F, const std::vector<Subspace>& lines);

// The unique regulus through three mutually skew lines of a common 3-space,
// sorted canonically; the opposite regulus (the transversals) through
// `opposite_out` when non-null.
std::vector<Subspace> regulus_lines(const Gf& F, const Subspace& l1,
                                    const Subspace& l2, const Subspace& l3,
                                    std::vector<Subspace>* opposite_out = nullptr);

// The unique line through X (a point of Sigma_inf at level quad or quartic,
// off both transversals) meeting g and g^q at that level.
Subspace congruence_line_through(const Frame& fr, const Pt& X, Level lv);

}  // namespace bbv

#endif
