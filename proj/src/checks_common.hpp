// Shared machinery for the theorem checkers: deterministic instance
// generators, witness formatting, and the C-plus bookkeeping for conics
// presented in subplane chart coordinates.

#ifndef BBV_CHECKS_COMMON_HPP
#define BBV_CHECKS_COMMON_HPP

#include <chrono>

#include "bbv/theorems.hpp"

namespace bbv::detail {

u64 stream_of(const std::string& id, u32 q);

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - start)
            .count();
    }
};

std::string pt_str(const Pt& p);
std::string param_str(u32 s);
json pts_json(const std::vector<Pt>& pts);

CheckRecord make_record(const std::string& id, const Frame& fr);
CheckRecord skipped(const std::string& id, const Frame& fr,
                    const std::string& why);
void fail_with(CheckRecord& rec, const std::string& why, json witness);

// ---- deterministic instance generators ----

// nondegenerate conic of PG(2,q^2); want = points on l_inf (0,1,2; -1 any)
Conic random_conic_with_type(const Frame& fr, int want, DetRng& rng);
BaerSubplane random_subplane(const Frame& fr, bool tangent, DetRng& rng);
Pt random_affine_pg4(const Frame& fr, DetRng& rng);

// F_q-conic inside a subplane, presented by its chart form
struct SubplaneConic {
    std::vector<Pt> points;  // q+1 points of PG(2,q^2)
    QuadForm chart_form;     // ternary over F_q in chart coordinates
    Conic cplus;             // the F_{q^2}-extension
};
// through_T: 1 = contains the tangent point, -1 = avoids it, 0 = anything
SubplaneConic random_conic_in_subplane(const Frame& fr, const BaerSubplane& B,
                                       int through_T, DetRng& rng);

// transport of a ternary form through the subplane chart (chart coords to
// PG(2,q^2) coordinates)
QuadForm chart_form_to_plane(const Frame& fr, const BaerSubplane& B,
                             const QuadForm& f);

// parameters (delta codes at the given level) of conic cap l_inf
std::vector<std::pair<u32, int>> conic_linf_params(const Frame& fr,
                                                   const Conic& O, Level lv);

// rational parameterisation of a plane conic given as a point set in
// PG(4,q) (any q >= 3): points[0],[1],[2] get parameters 0,1,INF
RatCurve rational_conic_param(const Gf& F, const std::vector<Pt>& pts);

// all Baer sublines of a parameter line PG(1,q^2), as sorted param vectors
std::vector<std::vector<u32>> all_baer_subline_param_sets(const Gf& K, u32 q);

}  // namespace bbv::detail

#endif
