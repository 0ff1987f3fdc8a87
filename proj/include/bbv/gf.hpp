// Exact arithmetic in the field tower F_q < F_{q^2} < F_{q^4} for small
// prime powers q, with Frobenius maps and exhaustive polynomial root finding.
//
// Elements are integer codes in a fixed product polynomial basis over the
// prime field: an element of F_{q^2} written a0 + a1*tau has code
// a0 + q*a1, and an element of F_{q^4} written b0 + b1*sigma has code
// b0 + q^2*b1 (a_i, b_i codes of the lower level).  Embedding a lower level
// into a higher one is therefore the identity on codes, and membership of a
// high-level element in a subfield is a range check on its code.

#ifndef BBV_GF_HPP
#define BBV_GF_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bbv {

using u32 = std::uint32_t;
using u64 = std::uint64_t;

// Sentinel for the projective parameter "infinity"; never a valid code.
inline constexpr u32 INF = 0xffffffffu;

enum class Level : int { base = 0, quad = 1, quartic = 2 };

inline int level_index(Level l) { return static_cast<int>(l); }

// One field of the tower, with exp/log tables w.r.t. a fixed generator.
class Gf {
public:
    u32 order() const { return n_; }
    u32 characteristic() const { return p_; }
    u32 gen() const { return gen_; }

    // addition via Zech logarithms: a + b = a (1 + g^(log b - log a))
    u32 add(u32 a, u32 b) const {
        if (p_ == 2) return a ^ b;
        if (a == 0) return b;
        if (b == 0) return a;
        u32 la = logt_[a], lb = logt_[b];
        u32 d = lb >= la ? lb - la : lb + (n_ - 1) - la;
        u32 z = zech_[d];
        if (z == INF) return 0;
        return expt_[la + z];
    }
    u32 neg(u32 a) const { return p_ == 2 ? a : negt_[a]; }
    u32 sub(u32 a, u32 b) const { return add(a, neg(b)); }
    u32 mul(u32 a, u32 b) const {
        if (a == 0 || b == 0) return 0;
        return expt_[logt_[a] + logt_[b]];
    }
    u32 inv(u32 a) const {
        if (a == 0) throw std::domain_error("Gf::inv of zero");
        return expt_[(n_ - 1) - logt_[a]];
    }
    u32 div(u32 a, u32 b) const { return mul(a, inv(b)); }
    u32 pow(u32 a, u64 e) const {
        if (a == 0) return e == 0 ? 1u : 0u;
        u64 l = (static_cast<u64>(logt_[a]) * (e % (n_ - 1))) % (n_ - 1);
        return expt_[l];
    }
    // x -> x^q where q is the order of the tower's base field.
    u32 frob(u32 a) const { return frobt_[a]; }
    u32 frob_pow(u32 a, u32 k) const {
        for (u32 i = 0; i < k % frob_order_; ++i) a = frobt_[a];
        return a;
    }
    u32 frob_order() const { return frob_order_; }

    // Solutions of a*x^2 + b*x + c = 0, a != 0, without scanning.
    // Works in odd and even characteristic (table driven).
    std::vector<u32> quad_roots(u32 a, u32 b, u32 c) const;

    // allocation-free variant for hot loops; n = -1 encodes "identically
    // zero" when called through roots_upto2 with a == 0 as well
    struct Roots2 {
        int n = 0;
        u32 r[2] = {0, 0};
    };
    Roots2 quad_roots_fast(u32 a, u32 b, u32 c) const;
    // roots of a quadratic that may degenerate (a or b zero); n = -1 means
    // every value is a root
    Roots2 roots_upto2(u32 a, u32 b, u32 c) const;

    u32 sqrt_or_inf(u32 a) const { return sqrtt_[a]; }  // INF if not a square

private:
    friend class FieldTower;
    u32 n_ = 0, p_ = 0, gen_ = 0, frob_order_ = 1;
    std::vector<u32> expt_, logt_, frobt_;
    std::vector<u32> zech_;   // d -> log(1 + g^d), INF when 1 + g^d = 0
    std::vector<u32> negt_;   // odd p only
    std::vector<u32> sqrtt_;  // a -> some square root, or INF
    std::vector<u32> art_;    // odd p unused; p=2: d -> u with u^2+u=d, or INF
    void build_tables(u32 n, u32 p, u32 gen_code,
                      const std::vector<u32>& mul_by_gen);
};

// The tower F_q < F_{q^2} < F_{q^4}.
//
// tau is the chosen primitive element of F_{q^2} with x^2 = t1*x + t0 over
// F_q, and sigma the primitive element of F_{q^4} with x^2 = s1*x + s0 over
// F_{q^2}; both minimal polynomials are the lexicographically least
// primitive ones under the ordering by (t1, t0) integer codes (unless an
// override is supplied for the quadratic step).
//
// Note: the identity tau^{q^2} = tau holds (the Frobenius of order two
// fixes F_{q^2} pointwise); a literal tau^{q^2} = 1 would contradict tau
// being primitive, so the former is what the tower guarantees and tests.
class FieldTower {
public:
    // Throws std::invalid_argument for non prime powers, q out of range
    // [2, 16], or a non-primitive override polynomial x^2 - t1*x - t0.
    explicit FieldTower(u32 q,
                        std::optional<std::pair<u32, u32>> primpoly = {});

    static bool is_prime_power(u32 q, u32* p_out = nullptr,
                               u32* e_out = nullptr);

    u32 q() const { return q_; }
    u32 p() const { return p_; }
    const Gf& level(Level l) const { return levels_[level_index(l)]; }
    const Gf& base() const { return levels_[0]; }
    const Gf& quad() const { return levels_[1]; }
    const Gf& quartic() const { return levels_[2]; }

    u32 t1() const { return t1_; }
    u32 t0() const { return t0_; }
    u32 s1() const { return s1_; }
    u32 s0() const { return s0_; }
    u32 tau() const { return q_; }          // code of tau at quad/quartic
    u32 tau_q() const { return tau_q_; }    // code of tau^q at quad level
    u32 sigma() const { return q_ * q_; }   // code of sigma at quartic

    // Embeddings are the identity on codes; these just validate ranges.
    u32 embed(u32 x, Level from, Level to) const;
    bool lies_in(u32 x, Level sub) const {  // x a code at any level >= sub
        u32 bound = sub == Level::base ? q_ : (sub == Level::quad ? q_ * q_
                                                                  : order4_);
        return x < bound;
    }
    // x^{q^power} at the given level.
    u32 frobenius(u32 x, Level lv, u32 power) const {
        return level(lv).frob_pow(x, power);
    }

    // Decomposition x = x0 + x1*tau of a quad-level code.
    std::pair<u32, u32> split_tau(u32 x) const { return {x % q_, x / q_}; }
    u32 join_tau(u32 x0, u32 x1) const { return x0 + q_ * x1; }
    // Component of a code over F_q in the product basis {1,tau,sigma,tau*sigma}.
    u32 component(u32 x, int i) const {
        u32 d = x;
        for (int k = 0; k < i; ++k) d /= q_;
        return d % q_;
    }

private:
    u32 q_ = 0, p_ = 0, e_ = 0, order4_ = 0;
    u32 t1_ = 0, t0_ = 0, s1_ = 0, s0_ = 0, tau_q_ = 0;
    Gf levels_[3];

    void build_base();
    void build_quad(std::optional<std::pair<u32, u32>> primpoly);
    void build_quartic();
};

// ---- polynomials over one Gf level (coeffs[i] is the coefficient of x^i) ----

u32 poly_eval(const Gf& F, const std::vector<u32>& c, u32 x);
std::vector<u32> poly_mul(const Gf& F, const std::vector<u32>& a,
                          const std::vector<u32>& b);
std::vector<u32> poly_add(const Gf& F, std::vector<u32> a,
                          const std::vector<u32>& b);
std::vector<u32> poly_scale(const Gf& F, std::vector<u32> a, u32 s);
int poly_deg(const std::vector<u32>& c);  // -1 for the zero polynomial
std::vector<u32> poly_gcd(const Gf& F, std::vector<u32> a, std::vector<u32> b);
// Divide by (x - r); remainder returned through *rem.
std::vector<u32> poly_div_linear(const Gf& F, const std::vector<u32>& c, u32 r,
                                 u32* rem);

// Every root in the field with multiplicity (exhaustive scan, multiplicity
// by repeated synthetic division).  Throws on the zero polynomial.
std::vector<std::pair<u32, int>> poly_roots(const Gf& F,
                                            const std::vector<u32>& c);

// Projective-root semantics: roots of the degree-`deg` homogenisation,
// reporting INF with multiplicity deg - poly_deg(c) when positive.
std::vector<std::pair<u32, int>> poly_proj_roots(const Gf& F,
                                                 const std::vector<u32>& c,
                                                 int deg);

// Deterministic counter-based generator for sampled checker modes.
struct DetRng {
    u64 state;
    explicit DetRng(u64 seed, u64 stream = 0);
    u64 next();
    u32 below(u32 n) { return static_cast<u32>(next() % n); }
};

}  // namespace bbv

#endif
