#include "bbv/gf.hpp"

#include <algorithm>
#include <array>

namespace bbv {

namespace {

constexpr u32 MAX_Q = 16;

// digit-vector helpers over F_p for the base-level construction
std::vector<u32> vadd(u32 p, std::vector<u32> a, const std::vector<u32>& b) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + b[i]) % p;
    return a;
}

// product of polynomials over F_p reduced mod a monic modulus
std::vector<u32> pmulmod(u32 p, const std::vector<u32>& a,
                         const std::vector<u32>& b,
                         const std::vector<u32>& mod) {
    size_t e = mod.size() - 1;
    std::vector<u32> prod(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
    for (size_t d = prod.size(); d-- > e;) {
        u32 c = prod[d];
        if (!c) continue;
        prod[d] = 0;
        // x^e = -(mod[0] + ... + mod[e-1] x^{e-1}) since mod is monic
        for (size_t k = 0; k < e; ++k)
            prod[d - e + k] = (prod[d - e + k] + c * (p - mod[k]) % p) % p;
    }
    prod.resize(e);
    return prod;
}

u32 vcode(u32 p, const std::vector<u32>& v) {
    u32 c = 0, m = 1;
    for (u32 d : v) {
        c += d * m;
        m *= p;
    }
    return c;
}

std::vector<u32> vdigits(u32 p, u32 e, u32 code) {
    std::vector<u32> v(e, 0);
    for (u32 i = 0; i < e; ++i) {
        v[i] = code % p;
        code /= p;
    }
    return v;
}

}  // namespace

// ---------------------------------------------------------------- Gf

void Gf::build_tables(u32 n, u32 p, u32 gen_code,
                      const std::vector<u32>& mul_by_gen) {
    n_ = n;
    p_ = p;
    gen_ = gen_code;
    expt_.assign(2 * (n - 1), 0);
    logt_.assign(n, 0);
    u32 x = 1;
    for (u32 k = 0; k < n - 1; ++k) {
        expt_[k] = x;
        expt_[k + (n - 1)] = x;
        logt_[x] = k;
        x = mul_by_gen[x];
    }
    if (x != 1) throw std::logic_error("generator order mismatch");

    if (p != 2) {
        // digit arithmetic once, to seed the negation and Zech tables
        auto digit_add = [p](u32 a, u32 b) {
            u32 r = 0, m = 1;
            while (a || b) {
                u32 d = (a % p) + (b % p);
                if (d >= p) d -= p;
                r += d * m;
                m *= p;
                a /= p;
                b /= p;
            }
            return r;
        };
        negt_.assign(n, 0);
        for (u32 a = 0; a < n; ++a) {
            u32 r = 0, m = 1, v = a;
            while (v) {
                u32 d = v % p;
                if (d) d = p - d;
                r += d * m;
                m *= p;
                v /= p;
            }
            negt_[a] = r;
        }
        zech_.assign(n - 1, INF);
        for (u32 d = 0; d < n - 1; ++d) {
            u32 v = digit_add(1, expt_[d]);
            zech_[d] = v == 0 ? INF : logt_[v];
        }
    }

    sqrtt_.assign(n, INF);
    for (u32 a = n; a-- > 0;) sqrtt_[mul(a, a)] = a;  // prefer small roots
    if (p == 2) {
        art_.assign(n, INF);
        for (u32 u = n; u-- > 0;) art_[add(mul(u, u), u)] = u;
    }
}

Gf::Roots2 Gf::quad_roots_fast(u32 a, u32 b, u32 c) const {
    Roots2 out;
    if (p_ != 2) {
        u32 disc = sub(mul(b, b), mul(mul(mul(2, 2), a), c));
        u32 r = sqrtt_[disc];
        if (r == INF) return out;
        u32 i2a = inv(mul(2, a));
        u32 x1 = mul(sub(r, b), i2a);
        u32 x2 = mul(sub(neg(r), b), i2a);
        out.r[out.n++] = x1;
        if (x2 != x1) out.r[out.n++] = x2;
        return out;
    }
    if (b == 0) {
        u32 r = sqrtt_[div(c, a)];
        if (r != INF) out.r[out.n++] = r;
        return out;
    }
    u32 d = div(mul(a, c), mul(b, b));
    u32 u = art_[d];
    if (u == INF) return out;
    u32 ba = div(b, a);
    out.r[out.n++] = mul(ba, u);
    out.r[out.n++] = mul(ba, add(u, 1));
    return out;
}

Gf::Roots2 Gf::roots_upto2(u32 a, u32 b, u32 c) const {
    if (a != 0) return quad_roots_fast(a, b, c);
    Roots2 out;
    if (b != 0) {
        out.r[out.n++] = neg(div(c, b));
        return out;
    }
    if (c == 0) out.n = -1;  // identically zero
    return out;
}

std::vector<u32> Gf::quad_roots(u32 a, u32 b, u32 c) const {
    if (a == 0) throw std::domain_error("quad_roots: leading coeff zero");
    if (p_ != 2) {
        // x = (-b +- sqrt(b^2-4ac)) / 2a
        u32 disc = sub(mul(b, b), mul(mul(mul(2, 2), a), c));
        u32 r = sqrtt_[disc];
        if (r == INF) return {};
        u32 i2a = inv(mul(2, a));
        u32 x1 = mul(sub(r, b), i2a);
        u32 x2 = mul(sub(neg(r), b), i2a);
        if (x1 == x2) return {x1};
        std::vector<u32> out{x1, x2};
        std::sort(out.begin(), out.end());
        return out;
    }
    // char 2
    if (b == 0) {
        u32 r = sqrtt_[div(c, a)];
        return r == INF ? std::vector<u32>{} : std::vector<u32>{r};
    }
    // substitute x = (b/a) u:  u^2 + u = ac/b^2
    u32 d = div(mul(a, c), mul(b, b));
    u32 u = art_[d];
    if (u == INF) return {};
    u32 ba = div(b, a);
    u32 x1 = mul(ba, u);
    u32 x2 = mul(ba, add(u, 1));
    std::vector<u32> out{x1, x2};
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------- tower

bool FieldTower::is_prime_power(u32 q, u32* p_out, u32* e_out) {
    if (q < 2) return false;
    u32 p = 0;
    for (u32 d = 2; d * d <= q; ++d)
        if (q % d == 0) {
            p = d;
            break;
        }
    if (p == 0) p = q;
    u32 e = 0, m = q;
    while (m % p == 0) {
        m /= p;
        ++e;
    }
    if (m != 1) return false;
    if (p_out) *p_out = p;
    if (e_out) *e_out = e;
    return true;
}

FieldTower::FieldTower(u32 q, std::optional<std::pair<u32, u32>> primpoly) {
    if (!is_prime_power(q, &p_, &e_))
        throw std::invalid_argument(std::to_string(q) +
                                    " is not a prime power");
    if (q > MAX_Q)
        throw std::invalid_argument("q exceeds the implementation ceiling 16");
    q_ = q;
    order4_ = q * q * q * q;
    build_base();
    build_quad(primpoly);
    build_quartic();
}

void FieldTower::build_base() {
    u32 n = q_;
    std::vector<u32> mul_by_gen(n, 0);
    u32 gen_code = 0;
    if (e_ == 1) {
        // prime field: least primitive root
        gen_code = 1;
        for (u32 g = 2; g < n; ++g) {
            u32 x = g % n, ord = 1;
            while (x != 1) {
                x = x * g % n;
                ++ord;
            }
            if (ord == n - 1) {
                gen_code = g;
                break;
            }
        }
        for (u32 a = 0; a < n; ++a) mul_by_gen[a] = a * gen_code % n;
    } else {
        // least primitive monic polynomial of degree e over F_p, by the
        // integer code of its lower coefficient vector
        std::vector<u32> mod;
        for (u32 low = 0; low < n && mod.empty(); ++low) {
            std::vector<u32> cand = vdigits(p_, e_, low);
            cand.push_back(1);
            // order of x in F_p[x]/(cand)
            std::vector<u32> xv(e_, 0);
            if (e_ >= 2) xv[1] = 1;
            std::vector<u32> acc = xv;
            u32 ord = 1;
            bool hit_one = false;
            for (; ord <= n - 1; ++ord) {
                if (vcode(p_, acc) == 1) {
                    hit_one = true;
                    break;
                }
                acc = pmulmod(p_, acc, xv, cand);
            }
            if (hit_one && ord == n - 1) mod = cand;
        }
        if (mod.empty()) throw std::logic_error("no primitive polynomial");
        gen_code = p_;  // the class of x
        for (u32 a = 0; a < n; ++a) {
            std::vector<u32> av = vdigits(p_, e_, a);
            std::vector<u32> xv(e_, 0);
            xv[1] = 1;
            mul_by_gen[a] = vcode(p_, pmulmod(p_, av, xv, mod));
        }
    }
    levels_[0].build_tables(n, p_, gen_code, mul_by_gen);
    levels_[0].frobt_.assign(n, 0);
    for (u32 a = 0; a < n; ++a) levels_[0].frobt_[a] = a;  // x^q = x on F_q
    levels_[0].frob_order_ = 1;
}

void FieldTower::build_quad(std::optional<std::pair<u32, u32>> primpoly) {
    const Gf& B = levels_[0];
    u32 n = q_ * q_;
    auto pair_mul = [&](u32 a, u32 b, u32 tt1, u32 tt0) {
        // (a0+a1 tau)(b0+b1 tau), tau^2 = tt1 tau + tt0
        u32 a0 = a % q_, a1 = a / q_, b0 = b % q_, b1 = b / q_;
        u32 hi = B.mul(a1, b1);
        u32 c0 = B.add(B.mul(a0, b0), B.mul(hi, tt0));
        u32 c1 = B.add(B.add(B.mul(a0, b1), B.mul(a1, b0)), B.mul(hi, tt1));
        return c0 + q_ * c1;
    };
    auto is_primitive = [&](u32 tt1, u32 tt0) {
        // tau has order n-1 iff x^2 - tt1 x - tt0 is primitive
        u32 x = q_, ord = 1;
        while (x != 1) {
            x = pair_mul(x, q_, tt1, tt0);
            ++ord;
            if (ord > n) return false;  // zero divisor cycle, not a unit
            if (x == 0) return false;
        }
        return ord == n - 1;
    };
    if (primpoly) {
        t1_ = primpoly->first;
        t0_ = primpoly->second;
        if (t1_ >= q_ || t0_ >= q_)
            throw std::invalid_argument("primitive polynomial override out of range");
        if (!is_primitive(t1_, t0_))
            throw std::invalid_argument(
                "override polynomial is not primitive over F_q");
    } else {
        bool found = false;
        for (u32 a = 0; a < q_ && !found; ++a)
            for (u32 b = 0; b < q_ && !found; ++b)
                if (is_primitive(a, b)) {
                    t1_ = a;
                    t0_ = b;
                    found = true;
                }
        if (!found) throw std::logic_error("no primitive quadratic over F_q");
    }
    std::vector<u32> mul_by_gen(n, 0);
    for (u32 a = 0; a < n; ++a) mul_by_gen[a] = pair_mul(a, q_, t1_, t0_);
    levels_[1].build_tables(n, p_, q_, mul_by_gen);
    // x^q is the conjugation a0 + a1 tau -> (a0 + a1 t1) - a1 tau
    levels_[1].frobt_.assign(n, 0);
    for (u32 a = 0; a < n; ++a) {
        u32 a0 = a % q_, a1 = a / q_;
        levels_[1].frobt_[a] = B.add(a0, B.mul(a1, t1_)) + q_ * B.neg(a1);
    }
    levels_[1].frob_order_ = 2;
    tau_q_ = levels_[1].frobt_[q_];
}

void FieldTower::build_quartic() {
    const Gf& K = levels_[1];
    u32 n2 = q_ * q_, n = order4_;
    auto pair_mul = [&](u32 a, u32 b, u32 ss1, u32 ss0) {
        u32 a0 = a % n2, a1 = a / n2, b0 = b % n2, b1 = b / n2;
        u32 hi = K.mul(a1, b1);
        u32 c0 = K.add(K.mul(a0, b0), K.mul(hi, ss0));
        u32 c1 = K.add(K.add(K.mul(a0, b1), K.mul(a1, b0)), K.mul(hi, ss1));
        return c0 + n2 * c1;
    };
    auto has_root = [&](u32 ss1, u32 ss0) {
        // x^2 - ss1 x - ss0 reducible over F_{q^2}?
        for (u32 z = 0; z < n2; ++z)
            if (K.sub(K.mul(z, z), K.add(K.mul(ss1, z), ss0)) == 0) return true;
        return false;
    };
    auto is_primitive = [&](u32 ss1, u32 ss0) {
        if (has_root(ss1, ss0)) return false;
        u32 x = n2, ord = 1;
        while (x != 1) {
            x = pair_mul(x, n2, ss1, ss0);
            ++ord;
            if (ord > n) return false;
        }
        return ord == n - 1;
    };
    bool found = false;
    for (u32 a = 0; a < n2 && !found; ++a)
        for (u32 b = 0; b < n2 && !found; ++b)
            if (is_primitive(a, b)) {
                s1_ = a;
                s0_ = b;
                found = true;
            }
    if (!found) throw std::logic_error("no primitive quadratic over F_{q^2}");
    std::vector<u32> mul_by_gen(n, 0);
    for (u32 a = 0; a < n; ++a) mul_by_gen[a] = pair_mul(a, n2, s1_, s0_);
    levels_[2].build_tables(n, p_, n2, mul_by_gen);
    // x^q via exp/log: log(x^q) = q log x
    levels_[2].frobt_.assign(n, 0);
    for (u32 a = 1; a < n; ++a)
        levels_[2].frobt_[a] =
            levels_[2].expt_[(static_cast<u64>(levels_[2].logt_[a]) * q_) %
                             (n - 1)];
    levels_[2].frob_order_ = 4;
}

u32 FieldTower::embed(u32 x, Level from, Level to) const {
    if (level_index(from) > level_index(to))
        throw std::invalid_argument("embed: target below source level");
    if (x >= level(from).order()) throw std::invalid_argument("embed: bad code");
    return x;
}

// ---------------------------------------------------------------- polys

int poly_deg(const std::vector<u32>& c) {
    for (size_t i = c.size(); i-- > 0;)
        if (c[i]) return static_cast<int>(i);
    return -1;
}

u32 poly_eval(const Gf& F, const std::vector<u32>& c, u32 x) {
    u32 r = 0;
    for (size_t i = c.size(); i-- > 0;) r = F.add(F.mul(r, x), c[i]);
    return r;
}

std::vector<u32> poly_mul(const Gf& F, const std::vector<u32>& a,
                          const std::vector<u32>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<u32> r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
    }
    return r;
}

std::vector<u32> poly_add(const Gf& F, std::vector<u32> a,
                          const std::vector<u32>& b) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (size_t i = 0; i < b.size(); ++i) a[i] = F.add(a[i], b[i]);
    return a;
}

std::vector<u32> poly_scale(const Gf& F, std::vector<u32> a, u32 s) {
    for (u32& x : a) x = F.mul(x, s);
    return a;
}

std::vector<u32> poly_div_linear(const Gf& F, const std::vector<u32>& c, u32 r,
                                 u32* rem) {
    // synthetic division by (x - r)
    int d = poly_deg(c);
    if (d < 0) throw std::domain_error("division of zero polynomial");
    std::vector<u32> qout(d, 0);
    u32 acc = c[d];
    for (int i = d - 1; i >= 0; --i) {
        qout[i] = acc;
        acc = F.add(c[i], F.mul(acc, r));
    }
    if (rem) *rem = acc;
    return qout;
}

std::vector<u32> poly_gcd(const Gf& F, std::vector<u32> a, std::vector<u32> b) {
    auto trim = [](std::vector<u32>& v) {
        while (!v.empty() && v.back() == 0) v.pop_back();
    };
    trim(a);
    trim(b);
    while (!b.empty()) {
        // a mod b
        u32 lead = F.inv(b.back());
        while (a.size() >= b.size()) {
            u32 f = F.mul(a.back(), lead);
            size_t off = a.size() - b.size();
            for (size_t i = 0; i < b.size(); ++i)
                a[off + i] = F.sub(a[off + i], F.mul(f, b[i]));
            trim(a);
            if (a.empty()) break;
        }
        std::swap(a, b);
    }
    if (!a.empty()) {
        u32 s = F.inv(a.back());
        for (u32& x : a) x = F.mul(x, s);
    }
    return a;
}

std::vector<std::pair<u32, int>> poly_roots(const Gf& F,
                                            const std::vector<u32>& c) {
    if (poly_deg(c) < 0) throw std::invalid_argument("roots of zero polynomial");
    std::vector<std::pair<u32, int>> out;
    for (u32 x = 0; x < F.order(); ++x) {
        if (poly_eval(F, c, x) != 0) continue;
        int mult = 0;
        std::vector<u32> cur = c;
        u32 rem = 0;
        while (poly_deg(cur) >= 1) {
            std::vector<u32> nxt = poly_div_linear(F, cur, x, &rem);
            if (rem != 0) break;
            ++mult;
            cur = nxt;
        }
        out.emplace_back(x, mult);
    }
    return out;
}

std::vector<std::pair<u32, int>> poly_proj_roots(const Gf& F,
                                                 const std::vector<u32>& c,
                                                 int deg) {
    auto out = poly_roots(F, c);
    int d = poly_deg(c);
    if (d < deg) out.emplace_back(INF, deg - d);
    return out;
}

DetRng::DetRng(u64 seed, u64 stream) {
    state = seed ^ (stream * 0x9e3779b97f4a7c15ull + 0x632be59bd9b4e019ull);
    for (int i = 0; i < 3; ++i) next();
}

u64 DetRng::next() {
    // splitmix64
    state += 0x9e3779b97f4a7c15ull;
    u64 z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace bbv
