#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "field.hpp"
#include "params.hpp"
#include "parallel.hpp"
#include "vbf.hpp"

namespace apnwb {

namespace detail {

inline std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t n) {
    std::int64_t t = 0, nt = 1, r = static_cast<std::int64_t>(n), nr = static_cast<std::int64_t>(a % n);
    while (nr) {
        std::int64_t qq = r / nr;
        t -= qq * nt;
        std::swap(t, nt);
        r -= qq * nr;
        std::swap(r, nr);
    }
    if (r != 1) throw BadExponent("value not invertible in Z_n");
    return static_cast<std::uint64_t>(t < 0 ? t + static_cast<std::int64_t>(n) : t);
}

inline void require_nondegenerate_a(const Field& F, FieldElement a) {
    if ((a + a.pow(F.q())).is_zero())
        throw DegenerateA("a + a^q = 0 (a lies in the subfield)");
}

} // namespace detail

/// a*Tr^n_m(F(x)) + a^q*Tr^n_m(G(x)) from explicit term lists. F and G must
/// have zero constant term.
inline VBF build_trace_composed(std::shared_ptr<const Field> f,
                                const std::vector<VBF::Term>& F_terms,
                                const std::vector<VBF::Term>& G_terms, FieldElement a,
                                std::optional<ConstructionParams> prov = {}) {
    const Field& F = *f;
    const unsigned m = F.m();
    detail::require_nondegenerate_a(F, a);
    for (auto* terms : {&F_terms, &G_terms}) {
        std::uint32_t c0 = 0;
        for (auto& [c, e] : *terms)
            if (e == 0) c0 ^= c.bits();
        if (c0) throw NonzeroConstant("term list has a nonzero constant term");
    }
    if (!prov) {
        ConstructionParams p;
        p.family = Family::TraceComposed;
        p.field_n = F.n();
        p.coeffs["a"] = a.bits();
        for (auto& [c, e] : F_terms) p.f_terms.emplace_back(c.bits(), e);
        for (auto& [c, e] : G_terms) p.g_terms.emplace_back(c.bits(), e);
        prov = std::move(p);
    }
    const std::uint32_t ab = a.bits(), aqb = F.pow(ab, F.q());
    std::vector<std::uint32_t> t(F.size());
    for (std::uint32_t x = 0; x < F.size(); ++x) {
        std::uint32_t fx = 0, gx = 0;
        for (auto& [c, e] : F_terms) fx ^= F.mul(c.bits(), F.pow(x, e));
        for (auto& [c, e] : G_terms) gx ^= F.mul(c.bits(), F.pow(x, e));
        t[x] = F.mul(ab, F.trace_rel(fx, m)) ^ F.mul(aqb, F.trace_rel(gx, m));
    }
    return VBF(std::move(f), std::move(t), std::move(prov));
}

/// f_s(x) = a*Tr(b x^3) + a^q*Tr(c x^(2^s+1)), the quadrinomial family.
inline VBF build_fs(std::shared_ptr<const Field> f, unsigned s, FieldElement a, FieldElement b,
                    FieldElement c) {
    const Field& F = *f;
    const unsigned m = F.m();
    if (m % 2 == 0) throw OddnessViolation("m must be odd");
    if (s % 2 == 0) throw OddnessViolation("s must be odd");
    if (b.is_zero() || c.is_zero()) throw ZeroInput("b and c must be nonzero");
    detail::require_nondegenerate_a(F, a);
    ConstructionParams p;
    p.family = Family::Fs;
    p.field_n = F.n();
    p.ints["s"] = s;
    p.coeffs = {{"a", a.bits()}, {"b", b.bits()}, {"c", c.bits()}};
    return build_trace_composed(std::move(f), {{b, 3}}, {{c, (std::uint64_t(1) << s) + 1}}, a,
                                std::move(p));
}

/// h_{i,s,b,c,g,e}(x) = a*Tr(b x^(2^i+1) + c x^(2^(i+m)+1))
///                    + a^q*Tr(g x^(2^s+1) + e x^(2^(s+m)+1)).
inline VBF build_hexanomial(std::shared_ptr<const Field> f, unsigned i, unsigned s, FieldElement b,
                            FieldElement c, FieldElement g, FieldElement e, FieldElement a) {
    const Field& F = *f;
    const unsigned m = F.m();
    detail::require_nondegenerate_a(F, a);
    ConstructionParams p;
    p.family = Family::Hexanomial;
    p.field_n = F.n();
    p.ints = {{"i", i}, {"s", s}};
    p.coeffs = {{"a", a.bits()}, {"b", b.bits()}, {"c", c.bits()},
                {"g", g.bits()}, {"e", e.bits()}};
    return build_trace_composed(
        std::move(f),
        {{b, (std::uint64_t(1) << i) + 1}, {c, (std::uint64_t(1) << (i + m)) + 1}},
        {{g, (std::uint64_t(1) << s) + 1}, {e, (std::uint64_t(1) << (s + m)) + 1}}, a,
        std::move(p));
}

/// h_s(x) = a*Tr(b x^3) + a^q*Tr(g x^5 + e x^(4q+1)) with s = 2 and (g, e)
/// fixed per variant: 1) g = 1, e = b^-(2q-2);  2) g = e = b.
inline VBF build_corollary(std::shared_ptr<const Field> f, int variant, FieldElement a,
                           FieldElement b) {
    const Field& F = *f;
    const unsigned m = F.m();
    if (m % 2 == 0) throw OddnessViolation("m must be odd");
    if (variant != 1 && variant != 2) throw Error("variant must be 1 or 2");
    if (b.is_cube()) throw CubeB("b is a cube");
    detail::require_nondegenerate_a(F, a);
    FieldElement g = variant == 1 ? F.one() : b;
    FieldElement e = variant == 1 ? b.pow(2 * std::uint64_t(F.q()) - 2).inv() : b;
    ConstructionParams p;
    p.family = Family::CorollaryH;
    p.field_n = F.n();
    p.ints["variant"] = static_cast<std::uint64_t>(variant);
    p.coeffs = {{"a", a.bits()}, {"b", b.bits()}};
    return build_trace_composed(std::move(f), {{b, 3}},
                                {{g, 5}, {e, 4 * std::uint64_t(F.q()) + 1}}, a, std::move(p));
}

/// x^3 + w x^(2^s+1) + w^2 x^(3q) + x^((2^s+1)q) with w the cube root of
/// unity z^((2^n-1)/3); equals the trace-composed form with a = w, b = c = w^2
/// for odd s.
inline VBF build_f14(std::shared_ptr<const Field> f, unsigned s) {
    const Field& F = *f;
    (void)F.m();
    if (s % 2 == 0) throw OddnessViolation("s must be odd");
    FieldElement w = F.primitive().pow(F.order() / 3);
    ConstructionParams p;
    p.family = Family::F14Quadrinomial;
    p.field_n = F.n();
    p.ints["s"] = s;
    return build_trace_composed(std::move(f), {{w * w, 3}},
                                {{w * w, (std::uint64_t(1) << s) + 1}}, w, std::move(p));
}

/// x^3 + a^-1 * Tr^n_1(a^3 x^9), a != 0.
inline VBF build_f4(std::shared_ptr<const Field> f, FieldElement a) {
    const Field& F = *f;
    if (a.is_zero()) throw ZeroInput("a must be nonzero");
    FieldElement ai = a.inv(), a3 = a.pow(3);
    ConstructionParams p;
    p.family = Family::F4;
    p.field_n = F.n();
    p.coeffs["a"] = a.bits();
    return VBF::from_eval(
        std::move(f),
        [&](FieldElement x) {
            FieldElement tr = F.elem(F.abs_trace((a3 * x.pow(9)).bits()));
            return x.pow(3) + ai * tr;
        },
        std::move(p));
}

/// Smallest-bit-value element of multiplicative order 2^m - 1 inside the
/// Frobenius-fixed copy of GF(2^m); the subfield generator used by the
/// bivariate quadrinomial instances.
inline FieldElement subfield_generator(const Field& F) {
    const unsigned m = F.m();
    const std::uint32_t qo = (std::uint32_t(1) << m) - 1;
    for (std::uint32_t x = 2; x < F.size(); ++x) {
        if (!F.in_subfield(x, m)) continue;
        bool full = true;
        for (std::uint32_t p = 2; p <= qo; ++p)
            if (qo % p == 0 && F.pow(x, qo / p) == 1) {
                full = false;
                break;
            }
        if (full) return FieldElement(&F, x);
    }
    throw Error("no subfield generator found");
}

/// u(u^q x + u x^q)(x + x^q) + (u^q x + u x^q)^(2^2i + 2^3i)
///   + alpha (u^q x + u x^q)^(2^2i) (x + x^q)^(2^i) + beta (x + x^q)^(2^i+1).
/// Validates gcd(i, m) = 1, alpha/beta in GF(2^m), u primitive, and that
/// X^(2^i+1) + alpha X + beta has no root in GF(2^m).
inline VBF build_f12_taniguchi(std::shared_ptr<const Field> f, unsigned i, FieldElement alpha,
                               FieldElement beta, FieldElement u) {
    const Field& F = *f;
    const unsigned m = F.m();
    if (std::gcd(i, m) != 1) throw Error("gcd(i, m) must be 1");
    if (!alpha.in_subfield(m) || !beta.in_subfield(m))
        throw Error("alpha and beta must lie in GF(2^m)");
    if (u.is_zero() || std::gcd<std::uint64_t>(F.dlog(u.bits()), F.order()) != 1)
        throw Error("u must be primitive");
    const std::uint64_t pe = (std::uint64_t(1) << i) + 1;
    for (std::uint32_t y = 0; y < F.size(); ++y) {
        if (!F.in_subfield(y, m)) continue;
        if ((F.pow(y, pe) ^ F.mul(alpha.bits(), y) ^ beta.bits()) == 0)
            throw Error("X^(2^i+1) + alpha*X + beta has a root in GF(2^m)");
    }
    const std::uint64_t e1 = (std::uint64_t(1) << (2 * i)) + (std::uint64_t(1) << (3 * i));
    const std::uint32_t q = F.q();
    ConstructionParams p;
    p.family = Family::F12Taniguchi;
    p.field_n = F.n();
    p.ints["i"] = i;
    p.coeffs = {{"alpha", alpha.bits()}, {"beta", beta.bits()}, {"u", u.bits()}};
    return VBF::from_eval(
        std::move(f),
        [&](FieldElement x) {
            FieldElement xq = x.pow(q);
            FieldElement t = u.pow(q) * x + u * xq;
            FieldElement w = x + xq;
            return u * t * w + t.pow(e1) + alpha * t.pow(std::uint64_t(1) << (2 * i)) *
                   w.pow(std::uint64_t(1) << i) + beta * w.pow(pe);
        },
        std::move(p));
}

// ---- Theorem-style condition checking for the quadrinomial family ----

enum class Theorem31Item { I, II, III, IV, V, VI, VII };
enum class IvReading { Statement, Proof };

inline const char* item_name(Theorem31Item it) {
    switch (it) {
    case Theorem31Item::I: return "i";
    case Theorem31Item::II: return "ii";
    case Theorem31Item::III: return "iii";
    case Theorem31Item::IV: return "iv";
    case Theorem31Item::V: return "v";
    case Theorem31Item::VI: return "vi";
    case Theorem31Item::VII: return "vii";
    }
    return "?";
}

inline Theorem31Item item_from_name(const std::string& s) {
    for (auto it : {Theorem31Item::I, Theorem31Item::II, Theorem31Item::III, Theorem31Item::IV,
                    Theorem31Item::V, Theorem31Item::VI, Theorem31Item::VII})
        if (s == item_name(it)) return it;
    throw ParseError("unknown item: " + s);
}

struct ConditionReport {
    std::string item;
    bool satisfied = false;
    std::string witness; // populated whenever satisfied is false
};

/// The exponent shift each item pins, when it exists for this field.
inline std::optional<unsigned> theorem31_item_shift(const Field& F, Theorem31Item item) {
    if (F.n() % 2) return std::nullopt;
    const unsigned m = F.m(), n = F.n();
    switch (item) {
    case Theorem31Item::I: return m >= 3 ? std::optional<unsigned>(m - 2) : std::nullopt;
    case Theorem31Item::II:
        if (m < 3) return std::nullopt;
        return static_cast<unsigned>(detail::mod_inverse(m - 2, n));
    case Theorem31Item::III: return 3;
    case Theorem31Item::IV:
        if (m % 3 == 0) return std::nullopt;
        return static_cast<unsigned>(detail::mod_inverse(3, n));
    case Theorem31Item::V: return m;
    case Theorem31Item::VI: return m + 2;
    case Theorem31Item::VII: return n - 1;
    }
    return std::nullopt;
}

/// Evaluates the side conditions attached to one item of the quadrinomial
/// APN statement. Subfield membership of a ratio means "nonzero and fixed by
/// the q-power Frobenius"; negated membership is plain non-membership.
inline ConditionReport check_theorem31_item(const Field& F, Theorem31Item item, unsigned s,
                                            FieldElement a, FieldElement b, FieldElement c,
                                            IvReading reading = IvReading::Statement) {
    ConditionReport rep;
    rep.item = item_name(item);
    auto fail = [&](const std::string& w) {
        rep.satisfied = false;
        rep.witness = w;
        return rep;
    };

    if (F.n() % 2) return fail("n is odd");
    const unsigned m = F.m(), n = F.n();
    if (m % 2 == 0) return fail("m is even");
    if (b.is_zero() || c.is_zero()) return fail("bc = 0");
    if (s % 2 == 0) return fail("s is even");
    if ((a + a.pow(F.q())).is_zero()) return fail("a lies in GF(2^m)");

    auto in_sub_star = [&](FieldElement v) { return !v.is_zero() && v.in_subfield(m); };
    auto require_noncube_b = [&]() -> bool {
        if (b.is_cube()) return false;
        return true;
    };

    switch (item) {
    case Theorem31Item::I: {
        if (m < 3 || s != m - 2) return fail("s != m-2");
        if (!require_noncube_b()) return fail("b is a cube");
        if (!in_sub_star(c.pow(4) / b)) return fail("c^4/b not in GF(2^m)*");
        break;
    }
    case Theorem31Item::II: {
        if (m < 3) return fail("m too small for (m-2)^-1");
        const std::uint64_t sinv = detail::mod_inverse(m - 2, n);
        if (s != sinv) return fail("s != (m-2)^-1 mod n");
        if (!require_noncube_b()) return fail("b is a cube");
        FieldElement ratio = c.pow((std::uint64_t(1) << s) - 1) / b.pow(std::uint64_t(1) << (2 * s));
        if (!in_sub_star(ratio)) return fail("c^(2^s-1)/b^(2^2s) not in GF(2^m)*");
        break;
    }
    case Theorem31Item::III: {
        if (s != 3) return fail("s != 3");
        if (!require_noncube_b()) return fail("b is a cube");
        if (!in_sub_star(c / b.pow(3))) return fail("c/b^3 not in GF(2^m)*");
        break;
    }
    case Theorem31Item::IV: {
        if (m % 3 == 0) return fail("gcd(3, m) != 1");
        if ((3ull * s) % n != 1) return fail("3s != 1 mod n");
        if (!require_noncube_b()) return fail("b is a cube");
        const std::uint64_t K = (std::uint64_t(1) << (2 * s)) - (std::uint64_t(1) << s) + 1;
        FieldElement ratio =
            reading == IvReading::Statement ? c / b.pow(K) : c.pow(K) / b;
        if (!in_sub_star(ratio))
            return fail(reading == IvReading::Statement ? "c/b^K not in GF(2^m)*"
                                                        : "c^K/b not in GF(2^m)*");
        break;
    }
    case Theorem31Item::V: {
        if (s != m) return fail("s != m");
        if (!require_noncube_b()) return fail("b is a cube");
        if (c.in_subfield(m)) return fail("c lies in GF(2^m)");
        break;
    }
    case Theorem31Item::VI: {
        if (s != m + 2) return fail("s != m+2");
        if (!require_noncube_b()) return fail("b is a cube");
        if (!in_sub_star(b * c)) return fail("bc not in GF(2^m)*");
        break;
    }
    case Theorem31Item::VII: {
        if (s != n - 1) return fail("s != n-1");
        if ((c * c / b).in_subfield(m)) return fail("c^2/b lies in GF(2^m)");
        break;
    }
    }
    rep.satisfied = true;
    return rep;
}

/// Exhaustive (b, c) scan of the item-iv side conditions under both exponent
/// placements. The two readings disagree: hits are counted separately.
struct ItemIvScan {
    bool applicable = false;
    std::string note;
    unsigned s = 0;
    std::uint64_t pairs_checked = 0;
    std::uint64_t statement_hits = 0;
    std::uint64_t proof_hits = 0;
};

inline ItemIvScan item_iv_emptiness_scan(const Field& F) {
    ItemIvScan out;
    if (F.n() % 2) {
        out.note = "n odd";
        return out;
    }
    const unsigned m = F.m(), n = F.n();
    if (m % 2 == 0 || m % 3 == 0) {
        out.note = m % 2 == 0 ? "m even" : "gcd(3, m) != 1";
        return out;
    }
    const unsigned s = static_cast<unsigned>(detail::mod_inverse(3, n));
    if (s % 2 == 0) {
        out.note = "3^-1 mod n is even";
        return out;
    }
    out.applicable = true;
    out.s = s;
    const std::uint64_t K = (std::uint64_t(1) << (2 * s)) - (std::uint64_t(1) << s) + 1;
    const std::uint32_t N = F.size();
    std::vector<std::array<std::uint64_t, 3>> parts(par::workers(), {0, 0, 0});
    par::for_range(1, N, [&](unsigned w, std::uint64_t lo, std::uint64_t hi) {
        auto& [pairs, st, pr] = parts[w];
        for (std::uint64_t b = lo; b < hi; ++b) {
            if (F.is_cube(static_cast<std::uint32_t>(b))) continue;
            const std::uint32_t bK = F.pow(static_cast<std::uint32_t>(b), K);
            const std::uint32_t binv = F.inv(static_cast<std::uint32_t>(b));
            for (std::uint32_t c = 1; c < N; ++c) {
                ++pairs;
                const std::uint32_t r1 = F.mul(c, F.inv(bK));
                if (r1 && F.in_subfield(r1, m)) ++st;
                const std::uint32_t r2 = F.mul(F.pow(c, K), binv);
                if (r2 && F.in_subfield(r2, m)) ++pr;
            }
        }
    });
    for (auto& [pairs, st, pr] : parts) {
        out.pairs_checked += pairs;
        out.statement_hits += st;
        out.proof_hits += pr;
    }
    return out;
}

// ---- fixed GF(2^10) instances ----

/// The two hexanomial representatives x^6+x^33+z^31 x^192 and
/// x^33+x^72+z^31 x^258.
inline VBF build_f3_instance(std::shared_ptr<const Field> f, int which) {
    const Field& F = *f;
    if (F.n() != 10) throw UnsupportedWidth("f3 instances are defined over GF(2^10)");
    FieldElement z31 = F.primitive().pow(31);
    ConstructionParams p;
    p.family = Family::F3Instance;
    p.field_n = 10;
    p.ints["which"] = static_cast<std::uint64_t>(which);
    if (which == 1)
        return VBF::from_terms(std::move(f), {{F.one(), 6}, {F.one(), 33}, {z31, 192}}, std::move(p));
    if (which == 2)
        return VBF::from_terms(std::move(f), {{F.one(), 33}, {F.one(), 72}, {z31, 258}}, std::move(p));
    throw Error("f3 instance index must be 1 or 2");
}

struct Example1Report {
    bool apn = false;
    std::vector<std::uint32_t> apn_exponents; // k with (b=1, g=z, e=z^k) APN
};

/// h_s with s = 2, a = z, b = 1, g = z, e = z^369 over GF(2^10).
inline VBF example1_instance(std::shared_ptr<const Field> f) {
    const Field& F = *f;
    if (F.n() != 10) throw UnsupportedWidth("example instance is defined over GF(2^10)");
    FieldElement z = F.primitive();
    ConstructionParams p;
    p.family = Family::Sporadic;
    p.field_n = 10;
    p.ints["which"] = 2;
    return build_trace_composed(std::move(f), {{F.one(), 3}},
                                {{z, 5}, {z.pow(369), 4 * std::uint64_t(F.q()) + 1}}, z,
                                std::move(p));
}

/// Verifies the fixed instance; when it fails (or when forced) scans every
/// e = z^k with b = 1, g = z and reports all APN exponents.
inline Example1Report example1_verify(std::shared_ptr<const Field> f, bool force_scan = false) {
    const Field& F = *f;
    Example1Report rep;
    rep.apn = example1_instance(f).is_apn();
    if (rep.apn && !force_scan) return rep;
    FieldElement z = F.primitive();
    const std::uint64_t eexp = 4 * std::uint64_t(F.q()) + 1;
    std::vector<std::vector<std::uint32_t>> parts(par::workers());
    par::for_range(0, F.order(), [&](unsigned w, std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t k = lo; k < hi; ++k) {
            VBF cand = build_trace_composed(f, {{F.one(), 3}}, {{z, 5}, {z.pow(k), eexp}}, z);
            if (cand.is_apn()) parts[w].push_back(static_cast<std::uint32_t>(k));
        }
    });
    for (auto& p : parts)
        rep.apn_exponents.insert(rep.apn_exponents.end(), p.begin(), p.end());
    std::sort(rep.apn_exponents.begin(), rep.apn_exponents.end());
    return rep;
}

inline VBF build_sporadic(std::shared_ptr<const Field> f, const std::string& name) {
    const Field& F = *f;
    if (F.n() != 10) throw UnsupportedWidth("sporadic instances are defined over GF(2^10)");
    FieldElement z = F.primitive();
    if (name == "B") {
        ConstructionParams p;
        p.family = Family::Sporadic;
        p.field_n = 10;
        p.ints["which"] = 0;
        return VBF::from_terms(std::move(f), {{F.one(), 3}, {z.pow(341), 36}}, std::move(p));
    }
    if (name == "f3_z11") {
        VBF v = build_fs(std::move(f), 3, z, F.one(), z.pow(11));
        return v;
    }
    if (name == "example1") return example1_instance(std::move(f));
    throw ParseError("unknown sporadic name: " + name);
}

/// The full comparison catalog over GF(2^10): every known CCZ-class
/// representative plus the new instances, 20 functions total.
inline std::vector<std::pair<std::string, VBF>> catalog_f2_10(std::shared_ptr<const Field> f) {
    const Field& F = *f;
    if (F.n() != 10) throw UnsupportedWidth("catalog is defined over GF(2^10)");
    FieldElement z = F.primitive();
    FieldElement one = F.one();
    FieldElement gamma = subfield_generator(F);

    std::vector<std::pair<std::string, VBF>> cat;
    auto pm = [&](std::uint64_t e) {
        ConstructionParams p;
        p.family = Family::PowerMap;
        p.field_n = 10;
        p.ints["exponent"] = e;
        return VBF::from_terms(f, {{one, e}}, p);
    };
    cat.emplace_back("gold_x3", pm(3));
    cat.emplace_back("gold_x9", pm(9));
    cat.emplace_back("kasami_x57", pm(57));
    cat.emplace_back("dobbertin_x339", pm(339));
    cat.emplace_back("f3_1", build_f3_instance(f, 1));
    cat.emplace_back("f3_2", build_f3_instance(f, 2));
    cat.emplace_back("f4_1", build_f4(f, one));
    cat.emplace_back("f4_2", build_f4(f, z));
    for (auto [i, betas] : {std::pair<unsigned, std::array<unsigned, 3>>{1u, {0u, 7u, 11u}},
                            std::pair<unsigned, std::array<unsigned, 3>>{2u, {0u, 3u, 15u}}})
        for (unsigned bexp : betas) {
            FieldElement beta = bexp == 0 ? one : gamma.pow(bexp);
            std::string nm = "f12_i" + std::to_string(i) + "_beta_" +
                             (bexp == 0 ? "1" : "g" + std::to_string(bexp));
            cat.emplace_back(nm, build_f12_taniguchi(f, i, one, beta, z));
        }
    cat.emplace_back("sporadic_b", build_sporadic(f, "B"));
    cat.emplace_back("f14_s3", build_f14(f, 3));
    cat.emplace_back("f14_s7", build_f14(f, 7));
    cat.emplace_back("f15", build_fs(f, 3, z, z, z.pow(3)));
    cat.emplace_back("sporadic_quadrinomial_z11", build_sporadic(f, "f3_z11"));
    cat.emplace_back("sporadic_hexanomial_z369", build_sporadic(f, "example1"));
    return cat;
}

// ---- property P search for s = m-2 ----

/// U = {(z^j)^i : gcd(3, i) = 1}, j = (2^m+1)/3; every pair (b, c) with b a
/// nonzero cube and c^4/b in U satisfies the property below.
inline std::vector<std::uint32_t> pm2_unit_candidates(const Field& F) {
    const unsigned m = F.m();
    if (m % 2 == 0) throw OddnessViolation("m must be odd");
    const std::uint32_t j = (F.q() + 1) / 3;
    const std::uint32_t zj = F.pow(F.primitive().bits(), j);
    std::set<std::uint32_t> u;
    for (std::uint32_t i = 1; i <= F.order(); ++i)
        if (i % 3 != 0) u.insert(F.pow(zj, i));
    return {u.begin(), u.end()};
}

/// Property: b is a nonzero cube and for every x outside {0, 1},
/// (c^4/b) * (x^q + x^4)/(x + x^2) landing in GF(2^m) forces x + x^2 to be a
/// non-cube. Pairs with the property make f_{m-2} APN.
inline bool satisfies_pm2(const Field& F, FieldElement b, FieldElement c) {
    const unsigned m = F.m();
    if (b.is_zero() || c.is_zero() || !b.is_cube()) return false;
    const std::uint32_t c4b = F.mul(F.pow(c.bits(), 4), F.inv(b.bits()));
    const std::uint32_t q = F.q();
    for (std::uint32_t x = 2; x < F.size(); ++x) {
        const std::uint32_t xx2 = x ^ F.mul(x, x);
        const std::uint32_t num = F.pow(x, q) ^ F.pow(x, 4);
        const std::uint32_t v = F.mul(c4b, F.mul(num, F.inv(xx2)));
        if (F.in_subfield(v, m) && F.is_cube(xx2)) return false;
    }
    return true;
}

struct Pm2Hit {
    std::uint32_t b = 0, c = 0;
    bool apn = false;
};

/// Scans candidate pairs built as c = (u*b)^(1/4) for b in b_set (nonzero
/// cubes) and u in u_set; returns the pairs that satisfy the property, each
/// APN-verified via f_{m-2}.
inline std::vector<Pm2Hit> search_pm2(std::shared_ptr<const Field> f,
                                      const std::vector<std::uint32_t>& b_set,
                                      const std::vector<std::uint32_t>& u_set) {
    const Field& F = *f;
    const unsigned m = F.m();
    if (m % 2 == 0) throw OddnessViolation("m must be odd");
    std::vector<Pm2Hit> hits;
    for (std::uint32_t b : b_set) {
        if (b == 0 || !F.is_cube(b)) continue;
        for (std::uint32_t u : u_set) {
            const std::uint32_t c = F.frob(F.mul(u, b), F.n() - 2); // fourth root
            if (c == 0 || !satisfies_pm2(F, F.elem(b), F.elem(c))) continue;
            Pm2Hit h;
            h.b = b;
            h.c = c;
            h.apn = build_fs(f, m - 2, F.primitive(), F.elem(b), F.elem(c)).is_apn();
            hits.push_back(h);
        }
    }
    std::sort(hits.begin(), hits.end(), [](const Pm2Hit& x, const Pm2Hit& y) {
        return x.b != y.b ? x.b < y.b : x.c < y.c;
    });
    return hits;
}

// ---- params dispatch ----

inline VBF build_from_params(std::shared_ptr<const Field> f, const ConstructionParams& p) {
    const Field& F = *f;
    if (p.field_n && p.field_n != F.n())
        throw FieldMismatch("params field_n does not match field");
    auto ce = [&](const std::string& k) { return F.elem(p.get_coeff(k)); };
    switch (p.family) {
    case Family::TraceComposed: {
        std::vector<VBF::Term> ft, gt;
        for (auto& [c, e] : p.f_terms) ft.emplace_back(F.elem(c), e);
        for (auto& [c, e] : p.g_terms) gt.emplace_back(F.elem(c), e);
        return build_trace_composed(std::move(f), ft, gt, ce("a"), p);
    }
    case Family::Fs:
        return build_fs(std::move(f), static_cast<unsigned>(p.get_int("s")), ce("a"), ce("b"),
                        ce("c"));
    case Family::Hexanomial:
        return build_hexanomial(std::move(f), static_cast<unsigned>(p.get_int("i")),
                                static_cast<unsigned>(p.get_int("s")), ce("b"), ce("c"), ce("g"),
                                ce("e"), ce("a"));
    case Family::CorollaryH:
        return build_corollary(std::move(f), static_cast<int>(p.get_int("variant")), ce("a"),
                               ce("b"));
    case Family::F14Quadrinomial:
        return build_f14(std::move(f), static_cast<unsigned>(p.get_int("s")));
    case Family::PowerMap: {
        FieldElement c = p.coeffs.count("coeff") ? ce("coeff") : F.one();
        return VBF::from_terms(std::move(f), {{c, p.get_int("exponent")}}, p);
    }
    case Family::F3Instance:
        return build_f3_instance(std::move(f), static_cast<int>(p.get_int("which")));
    case Family::F4:
        return build_f4(std::move(f), ce("a"));
    case Family::F12Taniguchi:
        return build_f12_taniguchi(std::move(f), static_cast<unsigned>(p.get_int("i")), ce("alpha"),
                                   ce("beta"), ce("u"));
    case Family::Sporadic:
        return build_sporadic(std::move(f), p.sporadic_name());
    }
    throw Error("unhandled family");
}

} // namespace apnwb
