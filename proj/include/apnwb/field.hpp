#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"

namespace apnwb {

class Field;

/// Value of a specific GF(2^n): n-bit mask in the polynomial basis plus a
/// handle to its field. Operands from fields with a different (n, modulus)
/// pair are rejected.
class FieldElement {
public:
    FieldElement() : f_(nullptr), v_(0) {}
    FieldElement(const Field* f, std::uint32_t v) : f_(f), v_(v) {}

    std::uint32_t bits() const { return v_; }
    const Field& field() const { return *f_; }
    bool is_zero() const { return v_ == 0; }

    FieldElement operator+(FieldElement o) const;
    FieldElement operator-(FieldElement o) const { return *this + o; }
    FieldElement operator*(FieldElement o) const;
    FieldElement operator/(FieldElement o) const;
    FieldElement pow(std::uint64_t e) const;
    FieldElement sq() const { return *this * *this; }
    FieldElement inv() const;
    FieldElement frob(unsigned k) const; // x^(2^k)
    FieldElement trace_to(unsigned d) const;
    unsigned abs_trace() const;
    bool is_cube() const;
    bool in_subfield(unsigned d) const;

    bool operator==(FieldElement o) const;
    bool operator!=(FieldElement o) const { return !(*this == o); }
    bool operator<(FieldElement o) const { return v_ < o.v_; } // bit-value order

private:
    const Field* f_;
    std::uint32_t v_;
};

namespace gf2poly {

// polynomials over GF(2) as bit masks, degree <= 40 throughout
inline int deg(std::uint64_t p) { return p ? 63 - __builtin_clzll(p) : -1; }

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t f) {
    std::uint64_t r = 0;
    while (b) {
        if (b & 1) r ^= a;
        a <<= 1;
        b >>= 1;
    }
    const int df = deg(f);
    for (int d = deg(r); d >= df; d = deg(r)) r ^= f << (d - df);
    return r;
}

inline std::uint64_t mod(std::uint64_t a, std::uint64_t f) {
    const int df = deg(f);
    for (int d = deg(a); d >= df; d = deg(a)) a ^= f << (d - df);
    return a;
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t f) {
    std::uint64_t r = 1;
    a = mod(a, f);
    while (e) {
        if (e & 1) r = mulmod(r, a, f);
        a = mulmod(a, a, f);
        e >>= 1;
    }
    return r;
}

inline std::uint64_t gcd(std::uint64_t a, std::uint64_t b) {
    while (b) {
        a = mod(a, b);
        std::swap(a, b);
    }
    return a;
}

/// Irreducibility over GF(2): x^(2^n) == x mod f, and f shares no root with
/// any GF(2^d) for proper divisors d (gcd with x^(2^d) + x is trivial).
inline bool irreducible(std::uint64_t f) {
    const int n = deg(f);
    if (n < 1 || !(f & 1)) return n == 1 && (f & 1);
    if (powmod(2, std::uint64_t(1) << n, f) != mod(2, f)) return false;
    for (int d = 1; d < n; ++d) {
        if (n % d) continue;
        std::uint64_t g = powmod(2, std::uint64_t(1) << d, f) ^ 2;
        if (gcd(f, g) != 1) return false;
    }
    return true;
}

} // namespace gf2poly

/// GF(2^n), 2 <= n <= 20, fixed irreducible modulus, immutable after
/// construction. Multiplicative structure goes through log/antilog tables
/// keyed to the smallest-bit-value generator; tables are built eagerly for
/// n <= 16 and on first multiplicative use for n in {18, 20}.
class Field {
public:
    static constexpr unsigned kMaxWidth = 20;

    /// Default moduli, one per width (index = n). These are the Conway
    /// polynomials; data/conway_moduli.txt carries the same masks and the
    /// test suite re-derives them from scratch.
    static constexpr std::array<std::uint32_t, kMaxWidth + 1> kDefaultModulus = {
        0,        0x3,      0x7,     0xB,     0x13,    0x25,     0x5B,
        0x83,     0x11D,    0x211,   0x46F,   0x805,   0x10EB,   0x201B,
        0x40A9,   0x8035,   0x1002D, 0x20009, 0x41403, 0x80027,  0x1006F3,
    };

    static std::shared_ptr<const Field> make(unsigned n,
                                             std::optional<std::uint32_t> modulus = {}) {
        if (n < 2 || n > kMaxWidth)
            throw UnsupportedWidth("field width must be in [2, 20], got " + std::to_string(n));
        std::uint32_t mod = modulus.value_or(kDefaultModulus[n]);
        if (gf2poly::deg(mod) != static_cast<int>(n))
            throw UnsupportedWidth("modulus degree " + std::to_string(gf2poly::deg(mod)) +
                                   " does not match n=" + std::to_string(n));
        if (!gf2poly::irreducible(mod))
            throw ReducibleModulus("modulus is reducible over GF(2)");
        return std::shared_ptr<const Field>(new Field(n, mod));
    }

    unsigned n() const { return n_; }
    std::uint32_t modulus() const { return mod_; }
    std::uint32_t size() const { return std::uint32_t(1) << n_; }
    std::uint32_t order() const { return size() - 1; }
    bool same(const Field& o) const { return n_ == o.n_ && mod_ == o.mod_; }

    /// n = 2m decomposition; q = 2^m.
    unsigned m() const {
        if (n_ % 2) throw OddExtension("n = " + std::to_string(n_) + " is odd");
        return n_ / 2;
    }
    std::uint32_t q() const { return std::uint32_t(1) << m(); }

    FieldElement elem(std::uint32_t bits) const {
        if (bits >= size()) throw Error("element bits out of range");
        return FieldElement(this, bits);
    }
    FieldElement zero() const { return FieldElement(this, 0); }
    FieldElement one() const { return FieldElement(this, 1); }
    FieldElement primitive() const { return FieldElement(this, gen_); }

    // ---- raw-bits arithmetic ----

    static std::uint32_t add(std::uint32_t a, std::uint32_t b) { return a ^ b; }

    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
        if (a == 0 || b == 0) return 0;
        ensure_tables();
        return alog_[log_[a] + log_[b]];
    }

    std::uint32_t inv(std::uint32_t a) const {
        if (a == 0) throw DivisionByZero("inv(0)");
        ensure_tables();
        return alog_[order() - log_[a]];
    }

    /// a^e with e any non-negative 64-bit integer; the exponent is reduced
    /// mod 2^n - 1 for nonzero a, and 0^0 = 1.
    std::uint32_t pow(std::uint32_t a, std::uint64_t e) const {
        if (a == 0) return e == 0 ? 1 : 0;
        if (a == 1) return 1;
        ensure_tables();
        const std::uint64_t r = e % order();
        return alog_[(std::uint64_t(log_[a]) * r) % order()];
    }

    std::uint32_t frob(std::uint32_t a, unsigned k) const { // a^(2^k)
        if (a == 0 || a == 1) return a;
        ensure_tables();
        return alog_[(std::uint64_t(log_[a]) << (k % n_)) % order()];
    }

    std::uint32_t dlog(std::uint32_t a) const {
        if (a == 0) throw ZeroInput("dlog(0)");
        ensure_tables();
        return log_[a];
    }

    /// Relative trace onto GF(2^d): sum of a^(2^(j*d)); lands in GF(2^d).
    std::uint32_t trace_rel(std::uint32_t a, unsigned d) const {
        if (d == 0 || n_ % d) throw NotADivisor(std::to_string(d) + " does not divide n");
        std::uint32_t acc = 0;
        for (unsigned j = 0; j < n_ / d; ++j) acc ^= frob(a, j * d);
        return acc;
    }

    unsigned abs_trace(std::uint32_t a) const { return trace_rel(a, 1); }

    bool in_subfield(std::uint32_t a, unsigned d) const {
        if (d == 0 || n_ % d) throw NotADivisor(std::to_string(d) + " does not divide n");
        if (a == 0 || d == n_) return true;
        ensure_tables();
        const std::uint32_t step = order() / ((std::uint32_t(1) << d) - 1);
        return log_[a] % step == 0;
    }

    /// Membership in the index-3 power residue class. Every element of an
    /// odd-degree field is a cube (gcd(3, 2^n - 1) = 1 there).
    bool is_cube(std::uint32_t a) const {
        if (a == 0 || order() % 3 != 0) return true;
        ensure_tables();
        return log_[a] % 3 == 0;
    }

    std::uint32_t sqrt(std::uint32_t a) const { return frob(a, n_ - 1); }

    // element parsing/formatting: "z^k" (primitive-element power), "0x.." or
    // decimal bit masks
    FieldElement parse_element(const std::string& s) const;
    std::string format_element(std::uint32_t a) const {
        if (a == 0) return "0";
        if (a == 1) return "1";
        return "z^" + std::to_string(dlog(a));
    }

private:
    Field(unsigned n, std::uint32_t mod) : n_(n), mod_(mod) {
        gen_ = find_generator();
        if (n_ <= 16) ensure_tables();
    }

    std::uint32_t clmul_mod(std::uint32_t a, std::uint32_t b) const {
        std::uint64_t r = 0, aa = a;
        while (b) {
            if (b & 1) r ^= aa;
            aa <<= 1;
            b >>= 1;
        }
        return static_cast<std::uint32_t>(gf2poly::mod(r, mod_));
    }

    std::uint32_t clmul_pow(std::uint32_t a, std::uint64_t e) const {
        std::uint32_t r = 1;
        while (e) {
            if (e & 1) r = clmul_mod(r, a);
            a = clmul_mod(a, a);
            e >>= 1;
        }
        return r;
    }

    static std::vector<std::uint32_t> prime_factors(std::uint32_t v) {
        std::vector<std::uint32_t> fs;
        for (std::uint32_t d = 2; std::uint64_t(d) * d <= v; ++d)
            if (v % d == 0) {
                fs.push_back(d);
                while (v % d == 0) v /= d;
            }
        if (v > 1) fs.push_back(v);
        return fs;
    }

    /// Smallest-bit-value element of full multiplicative order.
    std::uint32_t find_generator() const {
        const auto fs = prime_factors(order());
        for (std::uint32_t c = 2; c < size(); ++c) {
            bool ok = true;
            for (std::uint32_t p : fs)
                if (clmul_pow(c, order() / p) == 1) {
                    ok = false;
                    break;
                }
            if (ok) return c;
        }
        throw Error("no generator found"); // unreachable for irreducible modulus
    }

    void ensure_tables() const {
        if (tables_ready_.load(std::memory_order_acquire)) return;
        std::call_once(tables_once_, [this] {
            log_.assign(size(), 0);
            alog_.assign(2 * std::size_t(order()), 0);
            std::uint32_t v = 1;
            for (std::uint32_t i = 0; i < order(); ++i) {
                alog_[i] = v;
                alog_[i + order()] = v;
                log_[v] = i;
                v = clmul_mod(v, gen_);
            }
            tables_ready_.store(true, std::memory_order_release);
        });
    }

    unsigned n_;
    std::uint32_t mod_;
    std::uint32_t gen_;
    mutable std::vector<std::uint32_t> log_, alog_;
    mutable std::once_flag tables_once_;
    mutable std::atomic<bool> tables_ready_{false};
};

// ---- FieldElement member definitions ----

namespace detail {
inline const Field& check_same(const Field* a, const Field* b) {
    if (a == b) return *a;
    if (!a || !b || !a->same(*b)) throw FieldMismatch("operands from different fields");
    return *a;
}
} // namespace detail

inline FieldElement FieldElement::operator+(FieldElement o) const {
    const Field& f = detail::check_same(f_, o.f_);
    return FieldElement(&f, Field::add(v_, o.v_));
}
inline FieldElement FieldElement::operator*(FieldElement o) const {
    const Field& f = detail::check_same(f_, o.f_);
    return FieldElement(&f, f.mul(v_, o.v_));
}
inline FieldElement FieldElement::operator/(FieldElement o) const {
    const Field& f = detail::check_same(f_, o.f_);
    return FieldElement(&f, f.mul(v_, f.inv(o.v_)));
}
inline FieldElement FieldElement::pow(std::uint64_t e) const {
    return FieldElement(f_, f_->pow(v_, e));
}
inline FieldElement FieldElement::inv() const { return FieldElement(f_, f_->inv(v_)); }
inline FieldElement FieldElement::frob(unsigned k) const { return FieldElement(f_, f_->frob(v_, k)); }
inline FieldElement FieldElement::trace_to(unsigned d) const {
    return FieldElement(f_, f_->trace_rel(v_, d));
}
inline unsigned FieldElement::abs_trace() const { return f_->abs_trace(v_); }
inline bool FieldElement::is_cube() const { return f_->is_cube(v_); }
inline bool FieldElement::in_subfield(unsigned d) const { return f_->in_subfield(v_, d); }
inline bool FieldElement::operator==(FieldElement o) const {
    detail::check_same(f_, o.f_);
    return v_ == o.v_;
}

inline FieldElement Field::parse_element(const std::string& s) const {
    if (s.empty()) throw ParseError("empty element literal");
    try {
        if (s[0] == 'z' || s[0] == 'Z') {
            std::uint64_t k = 0;
            if (s.size() > 1) {
                if (s[1] != '^') throw ParseError("bad element literal: " + s);
                k = std::stoull(s.substr(2));
            } else {
                k = 1;
            }
            return FieldElement(this, pow(gen_, k));
        }
        std::uint64_t v = (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X'))
                              ? std::stoull(s.substr(2), nullptr, 16)
                              : std::stoull(s, nullptr, 10);
        if (v >= size()) throw ParseError("element mask out of range: " + s);
        return FieldElement(this, static_cast<std::uint32_t>(v));
    } catch (const std::invalid_argument&) {
        throw ParseError("bad element literal: " + s);
    } catch (const std::out_of_range&) {
        throw ParseError("bad element literal: " + s);
    }
}

// ---- structural helpers on elements ----

/// Unique factorization u = v*k of a nonzero element of GF(2^(2m)) with
/// v^(q+1) = 1 and k in GF(2^m)*: k is the square root of the norm u^(q+1),
/// taken inside the subfield as u^(2^(m-1)(q+1)).
inline std::pair<FieldElement, FieldElement> polar_decompose(FieldElement u) {
    const Field& f = u.field();
    const unsigned m = f.m(); // throws OddExtension for odd n
    if (u.is_zero()) throw ZeroInput("polar_decompose(0)");
    FieldElement k = u.pow(std::uint64_t(f.q() + 1) << (m - 1));
    FieldElement v = u / k;
    return {v, k};
}

/// All t with t^2 + a*t + b = 0, found by solving the GF(2)-linear system for
/// the map t -> t^2 + a*t. Returns 0 or 2 solutions (sorted by bit value);
/// a = 0 degenerates to square-root extraction with exactly one solution.
inline std::vector<FieldElement> solve_affine_p2(FieldElement a, FieldElement b) {
    const Field& f = a.field();
    detail::check_same(&f, &b.field());
    const unsigned n = f.n();
    if (a.is_zero()) return {FieldElement(&f, f.sqrt(b.bits()))};

    // rows[i] = bits of the i-th output coordinate of t -> t^2 + a*t over the
    // polynomial basis, augmented with b in bit n
    std::vector<std::uint64_t> rows(n, 0);
    for (unsigned j = 0; j < n; ++j) {
        const std::uint32_t e = std::uint32_t(1) << j;
        const std::uint32_t img = f.mul(e, e) ^ f.mul(a.bits(), e);
        for (unsigned i = 0; i < n; ++i)
            if ((img >> i) & 1) rows[i] |= std::uint64_t(1) << j;
    }
    for (unsigned i = 0; i < n; ++i)
        if ((b.bits() >> i) & 1) rows[i] |= std::uint64_t(1) << n;

    std::uint32_t t0 = 0;
    unsigned r = 0;
    std::vector<int> pivot_of_row;
    for (unsigned c = 0; c < n && r < n; ++c) {
        unsigned p = r;
        while (p < n && !((rows[p] >> c) & 1)) ++p;
        if (p == n) continue;
        std::swap(rows[r], rows[p]);
        for (unsigned i = 0; i < n; ++i)
            if (i != r && ((rows[i] >> c) & 1)) rows[i] ^= rows[r];
        pivot_of_row.push_back(static_cast<int>(c));
        ++r;
    }
    for (unsigned i = r; i < n; ++i)
        if ((rows[i] >> n) & 1) return {}; // inconsistent: no solutions
    for (unsigned i = 0; i < r; ++i)
        if ((rows[i] >> n) & 1) t0 |= std::uint32_t(1) << pivot_of_row[i];

    // kernel of t -> t^2 + a*t is exactly {0, a}
    std::uint32_t t1 = t0 ^ a.bits();
    if (t1 < t0) std::swap(t0, t1);
    return {FieldElement(&f, t0), FieldElement(&f, t1)};
}

/// Root census of x^3 + x + a over GF(2^n), n = 2m, decided without brute
/// force: one root iff Tr(1/a^2) = 1; otherwise the cube-ness of a solution
/// t1 of t^2 + a*t + 1 = 0 separates zero roots (non-cube) from three (cube).
struct WilliamsResult {
    enum Class { NoRoots = 0, OneRoot = 1, ThreeRoots = 3 } cls;
    std::optional<FieldElement> t1;
    unsigned root_count() const { return static_cast<unsigned>(cls); }
};

inline WilliamsResult williams_classify(FieldElement a) {
    const Field& f = a.field();
    (void)f.m(); // n = 2m required
    if (a.is_zero()) throw ZeroInput("williams_classify(0)");
    FieldElement ia2 = (a * a).inv();
    if (ia2.abs_trace() == 1) return {WilliamsResult::OneRoot, std::nullopt};
    auto sols = solve_affine_p2(a, f.one());
    // Tr(1/a^2) = 0 guarantees solvability; both roots share cube-ness
    FieldElement t1 = sols.front();
    return {t1.is_cube() ? WilliamsResult::ThreeRoots : WilliamsResult::NoRoots, t1};
}

} // namespace apnwb
