#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <utility>
#include <vector>

#include "field.hpp"
#include "parallel.hpp"
#include "params.hpp"

namespace apnwb {

/// Multiset of non-negative values (value -> multiplicity). Used both for
/// differential spectra (solution counts over pairs (a != 0, b)) and extended
/// Walsh spectra (|W| over all (a, b != 0)).
struct Spectrum {
    std::map<std::uint32_t, std::uint64_t> entries;

    bool operator==(const Spectrum&) const = default;

    std::uint64_t total() const {
        std::uint64_t s = 0;
        for (auto& [k, v] : entries) s += v;
        return s;
    }
    std::uint32_t max_value() const {
        std::uint32_t m = 0;
        for (auto& [k, v] : entries)
            if (v) m = std::max(m, k);
        return m;
    }
    std::uint64_t count(std::uint32_t key) const {
        auto it = entries.find(key);
        return it == entries.end() ? 0 : it->second;
    }
    void merge(const Spectrum& o) {
        for (auto& [k, v] : o.entries) entries[k] += v;
    }
};

/// An (n,n)-function as a dense truth table of 2^n field elements. The table
/// is the single internal representation; univariate polynomials are only a
/// construction input. Immutable after construction.
class VBF {
public:
    using Term = std::pair<FieldElement, std::uint64_t>;

    VBF(std::shared_ptr<const Field> f, std::vector<std::uint32_t> table,
        std::optional<ConstructionParams> prov = {})
        : f_(std::move(f)), t_(std::move(table)), prov_(std::move(prov)) {
        if (t_.size() != f_->size()) throw Error("truth table length != 2^n");
        for (std::uint32_t v : t_)
            if (v >= f_->size()) throw Error("truth table entry out of field range");
    }

    /// Tabulates sum of coeff * x^exp. 0^0 counts as 1 so exponent 0 yields
    /// the constant term.
    static VBF from_terms(std::shared_ptr<const Field> f, const std::vector<Term>& terms,
                          std::optional<ConstructionParams> prov = {}) {
        const Field& F = *f;
        for (auto& [c, e] : terms) detail::check_same(&F, &c.field());
        std::vector<std::uint32_t> t(F.size(), 0);
        for (std::uint32_t x = 0; x < F.size(); ++x) {
            std::uint32_t acc = 0;
            for (auto& [c, e] : terms) acc ^= F.mul(c.bits(), F.pow(x, e));
            t[x] = acc;
        }
        return VBF(std::move(f), std::move(t), std::move(prov));
    }

    template <typename Fn>
    static VBF from_eval(std::shared_ptr<const Field> f, Fn&& eval,
                         std::optional<ConstructionParams> prov = {}) {
        const Field& F = *f;
        std::vector<std::uint32_t> t(F.size());
        for (std::uint32_t x = 0; x < F.size(); ++x)
            t[x] = eval(FieldElement(&F, x)).bits();
        return VBF(std::move(f), std::move(t), std::move(prov));
    }

    const Field& field() const { return *f_; }
    const std::shared_ptr<const Field>& field_ptr() const { return f_; }
    const std::vector<std::uint32_t>& table() const { return t_; }
    const std::optional<ConstructionParams>& provenance() const { return prov_; }
    std::uint32_t operator()(std::uint32_t x) const { return t_[x]; }
    FieldElement at(FieldElement x) const { return FieldElement(f_.get(), t_[x.bits()]); }

    bool operator==(const VBF& o) const { return f_->same(*o.f_) && t_ == o.t_; }

    /// D_d f : x -> f(x) + f(x+d).
    VBF derivative(FieldElement d) const {
        detail::check_same(f_.get(), &d.field());
        std::vector<std::uint32_t> t(t_.size());
        for (std::uint32_t x = 0; x < t_.size(); ++x) t[x] = t_[x] ^ t_[x ^ d.bits()];
        return VBF(f_, std::move(t));
    }

    /// x -> f(dx) + f(dx + d) + f(d); for quadratic f this is GF(2)-linear in
    /// x after the substitution y = dx and vanishes at x = 0, 1.
    VBF delta_dx(FieldElement d) const {
        detail::check_same(f_.get(), &d.field());
        const Field& F = *f_;
        std::vector<std::uint32_t> t(t_.size());
        const std::uint32_t fd = t_[d.bits()];
        for (std::uint32_t x = 0; x < t_.size(); ++x) {
            const std::uint32_t dx = F.mul(d.bits(), x);
            t[x] = t_[dx] ^ t_[dx ^ d.bits()] ^ fd;
        }
        return VBF(f_, std::move(t));
    }

    /// Solution-count multiset over all pairs (d != 0, b): how many b are hit
    /// 0, 2, 4, ... times by x -> f(x)+f(x+d). O(2^(2n)); the outer loop over
    /// d is partitioned across workers with private counters.
    Spectrum differential_spectrum() const {
        const std::uint32_t N = f_->size();
        const std::uint32_t* t = t_.data();
        std::vector<Spectrum> parts(par::workers());
        par::for_range(1, N, [&](unsigned w, std::uint64_t lo, std::uint64_t hi) {
            DiffCounter ctr(N);
            Spectrum& local = parts[w];
            for (std::uint64_t d = lo; d < hi; ++d) {
                ctr.begin_direction();
                for (std::uint32_t x = 0; x < N; ++x) ctr.hit(t[x] ^ t[x ^ (std::uint32_t)d]);
                for (std::uint32_t v : ctr.touched) local.entries[ctr.count(v)]++;
                local.entries[0] += N - ctr.touched.size();
            }
        });
        Spectrum out;
        for (auto& p : parts) out.merge(p);
        return out;
    }

    unsigned differential_uniformity() const { return differential_spectrum().max_value(); }

    /// True iff every nontrivial derivative hits no value more than twice.
    /// Short-circuits on the first count exceeding 2.
    bool is_apn() const {
        const std::uint32_t N = f_->size();
        const std::uint32_t* t = t_.data();
        std::atomic<bool> fail{false};
        par::for_range(1, N, [&](unsigned, std::uint64_t lo, std::uint64_t hi) {
            DiffCounter ctr(N);
            for (std::uint64_t d = lo; d < hi && !fail.load(std::memory_order_relaxed); ++d) {
                ctr.begin_direction();
                for (std::uint32_t x = 0; x < N; ++x)
                    if (ctr.hit(t[x] ^ t[x ^ (std::uint32_t)d]) > 2) {
                        fail.store(true, std::memory_order_relaxed);
                        break;
                    }
            }
        });
        return !fail.load();
    }

    /// Multiset of |W(a,b)| over all a and b != 0, one in-place fast
    /// transform of the +-1 sign vector per component. Components are
    /// enumerated as nonzero output masks; the mask <-> b relabeling is a
    /// bijection so the multiset is unchanged.
    Spectrum walsh_spectrum_extended() const {
        const std::uint32_t N = f_->size();
        const unsigned n = f_->n();
        std::vector<Spectrum> parts(par::workers());
        par::for_range(1, N, [&](unsigned w, std::uint64_t lo, std::uint64_t hi) {
            std::vector<std::int32_t> sv(N);
            Spectrum& local = parts[w];
            for (std::uint64_t mask = lo; mask < hi; ++mask) {
                for (std::uint32_t x = 0; x < N; ++x)
                    sv[x] = (__builtin_popcount((std::uint32_t)mask & t_[x]) & 1) ? -1 : 1;
                fwht(sv.data(), n);
                for (std::uint32_t a = 0; a < N; ++a)
                    local.entries[std::uint32_t(sv[a] < 0 ? -sv[a] : sv[a])]++;
            }
        });
        Spectrum out;
        for (auto& p : parts) out.merge(p);
        return out;
    }

    /// Largest binary weight of an exponent with nonzero coefficient in the
    /// univariate representation: Moebius transform of the packed table, max
    /// popcount of a surviving mask. Zero function has degree 0.
    unsigned algebraic_degree() const {
        std::vector<std::uint32_t> a(t_);
        const std::uint32_t N = f_->size();
        for (unsigned j = 0; j < f_->n(); ++j) {
            const std::uint32_t bit = std::uint32_t(1) << j;
            for (std::uint32_t x = 0; x < N; ++x)
                if (x & bit) a[x] ^= a[x ^ bit];
        }
        unsigned deg = 0;
        for (std::uint32_t mask = 0; mask < N; ++mask)
            if (a[mask]) deg = std::max<unsigned>(deg, __builtin_popcount(mask));
        return deg;
    }

private:
    // reusable per-direction counter; reset by generation stamp, not memset
    struct DiffCounter {
        explicit DiffCounter(std::uint32_t N) : cnt(N, 0), stamp(N, 0) {
            touched.reserve(N);
        }
        void begin_direction() {
            ++gen;
            touched.clear();
        }
        std::uint16_t hit(std::uint32_t v) {
            if (stamp[v] != gen) {
                stamp[v] = gen;
                cnt[v] = 0;
                touched.push_back(v);
            }
            return ++cnt[v];
        }
        std::uint16_t count(std::uint32_t v) const { return cnt[v]; }
        std::vector<std::uint16_t> cnt;
        std::vector<std::uint32_t> stamp;
        std::vector<std::uint32_t> touched;
        std::uint32_t gen = 0;
    };

    static void fwht(std::int32_t* v, unsigned n) {
        const std::uint32_t N = std::uint32_t(1) << n;
        for (std::uint32_t h = 1; h < N; h <<= 1)
            for (std::uint32_t i = 0; i < N; i += h << 1)
                for (std::uint32_t j = i; j < i + h; ++j) {
                    const std::int32_t x = v[j], y = v[j + h];
                    v[j] = x + y;
                    v[j + h] = x - y;
                }
    }

    std::shared_ptr<const Field> f_;
    std::vector<std::uint32_t> t_;
    std::optional<ConstructionParams> prov_;
};

enum class MatrixFormat { Plain, Magma };

/// Writes the (2n+1) x 2^n GF(2) generator matrix [all-ones; bits of x; bits
/// of f(x)] with the frozen column order 0, 1, z, z^2, ..., z^(2^n - 2).
/// External tools must reproduce this enumeration bit-exactly.
inline void code_matrix_export(const VBF& f, std::ostream& os, MatrixFormat fmt) {
    const Field& F = f.field();
    const std::uint32_t N = F.size();
    const unsigned n = F.n();

    std::vector<std::uint32_t> cols(N);
    cols[0] = 0;
    std::uint32_t p = 1;
    for (std::uint32_t j = 1; j < N; ++j) {
        cols[j] = p;
        p = F.mul(p, F.primitive().bits());
    }

    auto row_bit = [&](unsigned r, std::uint32_t j) -> unsigned {
        if (r == 0) return 1;
        if (r <= n) return (cols[j] >> (r - 1)) & 1;
        return (f(cols[j]) >> (r - 1 - n)) & 1;
    };

    const unsigned k = 2 * n + 1;
    if (fmt == MatrixFormat::Plain) {
        os << N << ' ' << k << '\n';
        for (unsigned r = 0; r < k; ++r) {
            for (std::uint32_t j = 0; j < N; ++j) os << char('0' + row_bit(r, j));
            os << '\n';
        }
    } else {
        os << "Matrix(GF(2), " << k << ", " << N << ", [\n";
        for (unsigned r = 0; r < k; ++r) {
            for (std::uint32_t j = 0; j < N; ++j) {
                os << row_bit(r, j);
                if (r + 1 != k || j + 1 != N) os << ',';
            }
            os << '\n';
        }
        os << "]);\n";
    }
    if (!os) throw IoError("failed to write code matrix");
}

} // namespace apnwb
