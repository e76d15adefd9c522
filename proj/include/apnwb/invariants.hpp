#pragma once

#include <cstdint>
#include <future>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "field.hpp"
#include "vbf.hpp"

namespace apnwb {

/// CCZ-invariant components of one function. Equal fingerprints are
/// necessary, never sufficient, for CCZ-equivalence.
struct Fingerprint {
    unsigned n = 0;
    Spectrum differential;
    Spectrum extended_walsh;
    unsigned algebraic_degree = 0;
    std::optional<std::uint64_t> gamma_rank;

    bool operator==(const Fingerprint&) const = default;
};

inline constexpr unsigned kGammaRankAutoMaxN = 6;
inline constexpr unsigned kGammaRankMaxN = 8;

/// GF(2)-rank of the 2^2n x 2^2n incidence matrix with entry[(a,b),(x,y)] = 1
/// iff y = b + f(x+a). Rows are generated on the fly and folded into a
/// pivot-indexed echelon basis, so only the basis is ever stored (worst case
/// ~512 MiB at n = 8).
inline std::uint64_t gamma_rank(const VBF& f) {
    const unsigned n = f.field().n();
    if (n > kGammaRankMaxN)
        throw TooLarge("gamma rank limited to n <= 8 (2^16 x 2^16 bit matrix)");
    const std::uint32_t N = f.field().size();
    const std::uint32_t cols = N * N;
    const std::uint32_t words = (cols + 63) / 64;

    std::vector<std::vector<std::uint64_t>> basis;
    std::unordered_map<std::uint32_t, std::uint32_t> pivot_row; // pivot column -> basis index
    basis.reserve(1u << (2 * n - 2));
    pivot_row.reserve(1u << (2 * n - 2));

    std::vector<std::uint64_t> row(words);
    std::uint64_t rank = 0;
    for (std::uint32_t a = 0; a < N; ++a)
        for (std::uint32_t b = 0; b < N; ++b) {
            std::fill(row.begin(), row.end(), 0);
            for (std::uint32_t x = 0; x < N; ++x) {
                const std::uint32_t col = (x << n) | (b ^ f(x ^ a));
                row[col >> 6] |= std::uint64_t(1) << (col & 63);
            }
            std::uint32_t w = 0;
            while (w < words) {
                if (!row[w]) {
                    ++w;
                    continue;
                }
                const std::uint32_t pivot = (w << 6) | __builtin_ctzll(row[w]);
                auto it = pivot_row.find(pivot);
                if (it == pivot_row.end()) {
                    pivot_row.emplace(pivot, static_cast<std::uint32_t>(basis.size()));
                    basis.push_back(row);
                    ++rank;
                    break;
                }
                const auto& other = basis[it->second];
                for (std::uint32_t k = w; k < words; ++k) row[k] ^= other[k];
            }
        }
    return rank;
}

/// Assembles the invariant components; spectra run concurrently. Gamma rank
/// is included automatically for n <= 6 and on request up to n = 8.
inline Fingerprint fingerprint(const VBF& f, bool force_gamma_rank = false) {
    Fingerprint fp;
    fp.n = f.field().n();
    auto walsh = std::async(std::launch::async, [&] { return f.walsh_spectrum_extended(); });
    fp.differential = f.differential_spectrum();
    fp.algebraic_degree = f.algebraic_degree();
    fp.extended_walsh = walsh.get();
    if (fp.n <= kGammaRankAutoMaxN || (force_gamma_rank && fp.n <= kGammaRankMaxN))
        fp.gamma_rank = gamma_rank(f);
    return fp;
}

struct InvariantComparison {
    std::string name;
    bool same_differential = false;
    bool same_walsh = false;
    bool same_degree = false;
    std::optional<bool> same_gamma_rank;

    bool distinguished() const {
        return !same_differential || !same_walsh || !same_degree ||
               (same_gamma_rank && !*same_gamma_rank);
    }
    const char* verdict() const {
        return distinguished() ? "distinguished" : "indistinguishable by computed invariants";
    }
};

inline InvariantComparison compare_one(const std::string& name, const Fingerprint& a,
                                       const Fingerprint& b) {
    if (a.n != b.n) throw FieldMismatch("fingerprints over different widths");
    InvariantComparison cmp;
    cmp.name = name;
    cmp.same_differential = a.differential == b.differential;
    cmp.same_walsh = a.extended_walsh == b.extended_walsh;
    cmp.same_degree = a.algebraic_degree == b.algebraic_degree;
    if (a.gamma_rank && b.gamma_rank) cmp.same_gamma_rank = *a.gamma_rank == *b.gamma_rank;
    return cmp;
}

inline std::vector<InvariantComparison>
compare(const Fingerprint& f, const std::vector<std::pair<std::string, Fingerprint>>& catalog) {
    std::vector<InvariantComparison> out;
    out.reserve(catalog.size());
    for (auto& [name, cfp] : catalog) out.push_back(compare_one(name, f, cfp));
    return out;
}

inline std::vector<InvariantComparison>
compare(const VBF& f, const std::vector<std::pair<std::string, VBF>>& catalog) {
    Fingerprint fp = fingerprint(f);
    std::vector<InvariantComparison> out;
    out.reserve(catalog.size());
    for (auto& [name, g] : catalog) out.push_back(compare_one(name, fp, fingerprint(g)));
    return out;
}

// ---- extended-affine transformations (stability checks) ----

/// y = M x + c over GF(2); basis_images[j] = M e_j.
struct AffineMap {
    std::vector<std::uint32_t> basis_images;
    std::uint32_t constant = 0;

    std::uint32_t operator()(std::uint32_t x) const {
        std::uint32_t y = constant;
        for (std::uint32_t j = 0; x; ++j, x >>= 1)
            if (x & 1) y ^= basis_images[j];
        return y;
    }
};

inline bool linear_part_invertible(const AffineMap& L, unsigned n) {
    std::vector<std::uint32_t> rows(L.basis_images);
    unsigned rank = 0;
    for (unsigned c = 0; c < n; ++c) {
        unsigned p = rank;
        while (p < n && !((rows[p] >> c) & 1)) ++p;
        if (p == n) continue;
        std::swap(rows[rank], rows[p]);
        for (unsigned i = 0; i < n; ++i)
            if (i != rank && ((rows[i] >> c) & 1)) rows[i] ^= rows[rank];
        ++rank;
    }
    return rank == n;
}

inline AffineMap random_affine_map(unsigned n, std::mt19937_64& rng, bool require_invertible) {
    std::uniform_int_distribution<std::uint32_t> bits(0, (std::uint32_t(1) << n) - 1);
    AffineMap L;
    do {
        L.basis_images.assign(n, 0);
        for (auto& v : L.basis_images) v = bits(rng);
    } while (require_invertible && !linear_part_invertible(L, n));
    L.constant = bits(rng);
    return L;
}

/// F' = L2 o F o L1 + A with L1, L2 random affine permutations and A a random
/// affine map; every fingerprint component is invariant under this.
inline VBF random_ea_transform(const VBF& f, std::mt19937_64& rng) {
    const unsigned n = f.field().n();
    AffineMap L1 = random_affine_map(n, rng, true);
    AffineMap L2 = random_affine_map(n, rng, true);
    AffineMap A = random_affine_map(n, rng, false);
    std::vector<std::uint32_t> t(f.field().size());
    for (std::uint32_t x = 0; x < t.size(); ++x) t[x] = L2(f(L1(x))) ^ A(x);
    return VBF(f.field_ptr(), std::move(t));
}

} // namespace apnwb
