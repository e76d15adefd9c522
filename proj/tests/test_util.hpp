#pragma once

// Oracles kept independent of the library paths they check: schoolbook field
// arithmetic straight off the modulus, and a dense GF(2) rank.

#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

/// Shift-and-xor product mod the field polynomial; no tables involved.
inline std::uint32_t mul(std::uint32_t a, std::uint32_t b, std::uint32_t modulus, unsigned n) {
    std::uint64_t acc = 0, aa = a;
    while (b) {
        if (b & 1) acc ^= aa;
        aa <<= 1;
        b >>= 1;
    }
    for (int d = 63; d >= static_cast<int>(n); --d)
        if ((acc >> d) & 1) acc ^= std::uint64_t(modulus) << (d - n);
    return static_cast<std::uint32_t>(acc);
}

inline std::uint32_t pow(std::uint32_t a, std::uint64_t e, std::uint32_t modulus, unsigned n) {
    std::uint32_t r = 1;
    while (e) {
        if (e & 1) r = mul(r, a, modulus, n);
        a = mul(a, a, modulus, n);
        e >>= 1;
    }
    return r;
}

/// Dense row-reduction rank of a 0/1 matrix given as bit rows.
inline unsigned rank_gf2(std::vector<std::vector<std::uint64_t>> rows, std::size_t cols) {
    unsigned rank = 0;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
        const std::size_t w = c >> 6;
        const std::uint64_t bit = std::uint64_t(1) << (c & 63);
        std::size_t p = r;
        while (p < rows.size() && !(rows[p][w] & bit)) ++p;
        if (p == rows.size()) continue;
        std::swap(rows[r], rows[p]);
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (i != r && (rows[i][w] & bit))
                for (std::size_t k = 0; k < rows[i].size(); ++k) rows[i][k] ^= rows[r][k];
        ++r;
        ++rank;
    }
    return rank;
}

} // namespace oracle
