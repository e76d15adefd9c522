#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace apnwb {

/// Families a function can be built from. Tags name the construction shape;
/// coefficient slots live in the maps below.
enum class Family {
    TraceComposed,   // a*Tr(F(x)) + a^q*Tr(G(x)) with explicit term lists
    Fs,              // a*Tr(b x^3) + a^q*Tr(c x^(2^s+1))
    Hexanomial,      // a*Tr(b x^(2^i+1) + c x^(2^(i+m)+1)) + a^q*Tr(g x^(2^s+1) + e x^(2^(s+m)+1))
    CorollaryH,      // hexanomial specialization: i=1, c=0, s=2, (g,e) per variant
    F14Quadrinomial, // x^3 + w x^(2^s+1) + w^2 x^(3q) + x^((2^s+1)q)
    PowerMap,        // coeff * x^exponent
    F3Instance,      // the two fixed GF(2^10) hexanomial instances
    F4,              // x^3 + a^-1 * Tr_1(a^3 x^9)
    F12Taniguchi,    // bivariate-style quadrinomial over (x, x^q)
    Sporadic,        // named one-off GF(2^10) instances
};

inline const char* family_name(Family f) {
    switch (f) {
    case Family::TraceComposed: return "trace_composed";
    case Family::Fs: return "fs";
    case Family::Hexanomial: return "hexanomial";
    case Family::CorollaryH: return "corollary_h";
    case Family::F14Quadrinomial: return "f14_quadrinomial";
    case Family::PowerMap: return "power_map";
    case Family::F3Instance: return "f3_instance";
    case Family::F4: return "f4";
    case Family::F12Taniguchi: return "f12_taniguchi";
    case Family::Sporadic: return "sporadic";
    }
    return "?";
}

inline Family family_from_name(const std::string& s) {
    for (Family f : {Family::TraceComposed, Family::Fs, Family::Hexanomial, Family::CorollaryH,
                     Family::F14Quadrinomial, Family::PowerMap, Family::F3Instance, Family::F4,
                     Family::F12Taniguchi, Family::Sporadic})
        if (s == family_name(f)) return f;
    throw ParseError("unknown family: " + s);
}

/// Named construction recipe: family tag + coefficient slots. Element slots
/// are stored as bit masks of the target field; integer slots carry s, i,
/// variant indices and power-map exponents. Term lists are only used by
/// TraceComposed.
struct ConstructionParams {
    Family family = Family::PowerMap;
    unsigned field_n = 0;
    std::map<std::string, std::uint64_t> ints;
    std::map<std::string, std::uint32_t> coeffs;
    std::vector<std::pair<std::uint32_t, std::uint64_t>> f_terms, g_terms;

    std::uint64_t get_int(const std::string& k) const {
        auto it = ints.find(k);
        if (it == ints.end()) throw ParseError("missing integer slot: " + k);
        return it->second;
    }
    std::uint32_t get_coeff(const std::string& k) const {
        auto it = coeffs.find(k);
        if (it == coeffs.end()) throw ParseError("missing coefficient slot: " + k);
        return it->second;
    }
    std::string sporadic_name() const {
        auto it = ints.find("which");
        if (it == ints.end()) throw ParseError("sporadic params need a 'name'");
        switch (it->second) {
        case 0: return "B";
        case 1: return "f3_z11";
        case 2: return "example1";
        }
        throw ParseError("unknown sporadic index");
    }
};

} // namespace apnwb
