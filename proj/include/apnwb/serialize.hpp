#pragma once

#include <istream>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "constructions.hpp"
#include "field.hpp"
#include "invariants.hpp"
#include "params.hpp"
#include "theory.hpp"
#include "vbf.hpp"

namespace apnwb {

using nlohmann::json;

// ---- spectra ----

inline json spectrum_to_json(const Spectrum& s) {
    json j = json::object();
    for (auto& [k, v] : s.entries) j[std::to_string(k)] = v;
    return j;
}

inline Spectrum spectrum_from_json(const json& j) {
    Spectrum s;
    for (auto it = j.begin(); it != j.end(); ++it)
        s.entries[static_cast<std::uint32_t>(std::stoul(it.key()))] =
            it.value().get<std::uint64_t>();
    return s;
}

// ---- fingerprints ----

inline json fingerprint_to_json(const Fingerprint& fp) {
    json j;
    j["n"] = fp.n;
    j["algebraic_degree"] = fp.algebraic_degree;
    j["differential_spectrum"] = spectrum_to_json(fp.differential);
    j["extended_walsh_spectrum"] = spectrum_to_json(fp.extended_walsh);
    if (fp.gamma_rank) j["gamma_rank"] = *fp.gamma_rank;
    return j;
}

inline Fingerprint fingerprint_from_json(const json& j) {
    Fingerprint fp;
    fp.n = j.at("n").get<unsigned>();
    fp.algebraic_degree = j.at("algebraic_degree").get<unsigned>();
    fp.differential = spectrum_from_json(j.at("differential_spectrum"));
    fp.extended_walsh = spectrum_from_json(j.at("extended_walsh_spectrum"));
    if (j.contains("gamma_rank")) fp.gamma_rank = j["gamma_rank"].get<std::uint64_t>();
    return fp;
}

// ---- construction params ----
// Coefficient slots serialize as primitive-element powers ("z^k"); integer
// slots (s, i, variant, exponent, which) as plain numbers. Hex masks are
// accepted on input.

inline json params_to_json(const ConstructionParams& p, const Field& F) {
    json j;
    j["family"] = family_name(p.family);
    j["field_n"] = p.field_n ? p.field_n : F.n();
    json cs = json::object();
    for (auto& [k, v] : p.ints) cs[k] = v;
    for (auto& [k, v] : p.coeffs) cs[k] = F.format_element(v);
    j["coeffs"] = cs;
    auto terms_json = [&](const std::vector<std::pair<std::uint32_t, std::uint64_t>>& ts) {
        json arr = json::array();
        for (auto& [c, e] : ts) arr.push_back({F.format_element(c), e});
        return arr;
    };
    if (!p.f_terms.empty()) j["F_terms"] = terms_json(p.f_terms);
    if (!p.g_terms.empty()) j["G_terms"] = terms_json(p.g_terms);
    return j;
}

inline ConstructionParams params_from_json(const json& j, const Field& F) {
    ConstructionParams p;
    try {
        p.family = family_from_name(j.at("family").get<std::string>());
        p.field_n = j.value("field_n", F.n());
        if (j.contains("coeffs"))
            for (auto it = j["coeffs"].begin(); it != j["coeffs"].end(); ++it) {
                if (it.value().is_number())
                    p.ints[it.key()] = it.value().get<std::uint64_t>();
                else
                    p.coeffs[it.key()] = F.parse_element(it.value().get<std::string>()).bits();
            }
        auto terms_parse = [&](const json& arr) {
            std::vector<std::pair<std::uint32_t, std::uint64_t>> ts;
            for (auto& t : arr)
                ts.emplace_back(F.parse_element(t.at(0).get<std::string>()).bits(),
                                t.at(1).get<std::uint64_t>());
            return ts;
        };
        if (j.contains("F_terms")) p.f_terms = terms_parse(j["F_terms"]);
        if (j.contains("G_terms")) p.g_terms = terms_parse(j["G_terms"]);
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad params document: ") + e.what());
    }
    return p;
}

// ---- truth-table files: "n=<n> modulus=<hex>" header, optional '#'
// comments, then 2^n hex values, one per line ----

inline void write_table_file(std::ostream& os, const VBF& f) {
    const Field& F = f.field();
    char buf[32];
    std::snprintf(buf, sizeof buf, "0x%X", F.modulus());
    os << "n=" << F.n() << " modulus=" << buf << "\n";
    if (f.provenance())
        os << "# provenance " << params_to_json(*f.provenance(), F).dump() << "\n";
    for (std::uint32_t x = 0; x < F.size(); ++x) {
        std::snprintf(buf, sizeof buf, "%x", f(x));
        os << buf << "\n";
    }
    if (!os) throw IoError("failed to write truth table");
}

inline VBF read_table_file(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw ParseError("empty truth-table file");
    unsigned n = 0;
    unsigned long long mod = 0;
    if (std::sscanf(line.c_str(), "n=%u modulus=%llx", &n, &mod) != 2)
        throw ParseError("bad header line: " + line);
    auto field = Field::make(n, static_cast<std::uint32_t>(mod));
    std::vector<std::uint32_t> table;
    table.reserve(field->size());
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        char* end = nullptr;
        unsigned long v = std::strtoul(line.c_str(), &end, 16);
        if (end == line.c_str()) throw ParseError("bad table line: " + line);
        if (v >= field->size()) throw ParseError("table value out of range: " + line);
        table.push_back(static_cast<std::uint32_t>(v));
    }
    if (table.size() != field->size())
        throw ParseError("expected " + std::to_string(field->size()) + " values, got " +
                         std::to_string(table.size()));
    return VBF(std::move(field), std::move(table));
}

// ---- catalog of precomputed fingerprints ----

inline json catalog_to_json(const Field& F,
                            const std::vector<std::pair<std::string, Fingerprint>>& entries) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "0x%X", F.modulus());
    json j;
    j["n"] = F.n();
    j["modulus"] = buf;
    j["primitive_element"] = F.format_element(F.primitive().bits());
    if (F.n() % 2 == 0) {
        std::snprintf(buf, sizeof buf, "0x%X", subfield_generator(F).bits());
        j["subfield_generator"] = buf; // minimal-bit element of order 2^m - 1
    }
    json arr = json::array();
    for (auto& [name, fp] : entries) {
        json e = fingerprint_to_json(fp);
        e["name"] = name;
        arr.push_back(e);
    }
    j["entries"] = arr;
    return j;
}

inline std::vector<std::pair<std::string, Fingerprint>> catalog_from_json(const json& j) {
    std::vector<std::pair<std::string, Fingerprint>> out;
    try {
        for (auto& e : j.at("entries"))
            out.emplace_back(e.at("name").get<std::string>(), fingerprint_from_json(e));
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad catalog document: ") + e.what());
    }
    return out;
}

// ---- reports ----

inline json theory_check_to_json(const TheoryCheck& tc) {
    json j;
    j["name"] = tc.name;
    j["applicable"] = tc.applicable;
    if (!tc.note.empty()) j["note"] = tc.note;
    if (tc.applicable) {
        j["checked"] = tc.checked;
        j["admissible"] = tc.admissible;
        j["degenerate"] = tc.degenerate;
        j["violation_count"] = tc.violation_count;
        j["violations"] = tc.violation_samples; // witness list, capped at 8
    }
    return j;
}

inline json comparison_to_json(const std::vector<InvariantComparison>& cmps) {
    json arr = json::array();
    for (auto& c : cmps) {
        json e;
        e["name"] = c.name;
        e["same_differential_spectrum"] = c.same_differential;
        e["same_extended_walsh"] = c.same_walsh;
        e["same_algebraic_degree"] = c.same_degree;
        if (c.same_gamma_rank) e["same_gamma_rank"] = *c.same_gamma_rank;
        e["verdict"] = c.verdict();
        arr.push_back(e);
    }
    return arr;
}

} // namespace apnwb
