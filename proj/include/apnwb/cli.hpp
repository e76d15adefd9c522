#pragma once

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "apnwb.hpp"
#include "serialize.hpp"

namespace apnwb::cli {

namespace detail {

struct Options {
    unsigned n = 0;
    std::string modulus_hex;
    std::string out_path;
    std::uint64_t seed = 1;
    unsigned threads = 0;

    std::optional<std::uint32_t> modulus() const {
        if (modulus_hex.empty()) return std::nullopt;
        return static_cast<std::uint32_t>(std::stoul(modulus_hex, nullptr, 16));
    }
};

inline std::shared_ptr<const Field> make_field(const Options& o, unsigned fallback_n = 0) {
    unsigned n = o.n ? o.n : fallback_n;
    if (!n) throw ParseError("field width not given (use -n)");
    return Field::make(n, o.modulus());
}

inline std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

/// Input functions come either as truth-table files or params documents;
/// a leading '{' picks the JSON route.
inline VBF load_function(const std::string& path, const Options& o) {
    std::string text = slurp(path);
    auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        json doc;
        try {
            doc = json::parse(text);
        } catch (const json::exception& e) {
            throw ParseError(std::string("bad JSON: ") + e.what());
        }
        unsigned n = o.n ? o.n : doc.value("field_n", 0u);
        auto f = make_field(o, n);
        return build_from_params(f, params_from_json(doc, *f));
    }
    std::istringstream is(text);
    return read_table_file(is);
}

/// All command output funnels through here so identical runs produce
/// byte-identical files.
inline void emit(const Options& o, std::ostream& fallback, const std::string& text) {
    if (o.out_path.empty()) {
        fallback << text;
        return;
    }
    std::ofstream os(o.out_path, std::ios::binary);
    if (!os) throw IoError("cannot open " + o.out_path + " for writing");
    os << text;
    if (!os) throw IoError("failed writing " + o.out_path);
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline TheoryCheck run_one_check(const std::string& which, std::shared_ptr<const Field> f,
                                 const Options& o, std::optional<unsigned> s_flag,
                                 unsigned samples) {
    const Field& F = *f;
    if (which == "lemma21") return run_lemma21_suite(f, o.seed, samples ? samples : 50);
    if (which == "lemma31") return run_lemma31(F);
    if (which == "lemma32") {
        unsigned s;
        if (s_flag)
            s = *s_flag;
        else if (auto d = default_cube_shift(F))
            s = *d;
        else
            throw BadExponent("no odd s with 3s = 1 mod n; pass --s");
        return run_lemma32(F, s);
    }
    if (which == "williams") return run_williams_suite(F);
    if (which == "vital") return run_vital_suite(F);
    if (which == "appendix") return run_appendix_suite(F);
    if (which == "corollary-chain")
        return run_corollary_chain_suite(f, o.seed, samples ? samples : 500);
    if (which == "item-iv-empty") return run_item_iv_empty(F);
    throw ParseError("unknown check: " + which);
}

// ---- subcommand bodies ----

inline int cmd_field_info(const Options& o, bool all, std::ostream& out) {
    json j;
    if (all) {
        json tbl = json::object();
        for (unsigned n = 2; n <= Field::kMaxWidth; ++n) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "0x%X", Field::kDefaultModulus[n]);
            tbl[std::to_string(n)] = buf;
        }
        j["default_moduli"] = tbl;
    }
    if (o.n) {
        auto f = make_field(o);
        char buf[32];
        std::snprintf(buf, sizeof buf, "0x%X", f->modulus());
        j["n"] = f->n();
        j["modulus"] = buf;
        j["order"] = f->order();
        j["primitive_element"] = f->format_element(f->primitive().bits());
        std::snprintf(buf, sizeof buf, "0x%X", f->primitive().bits());
        j["primitive_element_mask"] = buf;
        if (f->n() % 2 == 0) {
            j["m"] = f->m();
            j["q"] = f->q();
        }
    }
    emit(o, out, dump(j));
    return 0;
}

inline int cmd_build(const Options& o, const std::string& params_path, std::ostream& out,
                     std::ostream& err) {
    json doc;
    try {
        doc = json::parse(slurp(params_path));
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad JSON: ") + e.what());
    }
    unsigned n = o.n ? o.n : doc.value("field_n", 0u);
    auto f = make_field(o, n);
    ConstructionParams p = params_from_json(doc, *f);
    if (p.family == Family::Fs && p.ints.count("item")) {
        auto item = static_cast<Theorem31Item>(p.get_int("item") - 1);
        auto rep = check_theorem31_item(*f, item, static_cast<unsigned>(p.get_int("s")),
                                        f->elem(p.get_coeff("a")), f->elem(p.get_coeff("b")),
                                        f->elem(p.get_coeff("c")));
        if (!rep.satisfied) {
            json jr = {{"item", rep.item}, {"satisfied", false}, {"witness", rep.witness}};
            err << dump(jr);
            return 2;
        }
    }
    VBF v = build_from_params(f, p);
    std::ostringstream ss;
    write_table_file(ss, v);
    emit(o, out, ss.str());
    return 0;
}

inline int cmd_verify(const Options& o, const std::string& input, std::ostream& out) {
    VBF v = load_function(input, o);
    json j;
    unsigned uni = v.differential_uniformity();
    j["apn"] = uni == 2;
    j["uniformity"] = uni;
    j["degree"] = v.algebraic_degree();
    emit(o, out, dump(j));
    return uni == 2 ? 0 : 1;
}

inline int cmd_spectrum(const Options& o, const std::string& input, std::ostream& out) {
    VBF v = load_function(input, o);
    json j;
    Spectrum ds = v.differential_spectrum();
    j["differential_spectrum"] = spectrum_to_json(ds);
    j["differential_uniformity"] = ds.max_value();
    j["extended_walsh_spectrum"] = spectrum_to_json(v.walsh_spectrum_extended());
    emit(o, out, dump(j));
    return 0;
}

inline int cmd_fingerprint(const Options& o, const std::string& input, bool force_gamma,
                           std::ostream& out) {
    VBF v = load_function(input, o);
    emit(o, out, dump(fingerprint_to_json(fingerprint(v, force_gamma))));
    return 0;
}

inline int cmd_compare(const Options& o, const std::string& input, const std::string& catalog_path,
                       std::ostream& out) {
    VBF v = load_function(input, o);
    Fingerprint fp = fingerprint(v);
    std::vector<std::pair<std::string, Fingerprint>> cat;
    std::ifstream is(catalog_path, std::ios::binary);
    if (is) {
        try {
            cat = catalog_from_json(json::parse(is));
        } catch (const json::exception& e) {
            throw ParseError(std::string("bad catalog JSON: ") + e.what());
        }
    } else {
        // no shipped catalog at hand: recompute the built-in one
        auto f10 = v.field().n() == 10 ? v.field_ptr() : Field::make(10);
        for (auto& [name, g] : catalog_f2_10(f10)) cat.emplace_back(name, fingerprint(g));
    }
    json j;
    j["catalog_size"] = cat.size();
    j["entries"] = comparison_to_json(compare(fp, cat));
    emit(o, out, dump(j));
    return 0;
}

inline int cmd_catalog(const Options& o, bool fingerprints, std::ostream& out) {
    auto f = make_field(o, 10);
    auto cat = catalog_f2_10(f);
    json summary = json::array();
    std::vector<std::pair<std::string, Fingerprint>> fps;
    bool all_apn = true;
    for (auto& [name, v] : cat) {
        Fingerprint fp = fingerprint(v);
        bool apn = fp.differential.max_value() == 2;
        all_apn = all_apn && apn;
        summary.push_back({{"name", name}, {"apn", apn}, {"degree", fp.algebraic_degree}});
        fps.emplace_back(name, std::move(fp));
    }
    json j;
    j["entries"] = summary;
    j["count"] = cat.size();
    j["all_apn"] = all_apn;
    if (fingerprints)
        emit(o, out, dump(catalog_to_json(*f, fps)));
    else
        emit(o, out, dump(j));
    return all_apn ? 0 : 1;
}

inline int cmd_export_code(const Options& o, const std::string& input, const std::string& format,
                           std::ostream& out) {
    VBF v = load_function(input, o);
    MatrixFormat fmt;
    if (format == "plain")
        fmt = MatrixFormat::Plain;
    else if (format == "magma")
        fmt = MatrixFormat::Magma;
    else
        throw ParseError("format must be plain or magma");
    std::ostringstream ss;
    code_matrix_export(v, ss, fmt);
    emit(o, out, ss.str());
    return 0;
}

inline int cmd_check_theory(const Options& o, const std::string& which,
                            std::optional<unsigned> s_flag, unsigned samples, std::ostream& out) {
    auto f = make_field(o, 6);
    std::vector<TheoryCheck> checks;
    if (which == "all")
        checks = run_theory_all(f, o.seed);
    else
        checks.push_back(run_one_check(which, f, o, s_flag, samples));
    json j;
    char buf[32];
    std::snprintf(buf, sizeof buf, "0x%X", f->modulus());
    j["field"] = {{"n", f->n()}, {"modulus", buf}};
    j["seed"] = o.seed;
    json arr = json::array();
    std::uint64_t total = 0;
    for (auto& tc : checks) {
        arr.push_back(theory_check_to_json(tc));
        total += tc.violation_count;
    }
    j["checks"] = arr;
    j["violations_total"] = total;
    emit(o, out, dump(j));
    return total == 0 ? 0 : 1;
}

inline int cmd_search(const Options& o, const std::string& space, unsigned samples,
                      const std::string& item, const std::string& reading, unsigned limit,
                      std::ostream& out) {
    std::ostringstream csv;
    std::mt19937_64 rng(o.seed);

    if (space == "pm2") {
        auto f = make_field(o, 10);
        const Field& F = *f;
        auto units = pm2_unit_candidates(F);
        std::uniform_int_distribution<std::uint32_t> cube_log(0, (F.order() - 3) / 3);
        std::uniform_int_distribution<std::size_t> upick(0, units.size() - 1);
        std::vector<std::uint32_t> bs, us;
        for (unsigned i = 0; i < samples; ++i) {
            bs.push_back(F.pow(F.primitive().bits(), 3ull * cube_log(rng)));
            us.push_back(units[upick(rng)]);
        }
        csv << "b,c,apn\n";
        std::vector<Pm2Hit> hits;
        for (unsigned i = 0; i < samples; ++i) {
            auto h = search_pm2(f, {bs[i]}, {us[i]});
            hits.insert(hits.end(), h.begin(), h.end());
        }
        std::sort(hits.begin(), hits.end(), [](const Pm2Hit& x, const Pm2Hit& y) {
            return x.b != y.b ? x.b < y.b : x.c < y.c;
        });
        for (auto& h : hits)
            csv << F.format_element(h.b) << ',' << F.format_element(h.c) << ','
                << (h.apn ? "true" : "false") << '\n';
    } else if (space == "corollary") {
        auto f = make_field(o, 6);
        const Field& F = *f;
        std::uniform_int_distribution<std::uint32_t> anybits(1, F.order());
        csv << "variant,a,b,apn\n";
        for (std::uint32_t b = 2; b < F.size(); ++b) {
            if (F.is_cube(b)) continue;
            for (int variant = 1; variant <= 2; ++variant) {
                FieldElement a(&F, anybits(rng));
                while ((a + a.pow(F.q())).is_zero()) a = FieldElement(&F, anybits(rng));
                bool apn = build_corollary(f, variant, a, F.elem(b)).is_apn();
                csv << variant << ',' << F.format_element(a.bits()) << ',' << F.format_element(b)
                    << ',' << (apn ? "true" : "false") << '\n';
            }
        }
    } else if (space == "fs-item") {
        auto f = make_field(o, 10);
        const Field& F = *f;
        Theorem31Item it = item_from_name(item);
        std::vector<IvReading> readings;
        if (it == Theorem31Item::IV) {
            if (reading == "statement")
                readings = {IvReading::Statement};
            else if (reading == "proof")
                readings = {IvReading::Proof};
            else
                readings = {IvReading::Statement, IvReading::Proof};
        } else {
            readings = {IvReading::Statement};
        }
        // fixed exponent per item; scan (b, c) in bit order and emit the
        // first `limit` condition-satisfying tuples, each APN-verified
        csv << "item,reading,s,a,b,c,apn\n";
        FieldElement a = F.primitive();
        auto shift = theorem31_item_shift(F, it);
        if (!shift) throw BadExponent("item " + std::string(item_name(it)) + " has no shift here");
        const unsigned s = *shift;
        for (IvReading rd : readings) {
            unsigned emitted = 0;
            for (std::uint32_t b = 1; b < F.size() && emitted < limit; ++b)
                for (std::uint32_t c = 1; c < F.size() && emitted < limit; ++c) {
                    auto rep = check_theorem31_item(F, it, s, a, F.elem(b), F.elem(c), rd);
                    if (!rep.satisfied) continue;
                    bool apn = build_fs(f, s, a, F.elem(b), F.elem(c)).is_apn();
                    csv << item_name(it) << ','
                        << (it == Theorem31Item::IV
                                ? (rd == IvReading::Statement ? "statement" : "proof")
                                : "-")
                        << ',' << s << ',' << F.format_element(a.bits()) << ','
                        << F.format_element(b) << ',' << F.format_element(c) << ','
                        << (apn ? "true" : "false") << '\n';
                    ++emitted;
                }
        }
    } else if (space == "example1-fallback") {
        auto f = make_field(o, 10);
        auto rep = example1_verify(f, /*force_scan=*/true);
        csv << "k,e,apn\n";
        for (std::uint32_t k : rep.apn_exponents)
            csv << k << ",z^" << k << ",true\n";
    } else {
        throw ParseError("unknown search space: " + space);
    }
    emit(o, out, csv.str());
    return 0;
}

} // namespace detail

/// Entry point shared by the binary and the test suite. Returns the process
/// exit code: 0 success/verified, 1 verified-false, 2 precondition or
/// validation failure, 3 I/O or parse failure.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"workbench for APN functions over GF(2^n)"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags may appear after the subcommand

    detail::Options o;
    app.add_option("-n,--width", o.n, "field width n");
    app.add_option("--modulus", o.modulus_hex, "modulus override (hex mask)");
    app.add_option("--threads", o.threads, "worker threads (env APNWB_THREADS)");
    app.add_option("--seed", o.seed, "seed for sampled suites");
    app.add_option("-o,--out", o.out_path, "output file (default stdout)");

    auto* sc_info = app.add_subcommand("field-info", "field parameters and the modulus table");
    bool info_all = false;
    sc_info->add_flag("--all", info_all, "print the full default-modulus table");

    auto* sc_build = app.add_subcommand("build", "build a function from a params document");
    std::string params_path;
    sc_build->add_option("params", params_path, "params JSON file")->required();

    auto* sc_verify = app.add_subcommand("verify", "APN check, uniformity and degree");
    std::string verify_input;
    sc_verify->add_option("input", verify_input, "truth-table or params file")->required();

    auto* sc_spec = app.add_subcommand("spectrum", "differential and extended Walsh spectra");
    std::string spec_input;
    sc_spec->add_option("input", spec_input, "truth-table or params file")->required();

    auto* sc_fp = app.add_subcommand("fingerprint", "equivalence-invariant fingerprint");
    std::string fp_input;
    bool fp_gamma = false;
    sc_fp->add_option("input", fp_input, "truth-table or params file")->required();
    sc_fp->add_flag("--gamma-rank", fp_gamma, "force gamma rank for n in {7, 8}");

    auto* sc_cmp = app.add_subcommand("compare", "compare against the known-function catalog");
    std::string cmp_input, cmp_catalog = "data/catalog.json";
    sc_cmp->add_option("input", cmp_input, "truth-table or params file")->required();
    sc_cmp->add_option("--catalog", cmp_catalog, "catalog JSON (recomputed if missing)");

    auto* sc_cat = app.add_subcommand("catalog", "build and verify the GF(2^10) catalog");
    bool cat_fps = false;
    sc_cat->add_flag("--fingerprints", cat_fps, "emit full fingerprints (catalog.json format)");

    auto* sc_exp = app.add_subcommand("export-code", "emit the code generator matrix");
    std::string exp_input, exp_format = "plain";
    sc_exp->add_option("input", exp_input, "truth-table or params file")->required();
    sc_exp->add_option("--format", exp_format, "plain | magma");

    auto* sc_chk = app.add_subcommand("check-theory", "machine-check the supporting claims");
    std::string which = "all";
    unsigned chk_samples = 0;
    std::optional<unsigned> s_flag;
    unsigned s_value = 0;
    sc_chk->add_option("--which", which,
                       "lemma21|lemma31|lemma32|williams|vital|appendix|corollary-chain|"
                       "item-iv-empty|all");
    auto* s_opt = sc_chk->add_option("--s", s_value, "shift s for lemma32");
    sc_chk->add_option("--samples", chk_samples, "sample count for seeded suites");

    auto* sc_srch = app.add_subcommand("search", "coefficient-space searches (CSV)");
    std::string space, srch_item = "iii", srch_reading = "both";
    unsigned srch_samples = 20, srch_limit = 50;
    sc_srch->add_option("--space", space, "pm2|corollary|fs-item|example1-fallback")->required();
    sc_srch->add_option("--samples", srch_samples, "sampled candidates");
    sc_srch->add_option("--item", srch_item, "theorem item for fs-item");
    sc_srch->add_option("--reading", srch_reading, "statement|proof|both (item iv)");
    sc_srch->add_option("--limit", srch_limit, "max emitted rows per reading");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 2;
    }

    if (o.threads) par::set_workers(o.threads);
    if (s_opt->count()) s_flag = s_value;

    try {
        if (*sc_info) return detail::cmd_field_info(o, info_all, out);
        if (*sc_build) return detail::cmd_build(o, params_path, out, err);
        if (*sc_verify) return detail::cmd_verify(o, verify_input, out);
        if (*sc_spec) return detail::cmd_spectrum(o, spec_input, out);
        if (*sc_fp) return detail::cmd_fingerprint(o, fp_input, fp_gamma, out);
        if (*sc_cmp) return detail::cmd_compare(o, cmp_input, cmp_catalog, out);
        if (*sc_cat) return detail::cmd_catalog(o, cat_fps, out);
        if (*sc_exp) return detail::cmd_export_code(o, exp_input, exp_format, out);
        if (*sc_chk) return detail::cmd_check_theory(o, which, s_flag, chk_samples, out);
        if (*sc_srch)
            return detail::cmd_search(o, space, srch_samples, srch_item, srch_reading, srch_limit,
                                      out);
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    err << "no subcommand\n";
    return 2;
}

} // namespace apnwb::cli
