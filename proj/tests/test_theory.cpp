#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "apnwb/theory.hpp"
#include "test_util.hpp"

using namespace apnwb;

TEST_CASE("trace-system criterion matches the direct apn test") {
    auto f = Field::make(6);
    FieldElement z = f->primitive();

    // the flagship pair: F = b x^3, G = b^3 x^9, b a non-cube
    VBF Fv = VBF::from_terms(f, {{z, 3}});
    VBF Gv = VBF::from_terms(f, {{z.pow(3), 9}});
    VBF composed = build_trace_composed(f, {{z, 3}}, {{z.pow(3), 9}}, z);
    REQUIRE(lemma21_check(Fv, Gv, z));
    REQUIRE(composed.is_apn());

    // F = G = x^3 collapses the image onto a line: criterion must say no
    VBF cube = VBF::from_terms(f, {{f->one(), 3}});
    REQUIRE_FALSE(lemma21_check(cube, cube, z));
    REQUIRE_FALSE(build_trace_composed(f, {{f->one(), 3}}, {{f->one(), 3}}, z).is_apn());

    // 50 seeded random quadratic triples agree
    TheoryCheck tc = run_lemma21_suite(f, 42, 50);
    REQUIRE(tc.checked == 50);
    REQUIRE(tc.violation_count == 0);
}

TEST_CASE("trace-system criterion rejects bad inputs") {
    auto f = Field::make(6);
    FieldElement z = f->primitive();
    VBF cubic = VBF::from_terms(f, {{f->one(), 7}}); // degree 3
    VBF quad = VBF::from_terms(f, {{f->one(), 3}});
    REQUIRE_THROWS_AS(lemma21_check(cubic, quad, z), NotQuadratic);
    VBF with_const = VBF::from_terms(f, {{f->one(), 3}, {f->one(), 0}});
    REQUIRE_THROWS_AS(lemma21_check(with_const, quad, z), NotQuadratic);
    FieldElement in_sub = f->elem(0);
    for (std::uint32_t x = 2; x < 64; ++x)
        if (f->in_subfield(x, 3)) {
            in_sub = f->elem(x);
            break;
        }
    REQUIRE_THROWS_AS(lemma21_check(quad, quad, in_sub), DegenerateA);
}

TEST_CASE("cube-forcing scans are violation-free") {
    for (unsigned n : {6u, 10u}) {
        auto f = Field::make(n);
        ScanReport rep = lemma31_scan(*f);
        REQUIRE(rep.checked == f->size());
        REQUIRE(rep.violations.empty());
        REQUIRE(rep.admissible >= f->q()); // every subfield element qualifies
    }

    auto f10 = Field::make(10);
    ScanReport rep = lemma32_scan(*f10, 7);
    REQUIRE(rep.violations.empty());
    REQUIRE(rep.admissible == 122);
    REQUIRE_THROWS_AS(lemma32_scan(*f10, 3), BadExponent); // 9 != 1 mod 10

    REQUIRE(default_cube_shift(*f10) == 7u);
    REQUIRE_FALSE(default_cube_shift(*Field::make(6)).has_value()); // gcd(3, m) = 3
}

TEST_CASE("cube-forcing scan at n = 14", "[slow]") {
    auto f = Field::make(14);
    REQUIRE(default_cube_shift(*f) == 5u);
    ScanReport rep = lemma32_scan(*f, 5);
    REQUIRE(rep.violations.empty());
    REQUIRE(rep.admissible == 506);
}

TEST_CASE("reduced cubic has no roots at non-cube points") {
    for (unsigned n : {6u, 10u}) {
        auto f = Field::make(n);
        for (int cs = 1; cs <= 2; ++cs)
            for (std::uint32_t x = 2; x < f->size(); ++x) {
                const std::uint32_t c = x ^ f->mul(x, x);
                if (f->is_cube(c)) continue;
                auto rep = vital_check(f->elem(x), static_cast<CubicCase>(cs));
                INFO("case " << cs << " x = " << x);
                REQUIRE(rep.no_solutions());
            }
    }
    auto f6 = Field::make(6);
    REQUIRE_THROWS_AS(vital_check(f6->one(), CubicCase::One), DegenerateX);
}

TEST_CASE("reduced cubic root counts match the root census after depressing") {
    // at admissible points the cubic collapses to z^3 + z + a; its root count
    // must agree with the census classification of that a
    for (unsigned n : {6u, 10u}) {
        auto f = Field::make(n);
        const Field& F = *f;
        const std::uint32_t q = F.q();
        for (int cs = 1; cs <= 2; ++cs)
            for (std::uint32_t x = 2; x < F.size(); ++x) {
                auto rep = vital_check(F.elem(x), static_cast<CubicCase>(cs));
                auto [X, r, h, c, A, B, D, H] = rep.ctx;
                if (h.is_zero() || A.is_zero() || B.is_zero()) continue;
                FieldElement E2 = (A * B.pow(q) + B * B) / (A * A);
                if (E2.is_zero()) continue;
                FieldElement E = F.elem(F.sqrt(E2.bits()));
                FieldElement norm = A.pow(std::uint64_t(q) + 1) + B.pow(std::uint64_t(q) + 1);
                FieldElement a = norm / (A * A * E.pow(3));
                if (a.is_zero()) continue;
                REQUIRE(rep.root_count == williams_classify(a).root_count());
            }
    }
}

TEST_CASE("closed-form identities hold at every admissible point") {
    struct Expect {
        unsigned n;
        std::uint64_t admissible, degenerate;
    };
    for (Expect e : {Expect{6, 108, 16}, Expect{10, 1980, 64}}) {
        auto f = Field::make(e.n);
        std::uint64_t adm = 0, deg = 0;
        for (int cs = 1; cs <= 2; ++cs)
            for (std::uint32_t x = 2; x < f->size(); ++x) {
                auto rep = appendix_identity_checks(f->elem(x), static_cast<CubicCase>(cs));
                if (rep.degenerate) {
                    ++deg;
                    continue;
                }
                ++adm;
                INFO("case " << cs << " x = " << x);
                for (auto& [name, ok] : rep.identities) {
                    INFO(name);
                    REQUIRE(ok);
                }
            }
        REQUIRE(adm == e.admissible);
        REQUIRE(deg == e.degenerate);
    }

    // subfield points degenerate with h = 0
    auto f6 = Field::make(6);
    for (std::uint32_t x = 2; x < 64; ++x)
        if (f6->in_subfield(x, 3)) {
            auto rep = appendix_identity_checks(f6->elem(x), CubicCase::One);
            REQUIRE(rep.degenerate);
            REQUIRE(rep.degenerate_reason == "h = 0 (x lies in GF(2^m))");
            break;
        }
}

TEST_CASE("proof-chain rewriting preserves values") {
    auto f6 = Field::make(6);
    // exhaustive at n = 6
    for (int variant = 1; variant <= 2; ++variant)
        for (std::uint32_t d = 1; d < 64; ++d)
            for (std::uint32_t x = 2; x < 64; ++x) {
                INFO("variant " << variant << " d = " << d << " x = " << x);
                REQUIRE(corollary_reduction_check(*f6, variant, f6->elem(d), f6->elem(x)));
            }

    // sampled at n = 10, including subfield x where the chain degenerates
    // consistently
    auto f10 = Field::make(10);
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::uint32_t> dd(1, 1023), xx(2, 1023);
    for (int variant = 1; variant <= 2; ++variant)
        for (int it = 0; it < 1000; ++it)
            REQUIRE(corollary_reduction_check(*f10, variant, f10->elem(dd(rng)),
                                              f10->elem(xx(rng))));
    for (std::uint32_t x = 2; x < 1024; ++x)
        if (f10->in_subfield(x, 5)) {
            REQUIRE(corollary_reduction_check(*f10, 1, f10->elem(5), f10->elem(x)));
            REQUIRE(corollary_reduction_check(*f10, 2, f10->elem(5), f10->elem(x)));
        }
}

TEST_CASE("aggregate suite at n = 6") {
    auto f = Field::make(6);
    auto checks = run_theory_all(f, 1);
    std::uint64_t total = 0;
    for (auto& tc : checks) {
        INFO(tc.name);
        total += tc.violation_count;
        if (tc.name == "lemma32" || tc.name == "item-iv-empty")
            REQUIRE_FALSE(tc.applicable); // no odd s with 3s = 1 mod 6
        else
            REQUIRE(tc.applicable);
    }
    REQUIRE(total == 0);
}
