#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "apnwb/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int code;
    std::string out, err;
};

RunResult run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = apnwb::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path temp_file(const std::string& name, const std::string& content) {
    fs::path p = fs::temp_directory_path() / name;
    std::ofstream os(p, std::ios::binary);
    os << content;
    return p;
}

} // namespace

TEST_CASE("cli: field-info") {
    auto r = run_cli({"-n", "6", "field-info"});
    REQUIRE(r.code == 0);
    REQUIRE(r.out.find("\"modulus\": \"0x5B\"") != std::string::npos);
    REQUIRE(r.out.find("\"primitive_element\": \"z^1\"") != std::string::npos);
    r = run_cli({"field-info", "--all"});
    REQUIRE(r.code == 0);
    REQUIRE(r.out.find("\"20\": \"0x1006F3\"") != std::string::npos);
}

TEST_CASE("cli: build and verify round trip") {
    fs::path table = fs::temp_directory_path() / "f15.tbl";
    auto r = run_cli({"-o", table.string(), "build", "data/params/f15_n10.json"});
    REQUIRE(r.code == 0);
    {
        std::ifstream is(table);
        std::string header;
        std::getline(is, header);
        REQUIRE(header == "n=10 modulus=0x46F");
        int lines = 0;
        std::string line;
        while (std::getline(is, line))
            if (!line.empty() && line[0] != '#') ++lines;
        REQUIRE(lines == 1024);
    }
    r = run_cli({"verify", table.string()});
    REQUIRE(r.code == 0);
    REQUIRE(r.out.find("\"apn\": true") != std::string::npos);
    REQUIRE(r.out.find("\"degree\": 2") != std::string::npos);
}

TEST_CASE("cli: verify exit codes") {
    auto r = run_cli({"verify", "data/params/kasami_n10.json"});
    REQUIRE(r.code == 0);

    fs::path p = temp_file("x5_n6.json",
                           R"({"family":"power_map","field_n":6,"coeffs":{"exponent":5}})");
    r = run_cli({"verify", p.string()});
    REQUIRE(r.code == 1);
    REQUIRE(r.out.find("\"uniformity\": 4") != std::string::npos);

    fs::path empty = temp_file("empty.tbl", "");
    r = run_cli({"verify", empty.string()});
    REQUIRE(r.code == 3);

    r = run_cli({"verify", (fs::temp_directory_path() / "missing.tbl").string()});
    REQUIRE(r.code == 3);
}

TEST_CASE("cli: build validation failures exit 2") {
    auto r = run_cli({"build", "data/params/fs_item3_cube_b_n6.json"});
    REQUIRE(r.code == 2);
    REQUIRE(r.err.find("b is a cube") != std::string::npos);

    fs::path bad = temp_file("bad_corollary.json",
                             R"({"family":"corollary_h","field_n":6,"coeffs":{"variant":1,"a":"z^1","b":"z^3"}})");
    r = run_cli({"build", bad.string()});
    REQUIRE(r.code == 2);
}

TEST_CASE("cli: hexanomial params round trip through verify") {
    fs::path table = fs::temp_directory_path() / "hex.tbl";
    auto r = run_cli({"-o", table.string(), "build", "data/params/hexanomial_n10.json"});
    REQUIRE(r.code == 0);
    r = run_cli({"verify", table.string()});
    REQUIRE((r.code == 0 || r.code == 1)); // parses and verifies either way
    REQUIRE(r.out.find("\"uniformity\"") != std::string::npos);
}

TEST_CASE("cli: spectrum") {
    auto r = run_cli({"spectrum", "data/params/f15_n10.json"});
    REQUIRE(r.code == 0);
    REQUIRE(r.out.find("\"differential_uniformity\": 2") != std::string::npos);
    REQUIRE(r.out.find("\"extended_walsh_spectrum\"") != std::string::npos);
}

TEST_CASE("cli: fingerprint") {
    auto r = run_cli({"fingerprint", "data/params/f15_n10.json"});
    REQUIRE(r.code == 0);
    REQUIRE(r.out.find("\"algebraic_degree\": 2") != std::string::npos);
    REQUIRE(r.out.find("\"gamma_rank\"") == std::string::npos); // n = 10: too large

    fs::path p = temp_file("x3_n6.json",
                           R"({"family":"power_map","field_n":6,"coeffs":{"exponent":3}})");
    r = run_cli({"fingerprint", p.string()});
    REQUIRE(r.code == 0);
    REQUIRE(r.out.find("\"gamma_rank\": 1102") != std::string::npos);
}

TEST_CASE("cli: export-code") {
    fs::path p = temp_file("x3_n4.json",
                           R"({"family":"power_map","field_n":4,"coeffs":{"exponent":3}})");
    auto r = run_cli({"export-code", p.string()});
    REQUIRE(r.code == 0);
    REQUIRE(r.out.rfind("16 9\n1111111111111111\n", 0) == 0);
    r = run_cli({"export-code", p.string(), "--format", "magma"});
    REQUIRE(r.code == 0);
    REQUIRE(r.out.rfind("Matrix(GF(2), 9, 16, [", 0) == 0);
}

TEST_CASE("cli: check-theory") {
    auto r = run_cli({"-n", "6", "check-theory"});
    REQUIRE(r.code == 0);
    REQUIRE(r.out.find("\"violations_total\": 0") != std::string::npos);

    r = run_cli({"-n", "10", "check-theory", "--which", "vital"});
    REQUIRE(r.code == 0);

    r = run_cli({"-n", "10", "check-theory", "--which", "lemma32", "--s", "3"});
    REQUIRE(r.code == 2); // 3*3 = 9 != 1 mod 10

    r = run_cli({"-n", "10", "check-theory", "--which", "item-iv-empty"});
    REQUIRE(r.code == 0); // violations formalize the proof-side placement
    REQUIRE(r.out.find("statement-reading hits = 21142") != std::string::npos);
    REQUIRE(r.out.find("proof-reading hits = 0") != std::string::npos);
}

TEST_CASE("cli: search spaces") {
    auto r = run_cli({"-n", "6", "--seed", "7", "search", "--space", "corollary"});
    REQUIRE(r.code == 0);
    REQUIRE(r.out.rfind("variant,a,b,apn\n", 0) == 0);
    REQUIRE(r.out.find("false") == std::string::npos); // every hit is apn
    // deterministic rerun
    auto r2 = run_cli({"-n", "6", "--seed", "7", "search", "--space", "corollary"});
    REQUIRE(r2.out == r.out);
    // different seed changes the sampled a-values
    auto r3 = run_cli({"-n", "6", "--seed", "8", "search", "--space", "corollary"});
    REQUIRE(r3.out != r.out);

    r = run_cli({"-n", "10", "search", "--space", "fs-item", "--item", "iv", "--reading",
                 "proof", "--limit", "5"});
    REQUIRE(r.code == 0);
    REQUIRE(r.out == "item,reading,s,a,b,c,apn\n"); // zero hits

    r = run_cli({"-n", "10", "search", "--space", "fs-item", "--item", "vii", "--limit", "3"});
    REQUIRE(r.code == 0);
    REQUIRE(r.out.find("vii,-,9,") != std::string::npos);
    REQUIRE(r.out.find("false") == std::string::npos);

    r = run_cli({"-n", "10", "--seed", "3", "search", "--space", "pm2", "--samples", "5"});
    REQUIRE(r.code == 0);
    REQUIRE(r.out.rfind("b,c,apn\n", 0) == 0);
    REQUIRE(r.out.find("true") != std::string::npos);
    REQUIRE(r.out.find("false") == std::string::npos);
}

TEST_CASE("cli: example scan finds the unique exponent") {
    auto r = run_cli({"search", "--space", "example1-fallback"});
    REQUIRE(r.code == 0);
    REQUIRE(r.out == "k,e,apn\n369,z^369,true\n");
}

TEST_CASE("cli: catalog and compare") {
    auto r = run_cli({"catalog"});
    REQUIRE(r.code == 0);
    REQUIRE(r.out.find("\"all_apn\": true") != std::string::npos);
    REQUIRE(r.out.find("\"count\": 20") != std::string::npos);

    // compare against the shipped fingerprint catalog
    auto rc = run_cli({"compare", "data/params/f15_n10.json", "--catalog", "data/catalog.json"});
    REQUIRE(rc.code == 0);
    REQUIRE(rc.out.find("\"name\": \"f15\"") != std::string::npos);
    REQUIRE(rc.out.find("indistinguishable by computed invariants") != std::string::npos);
    REQUIRE(rc.out.find("distinguished") != std::string::npos);
}

TEST_CASE("cli: unknown flags and missing subcommand") {
    auto r = run_cli({"frobnicate"});
    REQUIRE(r.code == 2);
    r = run_cli({"--help"});
    REQUIRE(r.code == 0);
    REQUIRE(r.out.find("Usage") != std::string::npos);
}
