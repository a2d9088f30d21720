#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "sclab/config.hpp"
#include "sclab/errors.hpp"
#include "sclab/report.hpp"

using namespace sclab;
using config::RunConfig;
using config::parse_config;
using experiments::ConvergenceRecord;

namespace {

ConvergenceRecord rec(const std::string& obs, double param, double quantum,
                      double classical) {
    ConvergenceRecord r;
    r.model = "curie_weiss";
    r.param_name = "N";
    r.param_value = param;
    r.observable = obs;
    r.quantum = quantum;
    r.classical = classical;
    r.abs_error = std::fabs(quantum - classical);
    return r;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(bool(in));
    return std::string(std::istreambuf_iterator<char>(in), {});
}

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() / "sclab_report_test";
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("config: minimal text with defaults filled in") {
    const auto cfg = parse_config("[model]\nkind = curie_weiss\nB = 0.5");
    CHECK(cfg.kind == classical::ModelId::curie_weiss);
    CHECK(cfg.B == 0.5);
    CHECK(cfg.J == 1.0);  // untouched default
    CHECK(cfg.n_values == std::vector<int>{50, 100, 200, 500, 1000});
}

TEST_CASE("config: empty text is the full default run") {
    const auto cfg = parse_config("");
    CHECK(cfg.kind == classical::ModelId::curie_weiss);
    CHECK(cfg.B == 0.5);
    CHECK(cfg.n_values == std::vector<int>{50, 100, 200, 500, 1000});
    CHECK(cfg.include_energy);
    CHECK(cfg.format == "both");
    CHECK(cfg.canonical() == RunConfig{}.canonical());
}

TEST_CASE("config: comments, blanks, spacing, and later keys override") {
    const std::string text =
        "# leading comment\n"
        "\n"
        "[model]\n"
        "  kind = double_well   # trailing comment\n"
        "B = 0.3\n"
        "B = 0.7\n"
        "[sweep]\n"
        "n_values = 10, 20, 30\n"
        "hbar_values = 0.5,0.25\n"
        "observables = q , q2\n"
        "include_energy = false\n"
        "[output]\n"
        "format = csv\n"
        "prefix = demo\n";
    const auto cfg = parse_config(text);
    CHECK(cfg.kind == classical::ModelId::double_well);
    CHECK(cfg.B == 0.7);
    CHECK(cfg.n_values == std::vector<int>{10, 20, 30});
    CHECK(cfg.hbar_values == std::vector<double>{0.5, 0.25});
    CHECK(cfg.observables == std::vector<std::string>{"q", "q2"});
    CHECK_FALSE(cfg.include_energy);
    CHECK(cfg.format == "csv");
    CHECK(cfg.prefix == "demo");
}

TEST_CASE("config: parse failures carry the line number") {
    SUBCASE("value of the wrong type") {
        try {
            parse_config("[model]\nB = x");
            FAIL("expected TypeMismatch");
        } catch (const TypeMismatch& ex) {
            CHECK(ex.line == 2);
        }
    }
    SUBCASE("unknown key") {
        try {
            parse_config("[model]\nkind = curie_weiss\nfoo = 1");
            FAIL("expected UnknownKey");
        } catch (const UnknownKey& ex) {
            CHECK(ex.line == 3);
        }
    }
    SUBCASE("unknown section") {
        try {
            parse_config("[banana]\nkind = 1");
            FAIL("expected UnknownKey");
        } catch (const UnknownKey& ex) {
            CHECK(ex.line == 1);
        }
    }
    SUBCASE("malformed lines") {
        CHECK_THROWS_AS(parse_config("[model]\nkind curie_weiss"), ParseError);
        CHECK_THROWS_AS(parse_config("B = 0.5\n"), ParseError);  // key before section
        CHECK_THROWS_AS(parse_config("[model\nkind = curie_weiss"), ParseError);
        CHECK_THROWS_AS(parse_config("[model]\n= 0.5"), ParseError);
    }
    SUBCASE("type rules") {
        CHECK_THROWS_AS(parse_config("[model]\npoints = 2.5"), TypeMismatch);
        CHECK_THROWS_AS(parse_config("[model]\nkind = ising"), TypeMismatch);
        CHECK_THROWS_AS(parse_config("[sweep]\ninclude_energy = maybe"), TypeMismatch);
        CHECK_THROWS_AS(parse_config("[sweep]\nn_values = 50,,100"), TypeMismatch);
        CHECK_THROWS_AS(parse_config("[sweep]\nn_values = 50,abc"), TypeMismatch);
        CHECK_THROWS_AS(parse_config("[perturbation]\nkind = shake"), TypeMismatch);
        CHECK_THROWS_AS(parse_config("[output]\nformat = xml"), TypeMismatch);
        CHECK_THROWS_AS(parse_config("[output]\nprefix = a/b"), TypeMismatch);
    }
}

TEST_CASE("config: canonical form and hash") {
    const auto cfg = parse_config("[model]\nB = 0.25\n[sweep]\nn_values = 10,20,30,40");
    // canonical text is a fixpoint of the parser
    CHECK(parse_config(cfg.canonical()).canonical() == cfg.canonical());
    CHECK(cfg.hash().size() == 16);
    CHECK(cfg.hash() == parse_config(cfg.canonical()).hash());
    CHECK(cfg.hash() != RunConfig{}.hash());
    // whitespace and comments do not change the digest
    CHECK(parse_config("[model]\n  B = 0.25  # comment\n[sweep]\nn_values = 10, 20, 30, 40\n")
              .hash() == cfg.hash());
}

TEST_CASE("csv: exact header, hash line, 17-digit payload") {
    const auto text = report::render_records_csv({rec("z2", 100, 0.1, 0.75)}, "deadbeef01234567");
    std::vector<std::string> lines;
    std::string line;
    std::istringstream in(text);
    while (std::getline(in, line)) lines.push_back(line);
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "# config_hash = deadbeef01234567");
    CHECK(lines[1] == "model,param_name,param_value,observable,quantum,classical,abs_error");
    CHECK(lines[2] ==
          "curie_weiss,N,100,z2,0.10000000000000001,0.75,0.65000000000000002");
}

TEST_CASE("csv: rows sorted by observable then parameter, independent of input order") {
    const std::vector<ConvergenceRecord> shuffled = {
        rec("z2", 200, 0.2, 0.75), rec("x", 100, 0.4, 0.5), rec("z2", 100, 0.3, 0.75),
        rec("energy", 50, -0.6, -0.625), rec("x", 50, 0.45, 0.5)};
    const auto text = report::render_records_csv(shuffled, "h");
    const auto re_sorted = report::render_records_csv(
        {shuffled[4], shuffled[2], shuffled[0], shuffled[3], shuffled[1]}, "h");
    CHECK(text == re_sorted);

    std::vector<std::string> lines;
    std::string line;
    std::istringstream in(text);
    while (std::getline(in, line)) lines.push_back(line);
    REQUIRE(lines.size() == 7);
    CHECK(lines[2].find("energy,") != std::string::npos);  // "energy" sorts first
    CHECK(lines[3].substr(0, lines[3].find(',')) == "curie_weiss");
    CHECK(lines[3].find(",x,") != std::string::npos);
    CHECK(lines[3].find(",50,") != std::string::npos);  // then x at N=50, 100
    CHECK(lines[4].find(",100,") != std::string::npos);
    CHECK(lines[5].find(",z2,") != std::string::npos);
}

TEST_CASE("json report round-trips exactly") {
    report::Report rep;
    rep.config_hash = "0123456789abcdef";
    rep.dgr_sign = 1;
    rep.dgr_scale = 2.0;
    experiments::CriterionResult crit;
    crit.id = 4;
    crit.name = "mean-field spin sweep limits";
    crit.pass = true;
    crit.note = "all sub-checks within tolerance";
    experiments::CheckLine l;
    l.label = "extrapolated <Q(x)>";
    l.measured = 0.50000306623811823;
    l.target = 0.5;
    l.tolerance = 5e-3;
    l.pass = true;
    crit.checks.push_back(l);
    l.label = "informational extra";
    l.informational = true;
    l.pass = false;
    l.measured = -0.0;  // signed zero must survive the trip
    crit.checks.push_back(l);
    rep.criteria.push_back(crit);
    rep.tables = {rec("x", 50, 0.49882729306287424, 0.5),
                  rec("x", 100, 0.49941104800490592, 0.5)};

    const std::string text = report::render_report_json(rep);
    CHECK(report::parse_report_json(text) == rep);
    CHECK(report::render_report_json(rep) == text);  // rendering is deterministic
    CHECK(text.find("0123456789abcdef") != std::string::npos);

    report::Report other = rep;
    other.tables[1].quantum = 0.5;
    CHECK_FALSE(other == rep);
    CHECK_THROWS_AS(report::parse_report_json("{\"version\": \"1.0.0\"}"), Error);
    CHECK_THROWS_AS(report::parse_report_json("not json"), Error);
}

TEST_CASE("atomic emission writes whole files and cleans up") {
    TempDir dir;
    const auto records = {rec("x", 50, 0.49, 0.5)};
    const std::string csv_path = dir.file("out.csv");
    report::emit_records_csv(records, "cafe", csv_path);
    CHECK(slurp(csv_path) == report::render_records_csv(records, "cafe"));
    CHECK_FALSE(std::filesystem::exists(csv_path + ".tmp"));

    report::Report rep;
    rep.config_hash = "cafe";
    const std::string json_path = dir.file("out.json");
    report::emit_report_json(rep, json_path);
    CHECK(report::parse_report_json(slurp(json_path)) == rep);

    // overwrite is atomic too: the file never holds a partial mix
    report::emit_records_csv(records, "beef", csv_path);
    CHECK(slurp(csv_path).find("beef") != std::string::npos);

    CHECK_THROWS_AS(
        report::write_file_atomic("/nonexistent_dir_sclab/x.csv", "payload"), IoError);
}
