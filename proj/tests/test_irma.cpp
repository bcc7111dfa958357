#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "rgbc/barcode.hpp"
#include "rgbc/errors.hpp"
#include "rgbc/irma.hpp"
#include "testutil.hpp"

using namespace rgbc;

namespace {

HierarchyStats training_stats() {
    std::vector<IrmaCode> codes;
    for (const std::string& s : testutil::irma_training_codes()) codes.push_back(parse_irma(s));
    return build_hierarchy(codes);
}

struct ScoredPair {
    const char* truth;
    const char* pred;
    double expected;
};

// frozen expected values, produced by tests/scripts/score_irma_cases.py
const ScoredPair kScoredPairs[] = {
#include "data/irma_cases.inc"
};

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) : path("irma_test_" + name) {}
    ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("parse accepts the documented shapes") {
    IrmaCode c = parse_irma("1121-120-200-700");
    CHECK(c.axes[0] == "1121");
    CHECK(c.axes[1] == "120");
    CHECK(c.axes[2] == "200");
    CHECK(c.axes[3] == "700");
    CHECK(c.to_string() == "1121-120-200-700");
    CHECK_FALSE(c.has_wildcard());

    CHECK(parse_irma("112A-12F-2B0-700").to_string() == "112a-12f-2b0-700");
    CHECK(parse_irma("****-***-***-***").has_wildcard());
    CHECK(parse_irma("112*-120-200-700").axes[0] == "112*");
}

TEST_CASE("parse rejects structural violations") {
    CHECK_THROWS_AS(parse_irma("1121-12-200-700"), FormatError);  // D axis too short
    CHECK_THROWS_AS(parse_irma("1121-120-200-7000"), FormatError);
    CHECK_THROWS_AS(parse_irma("1121_120_200_700"), FormatError);
    CHECK_THROWS_AS(parse_irma("1121-120-200"), FormatError);
    CHECK_THROWS_AS(parse_irma("11!1-120-200-700"), FormatError);
    CHECK_THROWS_AS(parse_irma(""), FormatError);
}

TEST_CASE("hierarchy counting") {
    auto b_of = [](const HierarchyStats& s, int axis, const std::string& prefix) {
        return s.axes[static_cast<std::size_t>(axis)].b(prefix);
    };
    // a lone code gives b = 1 everywhere it reaches
    HierarchyStats solo = build_hierarchy({parse_irma("1121-120-200-700")});
    CHECK(b_of(solo, 0, "") == 1);
    CHECK(b_of(solo, 0, "112") == 1);
    CHECK(b_of(solo, 3, "70") == 1);

    // two codes differing only at the first T position split the T root
    HierarchyStats pair = build_hierarchy(
        {parse_irma("1121-120-200-700"), parse_irma("2121-120-200-700")});
    CHECK(b_of(pair, 0, "") == 2);
    CHECK(b_of(pair, 0, "1") == 1);
    CHECK(b_of(pair, 1, "") == 1);

    bool known = true;
    CHECK(pair.axes[0].b("999", &known) == 1); // unseen prefix falls back to 1
    CHECK_FALSE(known);

    CHECK_THROWS_AS(build_hierarchy({}), ConfigError);
    CHECK_THROWS_AS(build_hierarchy({parse_irma("112*-120-200-700")}), ConfigError);
}

TEST_CASE("hierarchy file loader") {
    TempFile f("stats.txt");
    std::ofstream(f.path) << "# branch counts\n"
                             "T - 3\n"
                             "T 1 2\n"
                             "d 12 4   # axis letters fold case\n"
                             "B 70 1\n";
    HierarchyStats s = load_hierarchy(f.path);
    CHECK(s.axes[0].b("") == 3);
    CHECK(s.axes[0].b("1") == 2);
    CHECK(s.axes[1].b("12") == 4);
    CHECK(s.axes[3].b("70") == 1);

    std::ofstream(f.path) << "X - 3\n";
    CHECK_THROWS_AS(load_hierarchy(f.path), FormatError);
    std::ofstream(f.path) << "T - 0\n";
    CHECK_THROWS_AS(load_hierarchy(f.path), FormatError);
    std::ofstream(f.path) << "T 1234 2\n"; // prefix as long as the axis
    CHECK_THROWS_AS(load_hierarchy(f.path), FormatError);
    std::ofstream(f.path) << "T - 2 extra\n";
    CHECK_THROWS_AS(load_hierarchy(f.path), FormatError);
    std::ofstream(f.path) << "# nothing\n";
    CHECK_THROWS_AS(load_hierarchy(f.path), FormatError);
    CHECK_THROWS_AS(load_hierarchy("no_such_stats.txt"), IoError);
}

TEST_CASE("error metric boundary values") {
    HierarchyStats stats = training_stats();
    IrmaCode truth = parse_irma("1121-120-200-700");

    CHECK(total_error(truth, truth, stats) == 0.0);
    // wrong from position 1 in one axis saturates that axis at 0.25
    CHECK(total_error(truth, parse_irma("3121-120-200-700"), stats) == doctest::Approx(0.25));
    // wrong everywhere saturates the whole code at 1
    CHECK(total_error(truth, parse_irma("3333-333-333-333"), stats) ==
          doctest::Approx(1.0));
    // a fully unspecified prediction halves every position's penalty
    CHECK(total_error(truth, parse_irma("****-***-***-***"), stats) ==
          doctest::Approx(0.5));
    CHECK(axis_error("1121", "****", stats.axes[0]) == doctest::Approx(0.125));
    // unspecified truth tail drops out of the comparison
    CHECK(axis_error("1***", "1999", stats.axes[0]) == 0.0);
    CHECK(axis_error("****", "1121", stats.axes[0]) == 0.0);
}

TEST_CASE("cascade: errors absorb, wildcards absorb") {
    HierarchyStats stats = training_stats();
    // wrong at position 2 then "correct" positions afterwards still count wrong
    double early_wrong = axis_error("1121", "1221", stats.axes[0]);
    double late_wrong = axis_error("1121", "1122", stats.axes[0]);
    CHECK(early_wrong > late_wrong);
    // wildcard at position 2 halves everything downstream
    double early_wild = axis_error("1121", "1***", stats.axes[0]);
    CHECK(early_wild == doctest::Approx(0.5 * early_wrong));
}

TEST_CASE("frozen pair scores match the reference scorer") {
    HierarchyStats stats = training_stats();
    std::size_t n = sizeof(kScoredPairs) / sizeof(kScoredPairs[0]);
    CHECK(n == 20);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& pair = kScoredPairs[i];
        double got = total_error(parse_irma(pair.truth), parse_irma(pair.pred), stats);
        INFO("case ", i, ": ", pair.truth, " vs ", pair.pred);
        CHECK(got == doctest::Approx(pair.expected).epsilon(1e-12));
    }
}

TEST_CASE("unknown prefixes are counted") {
    HierarchyStats stats = training_stats();
    std::size_t misses = 0;
    axis_error("9999", "9999", stats.axes[0], &misses);
    CHECK(misses == 3); // prefixes "9", "99", "999" unseen; root is known
}

TEST_CASE("evaluate on a tiny controlled corpus") {
    // two distinctive images, archived with their own codes
    std::mt19937 rng(61);
    Matrix stripes(24, 24), blob(24, 24);
    for (std::size_t r = 0; r < 24; ++r)
        for (std::size_t c = 0; c < 24; ++c) {
            stripes(r, c) = (c / 3) % 2 ? 0.9 : 0.1;
            double dr = (double(r) - 12.0) / 6.0, dc = (double(c) - 12.0) / 6.0;
            blob(r, c) = std::exp(-0.5 * (dr * dr + dc * dc));
        }

    EncoderConfig cfg = default_config(Method::RBC, 0, 0, 23, 23, 4);
    BarcodeArchive archive;
    archive.method = Method::RBC;
    archive.config = cfg;
    archive.n_bits = static_cast<std::uint32_t>(code_length(Method::RBC, cfg));
    archive.add({"stripes", "1121-120-200-700", encode(Method::RBC, stripes, cfg).bits});
    archive.add({"blob", "2121-220-230-921", encode(Method::RBC, blob, cfg).bits});

    HierarchyStats stats = training_stats();
    std::vector<QueryItem> queries;
    queries.push_back({"q_stripes", stripes, parse_irma("1121-120-200-700")});
    queries.push_back({"q_blob", blob, parse_irma("2121-220-230-921")});

    EvaluationReport report = evaluate(archive, queries, stats, 2);
    CHECK(report.n_queries == 2);
    CHECK(report.e_total == 0.0);
    CHECK(report.accuracy == 1.0);
    CHECK(report.queries[0].hit_id == "stripes");
    CHECK(report.queries[0].similarity == 1.0);
    CHECK(report.queries[1].hit_id == "blob");
    CHECK(report.l_code == 512);
    CHECK(report.mean_query_seconds >= 0.0);

    // leave-one-out: the id-matched entry is excluded, so each query
    // lands on the other image and scores its full cross-class error
    std::vector<QueryItem> loo;
    loo.push_back({"stripes", stripes, parse_irma("1121-120-200-700")});
    EvaluationReport cross = evaluate(archive, loo, stats, 1);
    CHECK(cross.queries[0].hit_id == "blob");
    CHECK(cross.e_total ==
          doctest::Approx(total_error(parse_irma("1121-120-200-700"),
                                      parse_irma("2121-220-230-921"), stats)));

    // a code-less first hit is an error
    BarcodeArchive uncoded;
    uncoded.method = Method::RBC;
    uncoded.config = cfg;
    uncoded.n_bits = archive.n_bits;
    uncoded.add({"nolabel", "", encode(Method::RBC, stripes, cfg).bits});
    CHECK_THROWS_AS(evaluate(uncoded, queries, stats, 1), ConfigError);
    CHECK_THROWS_AS(evaluate(archive, {}, stats, 1), ConfigError);
}

TEST_CASE("suitability formula") {
    std::vector<std::pair<double, double>> rows{
        {478.54, 8192.0}, {322.41, 6282.0}, {476.62, 512.0}};
    std::vector<double> eta = suitability(rows);
    REQUIRE(eta.size() == 3);
    CHECK(eta[0] == 1.0); // the row holding both maxima
    for (double e : eta) CHECK(e >= 1.0);
    CHECK(eta[2] == doctest::Approx((478.54 * 8192.0) / (476.62 * 512.0)));

    CHECK_THROWS_AS(suitability({}), ConfigError);
    CHECK_THROWS_AS(suitability({{0.0, 10.0}}), ConfigError);
    CHECK_THROWS_AS(suitability({{10.0, 0.0}}), ConfigError);
}
