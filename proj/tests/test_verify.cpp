#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include <json.hpp>

#include "kippen/criteria.hpp"
#include "kippen/verify.hpp"
#include "support.hpp"

using namespace kippen;
using namespace kippen::verify;

namespace {

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("theorem ids") {
    const auto ids = theorem_ids();
    const std::set<std::string> unique(ids.begin(), ids.end());
    CHECK(unique.size() == ids.size());
    for (const char* id : {"gww-rank3", "thm-5-1", "thm-5-2", "thm-5-3", "thm-6-1", "prop-6-1", "cor-6-1", "thm-7-1",
                           "prop-7-1", "prop-7-2", "prop-7-3", "thm-7-2", "cor-7-1", "prop-8-1", "thm-8-1", "cor-8-1",
                           "thm-8-2", "thm-8-3", "thm-3-1", "prop-3-1", "thm-3-2", "gww-rank4-n6"})
        CHECK(unique.count(id) == 1);
    CHECK_THROWS_AS(run_theorem("no-such-theorem", 1, 1), std::invalid_argument);
}

TEST_CASE("every check passes at small trial counts") {
    const auto reports = run_suite(3, 12);
    CHECK(reports.size() == theorem_ids().size());
    for (const auto& r : reports) {
        CAPTURE(r.id);
        CHECK(r.trials == 12);
        if (!r.exploratory) CHECK(r.failures == 0);
        CHECK(r.witnesses.size() <= 5);
        CHECK(std::isfinite(r.worst_residual));
        CHECK_FALSE(r.claim.empty());
    }
    CHECK(total_failures(reports) == 0);
    const auto table = report_table(reports);
    for (const auto& r : reports) CHECK(table.find(r.id) != std::string::npos);
}

TEST_CASE("reports are byte-identical per seed") {
    const std::optional<std::string> only = "thm-8-3";
    const auto a = report_json(5, run_suite(5, 10, only));
    const auto b = report_json(5, run_suite(5, 10, only));
    CHECK(a == b);
    const auto c = report_json(6, run_suite(6, 10, only));
    CHECK(a != c);

    const auto j = nlohmann::json::parse(a);
    CHECK(j["seed"] == 5);
    REQUIRE(j["theorems"].size() == 1);
    const auto& t = j["theorems"][0];
    for (const char* key : {"theoremId", "trials", "failures", "worstResidual", "witnesses"}) CHECK(t.contains(key));
    CHECK(t["theoremId"] == "thm-8-3");
    CHECK(t["trials"] == 10);
}

TEST_CASE("thm-8-3 carries agreement counters") {
    const auto r = run_theorem("thm-8-3", 9, 30);
    CHECK(r.failures == 0);
    CHECK(r.counters.count("crith_plus_holds") == 1);
    CHECK(r.counters.count("agreement") == 1);
    CHECK(r.counters.at("agreement") == doctest::Approx(30.0));
}

TEST_CASE("exploratory checks never count") {
    TheoremReport r;
    r.id = "x";
    r.exploratory = true;
    r.failures = 3;
    TheoremReport s;
    s.id = "y";
    s.failures = 2;
    CHECK(total_failures({r, s}) == 2);
}

TEST_CASE("worked examples report") {
    const auto rep = reproduce_paper_examples(KIPPEN_DATA_DIR);
    std::set<std::string> names;
    for (const auto& row : rep.rows) names.insert(row.name);
    for (const char* n : {"example1", "example2", "example3", "figure1", "figure2", "figure3"}) CHECK(names.count(n) == 1);
    for (const auto& row : rep.rows) {
        CHECK_FALSE(row.expected.empty());
        CHECK_FALSE(row.computed.empty());
    }
    // figures and the first two examples; the third is judged by the acceptance run
    for (const auto& row : rep.rows)
        if (row.name != "example3") {
            CAPTURE(row.name + " " + row.quantity);
            CHECK(row.pass);
        }
    const auto table = examples_table(rep);
    CHECK(table.find("example2") != std::string::npos);
    CHECK(examples_table(reproduce_paper_examples(KIPPEN_DATA_DIR)) == table);
}

TEST_CASE("corrupted data is a failing row") {
    const auto dir = scratch("kippen_verify_corrupt");
    for (const auto& e : std::filesystem::directory_iterator(KIPPEN_DATA_DIR))
        std::filesystem::copy_file(e.path(), dir / e.path().filename());
    {
        std::ofstream out(dir / "example2.json", std::ios::trunc);
        out << "{\"n\": 6, \"entries\": [";
    }
    const auto rep = reproduce_paper_examples(dir);
    CHECK_FALSE(rep.all_pass());
    bool load_failed = false;
    for (const auto& row : rep.rows)
        if (row.name == "example2" && !row.pass) load_failed = true;
    CHECK(load_failed);
    std::filesystem::remove_all(dir);
}

TEST_CASE("recover_ellipse on the two-circle family") {
    const double d = std::sqrt(0.96);
    for (double s : {0.3, 0.6, 0.99}) {
        const double h = std::sqrt(1.0 - s * s);
        pisom::Defect2Form f;
        f.b = std::sqrt(1.0 - d * d);
        f.d = d;
        f.e = s;
        f.h = h;
        const std::vector<double> radii{std::sqrt(1.0 - d) / 2.0, std::sqrt(1.0 + d) / 2.0};
        const auto e = recover_ellipse(f.matrix(), radii);
        CHECK(e.semi_major == doctest::Approx(0.5).epsilon(1e-3));
        const double lo = std::min(e.foci[0].real(), e.foci[1].real());
        const double hi = std::max(e.foci[0].real(), e.foci[1].real());
        CHECK(std::abs(lo) <= 1e-3);
        CHECK(std::abs(hi - h) <= 1e-3);
        CHECK(std::abs(e.foci[0].imag()) + std::abs(e.foci[1].imag()) <= 1e-3);
    }
}
