#include "xdpre/bench.hpp"
#include "xdpre/errors.hpp"

#include "bench_fixture.hpp"

#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>

using namespace xdpre;
using namespace xdpre::bench;
using groups::Backend;

TEST_CASE("fixed-point formatting") {
    CHECK(format_ms(415.69449) == "415.6945");
    CHECK(format_ms(0.5) == "0.5000");
    CHECK(format_pct(0.4982) == "49.82");
    CHECK(format_pct(1.0) == "100.00");
}

TEST_CASE("default config mirrors the reported experiment") {
    auto cfg = default_config(Backend::debug_backend());
    REQUIRE(cfg.attribute_sets.size() == 2);
    CHECK(cfg.attribute_sets[0].first == "A1");
    CHECK(cfg.attribute_sets[0].second ==
          std::vector<std::string>{"Doctor", "Professor", "Researcher"});
    CHECK(cfg.attribute_sets[1].second ==
          std::vector<std::string>{"Doctor", "Professor", "Researcher", "Student"});
    CHECK(cfg.messages == std::vector<std::string>{"OISP Symposium",
                                                   "The 9th Student Conference"});
    CHECK(cfg.trial_counts == std::vector<std::size_t>{1000, 1500, 2000});
    CHECK(cfg.samples == 10);
}

TEST_CASE("cell games reproduce the independent game at the same seed") {
    auto cfg = default_config(Backend::debug_backend());
    cfg.samples = 2;
    cfg.trial_counts = {60};
    auto report = run_suite(cfg);
    REQUIRE(report.cells.size() == 4);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
            const auto& cell = report.cells[(i * 2 + j) * 1 + 0];
            auto game = cell_game(cfg, i, j, 0);
            CHECK(game.seed == cell_seed(cfg.seed, i, j, 0));
            CHECK(cell.seed == game.seed);
            CHECK(indcpa::run_game(game).win_rate == cell.win_rate);
        }
}

TEST_CASE("suite keeps going when one cell is broken") {
    auto cfg = default_config(Backend::debug_backend());
    cfg.samples = 1;
    cfg.trial_counts = {5};
    cfg.attribute_sets.push_back({"BAD", {"b"}});
    auto report = run_suite(cfg);
    REQUIRE(report.cells.size() == 6);
    std::size_t errs = 0;
    for (const auto& c : report.cells)
        if (!c.error.empty()) {
            ++errs;
            CHECK(c.error.rfind("ReservedAttribute", 0) == 0);
        }
    CHECK(errs == 2);
    auto md = emit_table(report, TableFormat::markdown);
    CHECK(md.find("error: ReservedAttribute") != std::string::npos);
}

TEST_CASE("config validation") {
    auto cfg = default_config(Backend::debug_backend());
    auto no_samples = cfg;
    no_samples.samples = 0;
    CHECK_THROWS_AS((void)run_suite(no_samples), InvalidParameter);
    auto no_counts = cfg;
    no_counts.trial_counts.clear();
    CHECK_THROWS_AS((void)run_suite(no_counts), InvalidParameter);
    auto no_sets = cfg;
    no_sets.attribute_sets.clear();
    CHECK_THROWS_AS((void)run_suite(no_sets), InvalidParameter);
    auto no_messages = cfg;
    no_messages.messages.clear();
    CHECK_THROWS_AS((void)run_suite(no_messages), InvalidParameter);
}

TEST_CASE("win rates are stable across suite runs") {
    auto cfg = default_config(Backend::debug_backend());
    cfg.samples = 1;
    cfg.trial_counts = {40};
    auto r1 = run_suite(cfg);
    auto r2 = run_suite(cfg);
    REQUIRE(r1.cells.size() == r2.cells.size());
    for (std::size_t i = 0; i < r1.cells.size(); ++i) {
        CHECK(r1.cells[i].win_rate == r2.cells[i].win_rate);
        CHECK(r1.cells[i].seed == r2.cells[i].seed);
    }
}

TEST_CASE("markdown layout is bit-stable for fixed content") {
    auto report = testsupport::synthetic_report();
    auto md = emit_table(report, TableFormat::markdown);
    CHECK(md == emit_table(report, TableFormat::markdown));
    CHECK(md.find("# Bench report") == 0);
    CHECK(md.find("- environment: test") != std::string::npos);
    CHECK(md.find("| trials | A1 / OISP Symposium | A2 / OISP Symposium | "
                  "A1 / The 9th Student Conference | A2 / The 9th Student Conference |") !=
          std::string::npos);
    CHECK(md.find("415.6945 ms, 48.93%") != std::string::npos);

    std::ifstream in(std::string(XDPRE_GOLDEN_DIR) + "/bench_markdown.golden",
                     std::ios::binary);
    REQUIRE(bool(in));
    std::ostringstream ss;
    ss << in.rdbuf();
    CHECK(md == ss.str());
}

TEST_CASE("csv output quotes embedded separators") {
    auto report = testsupport::synthetic_report();
    report.cells[0].message = "a,b";
    report.cells[1].message = "say \"hi\"";
    auto csv = emit_table(report, TableFormat::csv);
    CHECK(csv.rfind("set,message,trials,mean_ms,win_rate_pct,error\n", 0) == 0);
    CHECK(csv.find("\"a,b\"") != std::string::npos);
    CHECK(csv.find("\"say \"\"hi\"\"\"") != std::string::npos);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == long(report.cells.size()) + 1);
}
