#include <algorithm>
#include <random>

#include "doctest.h"
#include "flsim/errors.hpp"
#include "flsim/grid.hpp"
#include "oracle.hpp"
#include "random_plant.hpp"
#include "test_plants.hpp"

using namespace flsim;
using namespace flsim::testsupport;

namespace {

bool has_code(const ValidationReport& report, const std::string& code) {
    return std::any_of(report.findings.begin(), report.findings.end(),
                       [&](const Finding& f) { return f.code == code; });
}

}  // namespace

TEST_CASE("validate accepts the reference layout") {
    CHECK(validate_config(chain_plant()).ok());
    CHECK(validate_config(small_plant()).ok());
}

TEST_CASE("validate flags a dangling busbar reference") {
    auto cfg = chain_plant();
    cfg.loads[0].busbar = "B9";
    auto report = validate_config(cfg);
    REQUIRE(report.findings.size() == 1);
    CHECK(report.findings[0].code == "dangling-reference");
    CHECK(report.findings[0].element == "L01");
}

TEST_CASE("validate flags more than three busbars") {
    auto cfg = chain_plant();
    cfg.busbars.push_back({"BB4", ""});
    cfg.busties.push_back({"BT34", "BB3", "BB4"});
    auto report = validate_config(cfg);
    CHECK(has_code(report, "busbar-count"));
}

TEST_CASE("validate flags structural defects") {
    auto cfg = chain_plant();
    cfg.busbars.push_back(cfg.busbars[0]);
    CHECK(has_code(validate_config(cfg), "duplicate-id"));

    cfg = chain_plant();
    cfg.busties[0].busbar_b = "BB1";
    CHECK(has_code(validate_config(cfg), "bustie-endpoints"));

    cfg = chain_plant();
    cfg.busties.push_back({"BTX", "BB2", "BB1"});
    CHECK(has_code(validate_config(cfg), "duplicate-bustie-pair"));

    cfg = chain_plant();
    cfg.busties.pop_back();
    CHECK(has_code(validate_config(cfg), "disconnected"));

    cfg = chain_plant();
    cfg.loads[2].priority = 0;
    CHECK(has_code(validate_config(cfg), "priority"));

    cfg = chain_plant();
    cfg.fls.lse_period_s = 0.25;
    CHECK(has_code(validate_config(cfg), "lse-period"));

    cfg = chain_plant();
    cfg.generators[1].sr_curve[2].sr_mw = -1.0;
    CHECK(has_code(validate_config(cfg), "sr-curve"));

    cfg = chain_plant();
    cfg.generators[1].sr_curve[2].power_mw = cfg.generators[1].sr_curve[1].power_mw;
    CHECK(has_code(validate_config(cfg), "sr-curve-order"));

    cfg = chain_plant();
    cfg.generators[0].inertia_constant_s = 0.0;
    CHECK(has_code(validate_config(cfg), "inertia"));
}

TEST_CASE("validate finding order is deterministic") {
    auto cfg = chain_plant();
    cfg.loads[0].busbar = "B9";
    cfg.loads[5].priority = -1;
    cfg.generators[3].rated_power_mw = 0.0;
    auto a = validate_config(cfg);
    auto b = validate_config(cfg);
    REQUIRE(a.findings.size() == b.findings.size());
    for (std::size_t i = 0; i < a.findings.size(); ++i) {
        CHECK(a.findings[i].code == b.findings[i].code);
        CHECK(a.findings[i].element == b.findings[i].element);
    }
}

TEST_CASE("sr curve is a left-step function with a zero band") {
    const auto gen = chain_plant().generators[0];
    // breakpoints: (0,2) (5,4) (10,6) (18,0) (22,5)
    CHECK(evaluate_sr(gen, 0.0) == 2.0);
    CHECK(evaluate_sr(gen, 4.75) == 2.0);
    CHECK(evaluate_sr(gen, 5.0) == 4.0);
    CHECK(evaluate_sr(gen, 9.99) == 4.0);
    CHECK(evaluate_sr(gen, 14.0) == 6.0);
    CHECK(evaluate_sr(gen, 18.0) == 0.0);   // DLE band start
    CHECK(evaluate_sr(gen, 21.75) == 0.0);  // inside the band
    CHECK(evaluate_sr(gen, 22.0) == 5.0);
    CHECK(evaluate_sr(gen, 30.0) == 5.0);
    CHECK(evaluate_sr(gen, -1.0) == 2.0);  // clamped to the first breakpoint

    Generator bare = gen;
    bare.sr_curve.clear();
    CHECK(evaluate_sr(bare, 10.0) == 0.0);
}

TEST_CASE("normalize zeroes measurements behind open breakers") {
    auto cfg = chain_plant();
    auto snap = chain_snapshot();
    snap.gen_closed[1] = false;
    snap.load_closed[3] = false;
    snap.gen_power_mw[1] = 7.0;
    snap.load_power_mw[3] = 9.0;
    normalize_snapshot(cfg, snap);
    CHECK(snap.gen_power_mw[1] == 0.0);
    CHECK(snap.load_power_mw[3] == 0.0);
    CHECK(snap.gen_sr_mw[1] == 0.0);
    CHECK(snap.imported_power_mw == 0.0);  // tie open

    // curve lookup for the closed units: 12 -> 6, 4 -> 2, 2 -> 2
    CHECK(snap.gen_sr_mw[0] == 6.0);
    CHECK(snap.gen_sr_mw[2] == 2.0);
    CHECK(snap.gen_sr_mw[3] == 2.0);

    normalize_snapshot(cfg, snap, 3.5);
    CHECK(snap.gen_sr_mw[0] == 3.5);
    CHECK(snap.gen_sr_mw[1] == 0.0);  // still open
}

TEST_CASE("normalize rejects a snapshot that does not cover the config") {
    auto cfg = chain_plant();
    auto snap = chain_snapshot();
    snap.bustie_closed.pop_back();
    CHECK_THROWS_AS(normalize_snapshot(cfg, snap), IncompleteInputError);
}

TEST_CASE("partition follows closed busties") {
    auto cfg = chain_plant();
    auto snap = chain_snapshot();

    auto subs = partition(cfg, snap);
    REQUIRE(subs.size() == 1);
    CHECK(subs[0].busbars == std::vector<std::size_t>{0, 1, 2});
    CHECK(subs[0].generators == std::vector<std::size_t>{0, 1, 2, 3});
    CHECK(subs[0].loads.size() == 10);
    CHECK(subs[0].has_tie);

    snap.bustie_closed = {false, false};
    subs = partition(cfg, snap);
    REQUIRE(subs.size() == 3);
    for (const auto& s : subs) CHECK(s.busbars.size() == 1);

    snap.bustie_closed = {false, true};  // BT12 open, BT23 closed
    subs = partition(cfg, snap);
    REQUIRE(subs.size() == 2);
    CHECK(subs[0].busbars == std::vector<std::size_t>{0});
    CHECK(subs[1].busbars == std::vector<std::size_t>{1, 2});
    CHECK_FALSE(subs[0].has_tie);
    CHECK(subs[1].has_tie);

    auto excl = partition_excluding(cfg, chain_snapshot(), cfg.bustie_index("BT12"));
    REQUIRE(excl.size() == 2);
    CHECK(excl[0].busbars == std::vector<std::size_t>{0});
    CHECK(excl[1].busbars == std::vector<std::size_t>{1, 2});
}

TEST_CASE("partition agrees with brute-force reachability on random plants") {
    std::mt19937 rng(7101);
    for (int trial = 0; trial < 200; ++trial) {
        auto plant = random_plant(rng);
        auto subs = partition(plant.config, plant.snapshot);
        auto comps = oracle_components(plant.config, plant.snapshot.bustie_closed);

        // partition property: union = all busbars, pairwise disjoint
        std::vector<int> cover(plant.config.busbars.size(), 0);
        for (const auto& s : subs) {
            for (std::size_t b : s.busbars) cover[b] += 1;
        }
        for (int c : cover) CHECK(c == 1);

        REQUIRE(subs.size() == comps.size());
        for (const auto& s : subs) {
            // the oracle component holding the same lowest busbar must match exactly
            auto match = std::find_if(comps.begin(), comps.end(), [&](const auto& c) {
                return std::find(c.begin(), c.end(), s.busbars.front()) != c.end();
            });
            REQUIRE(match != comps.end());
            CHECK(*match == s.busbars);
        }
    }
}

TEST_CASE("event catalog covers every category in canonical order") {
    auto cfg = chain_plant();
    auto catalog = enumerate_events(cfg);
    REQUIRE(catalog.size() == 9);  // 4 gens + 2 busties + 2 buildings + tie

    std::vector<std::string> labels;
    for (const auto& e : catalog.events) labels.push_back(e.label);
    CHECK(labels == std::vector<std::string>{
                        "gen-trip:G1", "gen-trip:G2", "gen-trip:G3", "gen-trip:G4",
                        "bustie-open:BT12", "bustie-open:BT23", "building-loss:BLD-A",
                        "building-loss:BLD-B", "grid-blackout:TIE1"});
    for (std::size_t i = 0; i < catalog.size(); ++i) CHECK(catalog.events[i].index == i);
    CHECK(catalog.buildings == std::vector<std::string>{"BLD-A", "BLD-B"});
    CHECK(catalog.events[6].member_generators == std::vector<std::size_t>{0, 1});
    CHECK(catalog.events[7].member_generators == std::vector<std::size_t>{2, 3});

    // stable across calls
    auto again = enumerate_events(cfg);
    REQUIRE(again.size() == catalog.size());
    for (std::size_t i = 0; i < catalog.size(); ++i) {
        CHECK(again.events[i].label == catalog.events[i].label);
    }
}

TEST_CASE("event catalog handles degenerate configs") {
    auto cfg = small_plant();  // 2 gens, one building, no busties, no tie
    auto catalog = enumerate_events(cfg);
    CHECK(catalog.size() == 3);  // 2 trips + 1 building loss

    cfg.generators.pop_back();
    catalog = enumerate_events(cfg);
    CHECK(catalog.size() == 2);  // 1 trip + 1 building loss

    cfg = small_plant();
    cfg.generators[1].building = "BLD-B";
    catalog = enumerate_events(cfg);
    CHECK(catalog.size() == 4);  // 2 trips + 2 building losses
}
