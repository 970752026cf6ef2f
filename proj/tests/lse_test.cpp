#include <optional>
#include <random>

#include "doctest.h"
#include "flsim/errors.hpp"
#include "flsim/lse.hpp"
#include "oracle.hpp"
#include "random_plant.hpp"
#include "test_plants.hpp"

using namespace flsim;
using namespace flsim::testsupport;

namespace {

// One or two busbars with per-unit constant SR curves; powers set directly.
struct Rig {
    GridConfig config;
    NetworkSnapshot snap;

    Rig(int busbars, const std::vector<Bustie>& ties = {}) {
        config.f0_hz = 50.0;
        for (int b = 0; b < busbars; ++b) config.busbars.push_back({"BB" + std::to_string(b + 1), ""});
        config.busties = ties;
        snap.bustie_closed.assign(ties.size(), true);
    }

    void gen(const std::string& id, const std::string& bus, const std::string& building,
             double power, double sr, bool closed = true) {
        Generator g;
        g.id = id;
        g.busbar = bus;
        g.building = building;
        g.rated_power_mw = 30.0;
        g.rated_apparent_power_mva = 37.5;
        g.inertia_constant_s = 4.0;
        g.sr_curve = {{0.0, sr}};
        g.governor.p_max_mw = 30.0;
        g.governor.rated_power_mw = 30.0;
        g.governor.f0_hz = 50.0;
        config.generators.push_back(g);
        snap.gen_closed.push_back(closed);
        snap.gen_power_mw.push_back(power);
    }

    void load(const std::string& id, const std::string& bus, int priority, double power,
              bool sheddable = true, bool closed = true) {
        config.loads.push_back({id, bus, priority, sheddable});
        snap.load_closed.push_back(closed);
        snap.load_power_mw.push_back(power);
    }

    void tie(const std::string& bus, bool closed, double import) {
        config.tie = {"TIE1", bus, true};
        snap.tie_closed = closed;
        snap.imported_power_mw = import;
    }

    NetworkSnapshot ready() {
        REQUIRE(validate_config(config).ok());
        normalize_snapshot(config, snap);
        return snap;
    }
};

std::optional<double> single_pm(const PowerMismatch& pm) {
    std::optional<double> found;
    for (const auto& e : pm.entries) {
        if (!e.pm_mw) continue;
        REQUIRE_FALSE(found.has_value());
        found = e.pm_mw;
    }
    return found;
}

}  // namespace

TEST_CASE("generator-trip mismatch is output minus surviving reserve") {
    Rig rig(1);
    rig.gen("GA", "BB1", "BLD-A", 20.0, 4.0);
    rig.gen("GB", "BB1", "BLD-B", 5.0, 6.0);  // SR_tot = 10
    rig.load("LA", "BB1", 1, 8.0);
    auto snap = rig.ready();

    auto pm = compute_pm_generator_trip(rig.config, snap, "GA");
    CHECK(single_pm(pm) == 14.0);  // 20 - (10 - 4)

    CHECK_THROWS_AS(compute_pm_generator_trip(rig.config, snap, "GZ"), NotFoundError);
}

TEST_CASE("idling generator cannot cause a deficit") {
    Rig rig(1);
    rig.gen("GA", "BB1", "BLD-A", 0.0, 2.0);
    rig.gen("GB", "BB1", "BLD-B", 10.0, 5.0);  // SR_tot - SR_i = 5
    auto snap = rig.ready();
    CHECK(single_pm(compute_pm_generator_trip(rig.config, snap, "GA")) == -5.0);
}

TEST_CASE("lone generator must cover its whole output") {
    Rig rig(1);
    rig.gen("GA", "BB1", "BLD-A", 17.5, 3.0);  // SR_tot = SR_i
    auto snap = rig.ready();
    CHECK(single_pm(compute_pm_generator_trip(rig.config, snap, "GA")) == 17.5);
}

TEST_CASE("trip mismatch is scoped to the generator's sub-network") {
    Rig rig(2, {{"BT12", "BB1", "BB2"}});
    rig.gen("GA", "BB1", "BLD-A", 10.0, 2.0);
    rig.gen("GB", "BB2", "BLD-B", 10.0, 9.0);
    rig.snap.bustie_closed = {false};
    auto snap = rig.ready();

    auto pm = compute_pm_generator_trip(rig.config, snap, "GA");
    REQUIRE(pm.entries.size() == 2);
    CHECK(pm.entries[0].pm_mw == 10.0);  // GB's reserve is unreachable
    CHECK_FALSE(pm.entries[1].pm_mw.has_value());
}

TEST_CASE("bustie-opening mismatch is each side's net import minus reserve") {
    Rig rig(2, {{"BT12", "BB1", "BB2"}});
    rig.gen("GA", "BB1", "BLD-A", 28.0, 4.0);
    rig.gen("GB", "BB2", "BLD-B", 25.0, 3.0);
    rig.load("LA", "BB1", 1, 10.0);
    rig.load("LB", "BB2", 1, 16.0);
    rig.load("LC", "BB2", 2, 14.0);  // BB2 side: loads 30, gen 25, SR 3
    auto snap = rig.ready();

    auto pm = compute_pm_bustie_open(rig.config, snap, "BT12");
    REQUIRE(pm.entries.size() == 2);
    CHECK(pm.entries[0].pm_mw == 10.0 - 28.0 - 4.0);  // exporter, no shedding
    CHECK(pm.entries[1].pm_mw == 2.0);                // 30 - 25 - 3

    SUBCASE("already-open bustie is not a detectable transition") {
        rig.snap.bustie_closed = {false};
        auto open_snap = rig.ready();
        CHECK_THROWS_AS(compute_pm_bustie_open(rig.config, open_snap, "BT12"),
                        PreconditionError);
    }
}

TEST_CASE("balanced split sits exactly on the no-action boundary") {
    Rig rig(2, {{"BT12", "BB1", "BB2"}});
    rig.gen("GA", "BB1", "BLD-A", 10.0, 0.0);
    rig.gen("GB", "BB2", "BLD-B", 10.0, 0.0);
    rig.load("LA", "BB1", 1, 10.0);
    rig.load("LB", "BB2", 1, 10.0);
    auto snap = rig.ready();

    auto pm = compute_pm_bustie_open(rig.config, snap, "BT12");
    CHECK(pm.entries[0].pm_mw == 0.0);
    CHECK(pm.entries[1].pm_mw == 0.0);

    auto sel = select_loads(pm, rig.config, snap);
    CHECK(sel.subnets.empty());
    CHECK(sel.total_ps_mw() == 0.0);
    for (bool marked : sel.column) CHECK_FALSE(marked);
}

TEST_CASE("building loss loses every closed member against surviving reserve") {
    Rig rig(1);
    rig.gen("GA", "BB1", "BLD-X", 15.0, 1.0);
    rig.gen("GB", "BB1", "BLD-X", 12.0, 2.0);
    rig.gen("GC", "BB1", "BLD-Y", 9.0, 5.0);
    rig.gen("GD", "BB1", "BLD-Y", 9.0, 3.0);  // survivors' SR = 8
    auto snap = rig.ready();

    CHECK(single_pm(compute_pm_building_loss(rig.config, snap, "BLD-X")) == 19.0);  // 27 - 8
    CHECK_THROWS_AS(compute_pm_building_loss(rig.config, snap, "BLD-Z"), NotFoundError);

    SUBCASE("all members already open") {
        rig.snap.gen_closed[0] = false;
        rig.snap.gen_closed[1] = false;
        auto s = rig.ready();
        CHECK(single_pm(compute_pm_building_loss(rig.config, s, "BLD-X")) == -8.0);
    }

    SUBCASE("building holds every generator of the sub-network") {
        rig.snap.gen_closed[2] = false;
        rig.snap.gen_closed[3] = false;
        auto s = rig.ready();
        CHECK(single_pm(compute_pm_building_loss(rig.config, s, "BLD-X")) == 27.0);
    }
}

TEST_CASE("grid-blackout mismatch is the lost import minus local reserve") {
    Rig rig(1);
    rig.gen("GA", "BB1", "BLD-A", 10.0, 3.0);
    rig.load("LA", "BB1", 1, 15.0);
    rig.tie("BB1", true, 5.0);
    auto snap = rig.ready();
    CHECK(single_pm(compute_pm_grid_blackout(rig.config, snap)) == 2.0);

    SUBCASE("unused connection") {
        rig.snap.imported_power_mw = 0.0;
        auto s = rig.ready();
        CHECK(single_pm(compute_pm_grid_blackout(rig.config, s)) == -3.0);
    }
    SUBCASE("exporting to the grid") {
        rig.snap.imported_power_mw = -4.0;
        auto s = rig.ready();
        CHECK(single_pm(compute_pm_grid_blackout(rig.config, s)) == -7.0);
    }
    SUBCASE("open tie breaker") {
        rig.snap.tie_closed = false;
        auto s = rig.ready();
        CHECK_THROWS_AS(compute_pm_grid_blackout(rig.config, s), PreconditionError);
    }
}

TEST_CASE("no tie configured means no blackout event") {
    Rig rig(1);
    rig.gen("GA", "BB1", "BLD-A", 10.0, 3.0);
    auto snap = rig.ready();
    CHECK_THROWS_AS(compute_pm_grid_blackout(rig.config, snap), NotFoundError);
}

TEST_CASE("selection follows priority, then measured power, then id") {
    Rig rig(1);
    rig.gen("GA", "BB1", "BLD-A", 20.0, 0.0);
    rig.load("L1", "BB1", 1, 6.0);
    rig.load("L2", "BB1", 1, 9.0);
    rig.load("L3", "BB1", 2, 4.0);
    rig.load("L4", "BB1", 2, 8.0);
    auto snap = rig.ready();

    PowerMismatch pm;
    pm.entries.push_back({partition(rig.config, snap)[0], 14.0});

    auto sel = select_loads(pm, rig.config, snap);
    REQUIRE(sel.subnets.size() == 1);
    CHECK(sel.subnets[0].marked == std::vector<std::size_t>{1, 0});  // L2 first (9 > 6)
    CHECK(sel.subnets[0].ps_mw == 15.0);
    CHECK(sel.subnets[0].feasible);
    CHECK(sel.column == std::vector<bool>{true, true, false, false});

    SUBCASE("equal priority and power fall back to ascending id") {
        rig.snap.load_power_mw = {6.0, 6.0, 4.0, 8.0};
        auto s = rig.ready();
        PowerMismatch tied;
        tied.entries.push_back({partition(rig.config, s)[0], 5.0});
        auto pick = select_loads(tied, rig.config, s);
        CHECK(pick.subnets[0].marked == std::vector<std::size_t>{0});  // L1 before L2
    }
}

TEST_CASE("strict inequality keeps an exact-cover candidate insufficient") {
    Rig rig(1);
    rig.gen("GA", "BB1", "BLD-A", 5.0, 0.0);
    rig.load("L1", "BB1", 1, 5.0);
    auto snap = rig.ready();

    PowerMismatch pm;
    pm.entries.push_back({partition(rig.config, snap)[0], 5.0});
    auto sel = select_loads(pm, rig.config, snap);
    REQUIRE(sel.subnets.size() == 1);
    CHECK_FALSE(sel.subnets[0].feasible);
    CHECK_FALSE(sel.feasible());
    CHECK(sel.subnets[0].ps_mw == 5.0);
    CHECK(sel.subnets[0].shortfall_mw == 0.0);  // PS == PM still violates PS > PM
    CHECK(sel.column[0]);

    SUBCASE("shortfall reports the uncovered remainder") {
        PowerMismatch worse;
        worse.entries.push_back({partition(rig.config, snap)[0], 8.0});
        auto s = select_loads(worse, rig.config, snap);
        CHECK(s.subnets[0].shortfall_mw == 3.0);
    }
}

TEST_CASE("non-sheddable and open loads are never candidates") {
    Rig rig(1);
    rig.gen("GA", "BB1", "BLD-A", 12.0, 0.0);
    rig.load("L1", "BB1", 1, 6.0, false);        // non-sheddable
    rig.load("L2", "BB1", 1, 6.0, true, false);  // open
    rig.load("L3", "BB1", 2, 7.0);
    auto snap = rig.ready();

    PowerMismatch pm;
    pm.entries.push_back({partition(rig.config, snap)[0], 6.0});
    auto sel = select_loads(pm, rig.config, snap);
    CHECK(sel.column == std::vector<bool>{false, false, true});
}

TEST_CASE("matrix over the reference snapshot matches the hand computation") {
    auto cfg = chain_plant();
    auto snap = chain_snapshot();
    auto matrix = build_shedding_matrix(cfg, snap, enumerate_events(cfg));

    REQUIRE(matrix.rows() == 10);
    REQUIRE(matrix.cols() == 9);
    CHECK_FALSE(matrix.any_infeasible());

    auto column_ids = [&](std::size_t e) {
        std::vector<std::string> ids;
        for (std::size_t l = 0; l < matrix.rows(); ++l) {
            if (matrix.entry(l, e)) ids.push_back(matrix.load_ids[l]);
        }
        return ids;
    };

    // G1 trip: PM = 12 - (16 - 6) = 2 -> L02 alone covers it
    CHECK(column_ids(0) == std::vector<std::string>{"L02"});
    // G2 trip: PM = 10 - 10 = 0, no action on the boundary
    CHECK(column_ids(1).empty());
    CHECK(column_ids(2).empty());
    CHECK(column_ids(3).empty());
    // BT12 opening leaves BB2+BB3 with loads 17.5 against 6 MW + 4 SR
    CHECK(column_ids(4) == std::vector<std::string>{"L04", "L05", "L07", "L08"});
    // BT23 leaves BB3 self-sufficient
    CHECK(column_ids(5).empty());
    // BLD-A loss: PM = 22 - 4 = 18
    CHECK(column_ids(6) ==
          std::vector<std::string>{"L01", "L02", "L03", "L04", "L05", "L07", "L08"});
    CHECK(column_ids(7).empty());
    // tie is open in this snapshot: blackout column skipped
    CHECK(column_ids(8).empty());
    CHECK(matrix.info[8].skipped);
    CHECK_FALSE(matrix.info[0].skipped);

    // distinct, non-nested shed sets across columns (the published pattern)
    CHECK(matrix.columns[0] != matrix.columns[4]);
    CHECK_FALSE(matrix.entry(*cfg.load_index("L02"), 4));  // L02 shed for G1, not for BT12
    CHECK_FALSE(matrix.entry(*cfg.load_index("L04"), 0));  // L04 shed for BT12, not for G1
}

TEST_CASE("matrix zeroes rows of open or protected loads") {
    auto cfg = chain_plant();
    auto snap = chain_snapshot();
    snap.load_closed[1] = false;  // open L02
    normalize_snapshot(cfg, snap);
    auto matrix = build_shedding_matrix(cfg, snap, enumerate_events(cfg));
    for (std::size_t e = 0; e < matrix.cols(); ++e) {
        CHECK_FALSE(matrix.entry(1, e));                     // open load
        CHECK_FALSE(matrix.entry(5, e));                     // L06 non-sheddable
        CHECK_FALSE(matrix.entry(9, e));                     // L10 non-sheddable
    }
}

TEST_CASE("all non-positive mismatches give an all-zero matrix") {
    Rig rig(1);
    rig.gen("GA", "BB1", "BLD-A", 2.0, 6.0);
    rig.gen("GB", "BB1", "BLD-B", 2.0, 6.0);
    rig.load("LA", "BB1", 1, 4.0);
    auto snap = rig.ready();

    auto matrix = build_shedding_matrix(rig.config, snap, enumerate_events(rig.config));
    for (const auto& column : matrix.columns) {
        for (bool bit : column) CHECK_FALSE(bit);
    }
    CHECK_FALSE(matrix.any_infeasible());
}

TEST_CASE("an open generator's trip column is skipped") {
    auto cfg = chain_plant();
    auto snap = chain_snapshot();
    snap.gen_closed[0] = false;
    normalize_snapshot(cfg, snap);
    auto matrix = build_shedding_matrix(cfg, snap, enumerate_events(cfg));
    CHECK(matrix.info[0].skipped);
    for (std::size_t l = 0; l < matrix.rows(); ++l) CHECK_FALSE(matrix.entry(l, 0));
}

TEST_CASE("infeasible columns mark every candidate and carry the shortfall") {
    auto cfg = chain_plant();
    auto snap = chain_snapshot();
    snap.gen_closed[2] = false;  // islanding BB3 with no generation
    snap.gen_closed[3] = false;
    snap.bustie_closed[1] = false;  // BT23 open
    normalize_snapshot(cfg, snap);

    auto matrix = build_shedding_matrix(cfg, snap, enumerate_events(cfg));
    // BT12 opening leaves BB2 with 9.5 MW of load but 5.5 MW sheddable, and
    // the already-separate BB3 island with 8 MW against 6 MW sheddable
    const std::size_t bt12 = 4;
    CHECK(matrix.info[bt12].infeasible);
    CHECK(matrix.any_infeasible());
    CHECK(matrix.entry(3, bt12));  // L04
    CHECK(matrix.entry(4, bt12));  // L05
    CHECK(matrix.entry(6, bt12));  // L07
    CHECK(matrix.entry(7, bt12));  // L08
    CHECK(matrix.entry(8, bt12));  // L09
    CHECK_FALSE(matrix.entry(5, bt12));  // L06 stays protected even now
    REQUIRE(matrix.info[bt12].subnets.size() == 2);
    CHECK(matrix.info[bt12].subnets[0].shortfall_mw == 4.0);  // 9.5 - 5.5
    CHECK(matrix.info[bt12].subnets[1].shortfall_mw == 2.0);  // 8 - 6

    // the generator-trip columns keep working
    CHECK_FALSE(matrix.info[0].infeasible);
}

TEST_CASE("matrix equals the brute-force oracle on random plants") {
    std::mt19937 rng(40194);
    for (int trial = 0; trial < 100; ++trial) {
        auto plant = random_plant(rng);
        auto matrix =
            build_shedding_matrix(plant.config, plant.snapshot, enumerate_events(plant.config));
        auto expected = oracle_matrix(plant.config, plant.snapshot);

        REQUIRE(matrix.cols() == expected.size());
        for (std::size_t e = 0; e < matrix.cols(); ++e) {
            for (std::size_t l = 0; l < matrix.rows(); ++l) {
                CHECK(matrix.entry(l, e) == static_cast<bool>(expected[e].marks[l]));
            }
            CHECK(matrix.info[e].infeasible == expected[e].infeasible);
        }
    }
}

TEST_CASE("raising a survivor's reserve never grows any shed set") {
    std::mt19937 rng(52205);
    for (int trial = 0; trial < 50; ++trial) {
        auto plant = random_plant(rng);
        auto base = build_shedding_matrix(plant.config, plant.snapshot,
                                          enumerate_events(plant.config));

        auto richer = plant.snapshot;
        bool bumped = false;
        for (std::size_t g = 0; g < richer.gen_sr_mw.size(); ++g) {
            if (richer.gen_closed[g]) {
                richer.gen_sr_mw[g] += 1.0;
                bumped = true;
                break;
            }
        }
        if (!bumped) continue;

        auto more = build_shedding_matrix(plant.config, richer, enumerate_events(plant.config));
        for (std::size_t e = 0; e < base.cols(); ++e) {
            for (std::size_t l = 0; l < base.rows(); ++l) {
                if (more.entry(l, e)) CHECK(base.entry(l, e));
            }
        }
    }
}

TEST_CASE("matrix construction is a pure function") {
    auto cfg = chain_plant();
    auto snap = chain_snapshot();
    auto a = build_shedding_matrix(cfg, snap, enumerate_events(cfg));
    auto b = build_shedding_matrix(cfg, snap, enumerate_events(cfg));
    CHECK(a.columns == b.columns);
    for (std::size_t e = 0; e < a.cols(); ++e) {
        CHECK(a.info[e].skipped == b.info[e].skipped);
        CHECK(a.info[e].infeasible == b.info[e].infeasible);
    }
}
