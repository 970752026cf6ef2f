#include "random_plant.hpp"

#include <stdexcept>
#include <string>

namespace flsim::testsupport {

namespace {

int uniform(std::mt19937& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

bool chance(std::mt19937& rng, double p) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

std::string pad2(int n) {
    return n < 10 ? "0" + std::to_string(n) : std::to_string(n);
}

}  // namespace

double quarters(std::mt19937& rng, int lo, int hi) {
    return uniform(rng, lo, hi) * 0.25;
}

GridConfig random_config(std::mt19937& rng) {
    GridConfig cfg;
    cfg.plant_name = "random-plant";
    cfg.f0_hz = 50.0;

    const int n_bus = uniform(rng, 1, 3);
    for (int b = 0; b < n_bus; ++b) cfg.busbars.push_back({"BB" + std::to_string(b + 1), ""});
    if (n_bus >= 2) cfg.busties.push_back({"BT12", "BB1", "BB2"});
    if (n_bus == 3) {
        cfg.busties.push_back({"BT23", "BB2", "BB3"});
        if (chance(rng, 1.0 / 3.0)) cfg.busties.push_back({"BT13", "BB1", "BB3"});
    }

    const char* buildings[] = {"BLD-A", "BLD-B", "BLD-C"};
    const int n_gens = uniform(rng, 1, 6);
    for (int g = 0; g < n_gens; ++g) {
        Generator gen;
        gen.id = "G" + std::to_string(g + 1);
        gen.busbar = cfg.busbars[uniform(rng, 0, n_bus - 1)].id;
        gen.building = buildings[uniform(rng, 0, 2)];
        gen.rated_power_mw = 30.0;
        gen.rated_apparent_power_mva = 37.5;
        gen.inertia_constant_s = 4.0;
        const int points = uniform(rng, 0, 3);
        double power = quarters(rng, 0, 8);
        for (int p = 0; p < points; ++p) {
            gen.sr_curve.push_back({power, quarters(rng, 0, 32)});
            power += quarters(rng, 1, 40);
        }
        gen.governor.p_max_mw = 30.0;
        gen.governor.rated_power_mw = gen.rated_power_mw;
        gen.governor.f0_hz = cfg.f0_hz;
        cfg.generators.push_back(gen);
    }

    const int n_loads = uniform(rng, 0, 20);
    for (int l = 0; l < n_loads; ++l) {
        Load load;
        load.id = "L" + pad2(l + 1);
        load.busbar = cfg.busbars[uniform(rng, 0, n_bus - 1)].id;
        load.priority = uniform(rng, 1, 4);
        load.sheddable = chance(rng, 0.8);
        cfg.loads.push_back(load);
    }

    if (chance(rng, 0.5)) {
        cfg.tie.present = true;
        cfg.tie.id = "TIE1";
        cfg.tie.busbar = cfg.busbars[uniform(rng, 0, n_bus - 1)].id;
    }

    if (!validate_config(cfg).ok()) {
        throw std::logic_error("random_config produced an invalid config");
    }
    return cfg;
}

NetworkSnapshot random_snapshot(const GridConfig& config, std::mt19937& rng) {
    NetworkSnapshot snap;
    snap.timestamp_s = 0.0;
    for (std::size_t g = 0; g < config.generators.size(); ++g) {
        snap.gen_closed.push_back(chance(rng, 0.75));
        snap.gen_power_mw.push_back(quarters(rng, 0, 120));
    }
    for (std::size_t l = 0; l < config.loads.size(); ++l) {
        snap.load_closed.push_back(chance(rng, 0.85));
        snap.load_power_mw.push_back(quarters(rng, 0, 32));
    }
    for (std::size_t t = 0; t < config.busties.size(); ++t) {
        snap.bustie_closed.push_back(chance(rng, 0.7));
    }
    if (config.tie.present) {
        snap.tie_closed = chance(rng, 0.5);
        snap.imported_power_mw = quarters(rng, -20, 80);
    }
    normalize_snapshot(config, snap);
    return snap;
}

RandomPlant random_plant(std::mt19937& rng) {
    RandomPlant plant;
    plant.config = random_config(rng);
    plant.snapshot = random_snapshot(plant.config, rng);
    return plant;
}

NetworkSnapshot open_some_breakers(const GridConfig& config, const NetworkSnapshot& prev,
                                   std::mt19937& rng) {
    NetworkSnapshot next = prev;
    next.timestamp_s = prev.timestamp_s + 0.1;
    for (std::size_t g = 0; g < next.gen_closed.size(); ++g) {
        if (next.gen_closed[g] && chance(rng, 0.3)) next.gen_closed[g] = false;
    }
    for (std::size_t t = 0; t < next.bustie_closed.size(); ++t) {
        if (next.bustie_closed[t] && chance(rng, 0.3)) next.bustie_closed[t] = false;
    }
    if (next.tie_closed && chance(rng, 0.3)) next.tie_closed = false;
    normalize_snapshot(config, next);
    return next;
}

}  // namespace flsim::testsupport
