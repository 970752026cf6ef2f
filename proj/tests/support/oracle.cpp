#include "oracle.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <string>
#include <tuple>

namespace flsim::testsupport {

namespace {

constexpr std::size_t no_skip = static_cast<std::size_t>(-1);

std::vector<char> reach_from(const GridConfig& cfg, const std::vector<bool>& closed,
                             std::size_t start, std::size_t skip) {
    std::vector<char> seen(cfg.busbars.size(), 0);
    std::queue<std::size_t> frontier;
    frontier.push(start);
    seen[start] = 1;
    while (!frontier.empty()) {
        const std::size_t at = frontier.front();
        frontier.pop();
        for (std::size_t t = 0; t < cfg.busties.size(); ++t) {
            if (t == skip || !closed[t]) continue;
            const std::size_t a = *cfg.busbar_index(cfg.busties[t].busbar_a);
            const std::size_t b = *cfg.busbar_index(cfg.busties[t].busbar_b);
            std::size_t other;
            if (a == at) {
                other = b;
            } else if (b == at) {
                other = a;
            } else {
                continue;
            }
            if (!seen[other]) {
                seen[other] = 1;
                frontier.push(other);
            }
        }
    }
    return seen;
}

bool in_component(const std::vector<char>& comp, std::size_t busbar) { return comp[busbar] != 0; }

bool gen_inside(const GridConfig& cfg, const std::vector<char>& comp, std::size_t g) {
    return in_component(comp, *cfg.busbar_index(cfg.generators[g].busbar));
}

bool load_inside(const GridConfig& cfg, const std::vector<char>& comp, std::size_t l) {
    return in_component(comp, *cfg.busbar_index(cfg.loads[l].busbar));
}

double component_sr(const GridConfig& cfg, const NetworkSnapshot& snap,
                    const std::vector<char>& comp) {
    double sr = 0.0;
    for (std::size_t g = 0; g < cfg.generators.size(); ++g) {
        if (gen_inside(cfg, comp, g) && snap.gen_closed[g]) sr += snap.gen_sr_mw[g];
    }
    return sr;
}

// Exhaustive scan: sort every candidate of the component by the full priority
// order and mark the shortest prefix whose sum strictly exceeds pm.
void shed_component(const GridConfig& cfg, const NetworkSnapshot& snap,
                    const std::vector<char>& comp, double pm, OracleColumn& col) {
    if (!(pm > 0.0)) return;
    std::vector<std::size_t> cands;
    for (std::size_t l = 0; l < cfg.loads.size(); ++l) {
        if (load_inside(cfg, comp, l) && cfg.loads[l].sheddable && snap.load_closed[l]) {
            cands.push_back(l);
        }
    }
    std::sort(cands.begin(), cands.end(), [&](std::size_t x, std::size_t y) {
        return std::make_tuple(cfg.loads[x].priority, -snap.load_power_mw[x], cfg.loads[x].id) <
               std::make_tuple(cfg.loads[y].priority, -snap.load_power_mw[y], cfg.loads[y].id);
    });
    double ps = 0.0;
    std::size_t k = 0;
    while (k < cands.size() && !(ps > pm)) {
        col.marks[cands[k]] = 1;
        ps += snap.load_power_mw[cands[k]];
        ++k;
    }
    if (!(ps > pm)) col.infeasible = true;
}

std::vector<std::vector<char>> all_components(const GridConfig& cfg,
                                              const std::vector<bool>& closed, std::size_t skip) {
    std::vector<std::vector<char>> comps;
    std::vector<char> assigned(cfg.busbars.size(), 0);
    for (std::size_t b = 0; b < cfg.busbars.size(); ++b) {
        if (assigned[b]) continue;
        auto comp = reach_from(cfg, closed, b, skip);
        for (std::size_t i = 0; i < comp.size(); ++i) {
            if (comp[i]) assigned[i] = 1;
        }
        comps.push_back(std::move(comp));
    }
    return comps;
}

}  // namespace

std::vector<std::vector<std::size_t>> oracle_components(const GridConfig& config,
                                                        const std::vector<bool>& bustie_closed,
                                                        std::size_t skip_bustie) {
    std::vector<std::vector<std::size_t>> out;
    for (const auto& comp : all_components(config, bustie_closed, skip_bustie)) {
        std::vector<std::size_t> members;
        for (std::size_t b = 0; b < comp.size(); ++b) {
            if (comp[b]) members.push_back(b);
        }
        out.push_back(std::move(members));
    }
    return out;
}

std::vector<OracleColumn> oracle_matrix(const GridConfig& config, const NetworkSnapshot& snap) {
    const std::size_t n_loads = config.loads.size();
    std::vector<OracleColumn> columns;
    auto blank = [&] {
        OracleColumn col;
        col.marks.assign(n_loads, 0);
        return col;
    };

    // generator trips, by id
    std::vector<std::size_t> gens(config.generators.size());
    for (std::size_t i = 0; i < gens.size(); ++i) gens[i] = i;
    std::sort(gens.begin(), gens.end(), [&](std::size_t a, std::size_t b) {
        return config.generators[a].id < config.generators[b].id;
    });
    for (std::size_t g : gens) {
        auto col = blank();
        if (snap.gen_closed[g]) {
            auto comp = reach_from(config, snap.bustie_closed,
                                   *config.busbar_index(config.generators[g].busbar), no_skip);
            const double pm =
                snap.gen_power_mw[g] + snap.gen_sr_mw[g] - component_sr(config, snap, comp);
            shed_component(config, snap, comp, pm, col);
        }
        columns.push_back(std::move(col));
    }

    // bustie openings, by id
    std::vector<std::size_t> ties(config.busties.size());
    for (std::size_t i = 0; i < ties.size(); ++i) ties[i] = i;
    std::sort(ties.begin(), ties.end(), [&](std::size_t a, std::size_t b) {
        return config.busties[a].id < config.busties[b].id;
    });
    for (std::size_t t : ties) {
        auto col = blank();
        if (snap.bustie_closed[t]) {
            for (const auto& comp : all_components(config, snap.bustie_closed, t)) {
                double p_load = 0.0;
                for (std::size_t l = 0; l < n_loads; ++l) {
                    if (load_inside(config, comp, l) && snap.load_closed[l]) {
                        p_load += snap.load_power_mw[l];
                    }
                }
                double p_gen = 0.0;
                for (std::size_t g = 0; g < config.generators.size(); ++g) {
                    if (gen_inside(config, comp, g) && snap.gen_closed[g]) {
                        p_gen += snap.gen_power_mw[g];
                    }
                }
                if (config.tie.present && snap.tie_closed &&
                    in_component(comp, *config.busbar_index(config.tie.busbar))) {
                    p_gen += snap.imported_power_mw;
                }
                const double pm = p_load - p_gen - component_sr(config, snap, comp);
                shed_component(config, snap, comp, pm, col);
            }
        }
        columns.push_back(std::move(col));
    }

    // building losses, distinct names ascending
    std::set<std::string> buildings;
    for (const auto& g : config.generators) buildings.insert(g.building);
    for (const auto& name : buildings) {
        auto col = blank();
        for (const auto& comp : all_components(config, snap.bustie_closed, no_skip)) {
            bool member = false;
            double lost = 0.0;
            double surviving_sr = 0.0;
            for (std::size_t g = 0; g < config.generators.size(); ++g) {
                if (!gen_inside(config, comp, g)) continue;
                if (config.generators[g].building == name) {
                    member = true;
                    if (snap.gen_closed[g]) lost += snap.gen_power_mw[g];
                } else if (snap.gen_closed[g]) {
                    surviving_sr += snap.gen_sr_mw[g];
                }
            }
            if (member) shed_component(config, snap, comp, lost - surviving_sr, col);
        }
        columns.push_back(std::move(col));
    }

    // external-grid blackout
    if (config.tie.present) {
        auto col = blank();
        if (snap.tie_closed) {
            auto comp = reach_from(config, snap.bustie_closed,
                                   *config.busbar_index(config.tie.busbar), no_skip);
            const double pm = snap.imported_power_mw - component_sr(config, snap, comp);
            shed_component(config, snap, comp, pm, col);
        }
        columns.push_back(std::move(col));
    }

    return columns;
}

}  // namespace flsim::testsupport
