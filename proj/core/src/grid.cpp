#include "flsim/grid.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <utility>

#include "flsim/errors.hpp"

namespace flsim {

namespace {

template <class T>
std::optional<std::size_t> find_by_id(const std::vector<T>& v, const std::string& id) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i].id == id) return i;
    }
    return std::nullopt;
}

bool id_charset_ok(const std::string& id) {
    if (id.empty()) return false;
    for (char c : id) {
        bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
                  c == '_' || c == '-' || c == '.' || c == ':';
        if (!ok) return false;
    }
    return true;
}

void check_id(std::vector<Finding>& out, const std::string& kind, const std::string& id) {
    if (!id_charset_ok(id)) {
        out.push_back({"bad-id", id,
                       kind + " id '" + id + "' is empty or uses characters outside [A-Za-z0-9_.:-]"});
    }
}

template <class T>
void check_duplicates(std::vector<Finding>& out, const std::string& kind, const std::vector<T>& v) {
    std::set<std::string> seen;
    for (const auto& e : v) {
        if (!seen.insert(e.id).second) {
            out.push_back({"duplicate-id", e.id, "duplicate " + kind + " id '" + e.id + "'"});
        }
    }
}

}  // namespace

std::optional<std::size_t> GridConfig::busbar_index(const std::string& id) const {
    return find_by_id(busbars, id);
}
std::optional<std::size_t> GridConfig::bustie_index(const std::string& id) const {
    return find_by_id(busties, id);
}
std::optional<std::size_t> GridConfig::generator_index(const std::string& id) const {
    return find_by_id(generators, id);
}
std::optional<std::size_t> GridConfig::load_index(const std::string& id) const {
    return find_by_id(loads, id);
}

ValidationReport validate_config(const GridConfig& config) {
    ValidationReport report;
    auto& out = report.findings;

    if (config.busbars.empty() || config.busbars.size() > 3) {
        out.push_back({"busbar-count", "",
                       "busbar count must be in [1, 3], got " + std::to_string(config.busbars.size())});
    }
    if (!(config.f0_hz > 0.0)) {
        out.push_back({"nominal-frequency", "", "nominal frequency must be positive"});
    }
    if (config.fls.lse_period_s < 0.5 || config.fls.lse_period_s > 2.0) {
        out.push_back({"lse-period", "", "LSE refresh period must lie in [0.5 s, 2.0 s]"});
    }
    if (config.fls.settle_time_s < 0.0) {
        out.push_back({"settle-time", "", "settle time must be >= 0"});
    }
    if (config.fls.total_delay_s < 0.0) {
        out.push_back({"total-delay", "", "total delay must be >= 0"});
    }

    for (const auto& b : config.busbars) check_id(out, "busbar", b.id);
    check_duplicates(out, "busbar", config.busbars);

    for (const auto& t : config.busties) check_id(out, "bustie", t.id);
    check_duplicates(out, "bustie", config.busties);
    std::set<std::pair<std::string, std::string>> tie_pairs;
    for (const auto& t : config.busties) {
        if (t.busbar_a == t.busbar_b) {
            out.push_back({"bustie-endpoints", t.id, "bustie '" + t.id + "' endpoints must be distinct"});
        }
        for (const auto& end : {t.busbar_a, t.busbar_b}) {
            if (!config.busbar_index(end)) {
                out.push_back({"dangling-reference", t.id,
                               "bustie '" + t.id + "' references unknown busbar '" + end + "'"});
            }
        }
        auto key = std::minmax(t.busbar_a, t.busbar_b);
        if (!tie_pairs.insert(key).second) {
            out.push_back({"duplicate-bustie-pair", t.id,
                           "bustie '" + t.id + "' duplicates an existing busbar pair"});
        }
    }

    for (const auto& g : config.generators) {
        check_id(out, "generator", g.id);
        if (!id_charset_ok(g.building)) {
            out.push_back({"bad-id", g.id, "generator '" + g.id + "' has an invalid building name"});
        }
        if (!config.busbar_index(g.busbar)) {
            out.push_back({"dangling-reference", g.id,
                           "generator '" + g.id + "' references unknown busbar '" + g.busbar + "'"});
        }
        if (!(g.rated_power_mw > 0.0)) {
            out.push_back({"rated-power", g.id, "generator '" + g.id + "' rated power must be > 0"});
        }
        if (g.rated_apparent_power_mva < g.rated_power_mw) {
            out.push_back({"apparent-power", g.id,
                           "generator '" + g.id + "' rated apparent power must be >= rated power"});
        }
        if (!(g.inertia_constant_s > 0.0)) {
            out.push_back({"inertia", g.id, "generator '" + g.id + "' inertia constant must be > 0"});
        }
        for (std::size_t i = 0; i < g.sr_curve.size(); ++i) {
            if (g.sr_curve[i].sr_mw < 0.0) {
                out.push_back({"sr-curve", g.id,
                               "generator '" + g.id + "' SR curve values must be >= 0"});
                break;
            }
        }
        for (std::size_t i = 1; i < g.sr_curve.size(); ++i) {
            if (!(g.sr_curve[i].power_mw > g.sr_curve[i - 1].power_mw)) {
                out.push_back({"sr-curve-order", g.id,
                               "generator '" + g.id + "' SR curve powers must be strictly increasing"});
                break;
            }
        }
        if (!(g.governor.droop_pu > 0.0)) {
            out.push_back({"governor", g.id, "generator '" + g.id + "' droop must be > 0"});
        }
        if (!(g.governor.t_gov_s > 0.0) || !(g.governor.t_turb_s > 0.0)) {
            out.push_back({"governor", g.id, "generator '" + g.id + "' time constants must be > 0"});
        }
        if (g.governor.p_min_mw > g.governor.p_max_mw) {
            out.push_back({"governor", g.id, "generator '" + g.id + "' requires p_min <= p_max"});
        }
    }
    check_duplicates(out, "generator", config.generators);

    for (const auto& l : config.loads) {
        check_id(out, "load", l.id);
        if (!config.busbar_index(l.busbar)) {
            out.push_back({"dangling-reference", l.id,
                           "load '" + l.id + "' references unknown busbar '" + l.busbar + "'"});
        }
        if (l.priority < 1) {
            out.push_back({"priority", l.id, "load '" + l.id + "' priority must be a positive integer"});
        }
    }
    check_duplicates(out, "load", config.loads);

    if (config.tie.present) {
        check_id(out, "external tie", config.tie.id);
        if (!config.busbar_index(config.tie.busbar)) {
            out.push_back({"dangling-reference", config.tie.id,
                           "external tie references unknown busbar '" + config.tie.busbar + "'"});
        }
    }

    // The closed-bustie graph (all busties closed) must be connected.
    if (!config.busbars.empty()) {
        std::vector<std::size_t> comp(config.busbars.size());
        for (std::size_t i = 0; i < comp.size(); ++i) comp[i] = i;
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto& t : config.busties) {
                auto a = config.busbar_index(t.busbar_a);
                auto b = config.busbar_index(t.busbar_b);
                if (!a || !b) continue;
                std::size_t m = std::min(comp[*a], comp[*b]);
                if (comp[*a] != m || comp[*b] != m) {
                    comp[*a] = comp[*b] = m;
                    changed = true;
                }
            }
        }
        if (std::any_of(comp.begin(), comp.end(), [](std::size_t c) { return c != 0; })) {
            out.push_back({"disconnected", "",
                           "busbar graph is not connected when every bustie is closed"});
        }
    }

    return report;
}

double evaluate_sr(const Generator& gen, double power_mw) {
    if (gen.sr_curve.empty()) return 0.0;
    double value = gen.sr_curve.front().sr_mw;
    for (const auto& pt : gen.sr_curve) {
        if (pt.power_mw <= power_mw) {
            value = pt.sr_mw;
        } else {
            break;
        }
    }
    return value;
}

void normalize_snapshot(const GridConfig& config, NetworkSnapshot& snap,
                        std::optional<double> sr_override_mw) {
    if (snap.gen_closed.size() != config.generators.size() ||
        snap.gen_power_mw.size() != config.generators.size()) {
        throw IncompleteInputError("snapshot does not cover every generator of the config");
    }
    if (snap.load_closed.size() != config.loads.size() ||
        snap.load_power_mw.size() != config.loads.size()) {
        throw IncompleteInputError("snapshot does not cover every load of the config");
    }
    if (snap.bustie_closed.size() != config.busties.size()) {
        throw IncompleteInputError("snapshot does not cover every bustie of the config");
    }

    snap.gen_sr_mw.assign(config.generators.size(), 0.0);
    for (std::size_t g = 0; g < config.generators.size(); ++g) {
        if (!snap.gen_closed[g]) {
            snap.gen_power_mw[g] = 0.0;
            continue;  // open units contribute zero to every PM and SR term
        }
        snap.gen_sr_mw[g] = sr_override_mw ? *sr_override_mw
                                           : evaluate_sr(config.generators[g], snap.gen_power_mw[g]);
    }
    for (std::size_t l = 0; l < config.loads.size(); ++l) {
        if (!snap.load_closed[l]) snap.load_power_mw[l] = 0.0;
    }
    if (!config.tie.present || !snap.tie_closed) {
        snap.imported_power_mw = 0.0;
    }
}

bool SubNetwork::contains_busbar(std::size_t b) const {
    return std::find(busbars.begin(), busbars.end(), b) != busbars.end();
}

std::vector<SubNetwork> partition(const GridConfig& config, const NetworkSnapshot& snap) {
    return partition_excluding(config, snap, std::nullopt);
}

std::vector<SubNetwork> partition_excluding(const GridConfig& config, const NetworkSnapshot& snap,
                                            std::optional<std::size_t> open_bustie) {
    if (snap.bustie_closed.size() != config.busties.size()) {
        throw IncompleteInputError("snapshot does not cover every bustie of the config");
    }

    const std::size_t nb = config.busbars.size();
    std::vector<std::vector<std::size_t>> adj(nb);
    for (std::size_t t = 0; t < config.busties.size(); ++t) {
        if (open_bustie && *open_bustie == t) continue;
        if (!snap.bustie_closed[t]) continue;
        auto a = config.busbar_index(config.busties[t].busbar_a);
        auto b = config.busbar_index(config.busties[t].busbar_b);
        if (!a || !b) throw PreconditionError("config has dangling bustie endpoints; validate first");
        adj[*a].push_back(*b);
        adj[*b].push_back(*a);
    }

    std::vector<int> label(nb, -1);
    int n_comp = 0;
    for (std::size_t s = 0; s < nb; ++s) {
        if (label[s] >= 0) continue;
        std::vector<std::size_t> stack{s};
        label[s] = n_comp;
        while (!stack.empty()) {
            std::size_t u = stack.back();
            stack.pop_back();
            for (std::size_t v : adj[u]) {
                if (label[v] < 0) {
                    label[v] = n_comp;
                    stack.push_back(v);
                }
            }
        }
        ++n_comp;
    }

    std::vector<SubNetwork> subs(static_cast<std::size_t>(n_comp));
    for (std::size_t b = 0; b < nb; ++b) {
        subs[static_cast<std::size_t>(label[b])].busbars.push_back(b);
    }
    for (std::size_t g = 0; g < config.generators.size(); ++g) {
        auto b = config.busbar_index(config.generators[g].busbar);
        if (b) subs[static_cast<std::size_t>(label[*b])].generators.push_back(g);
    }
    for (std::size_t l = 0; l < config.loads.size(); ++l) {
        auto b = config.busbar_index(config.loads[l].busbar);
        if (b) subs[static_cast<std::size_t>(label[*b])].loads.push_back(l);
    }
    if (config.tie.present) {
        auto b = config.busbar_index(config.tie.busbar);
        if (b) subs[static_cast<std::size_t>(label[*b])].has_tie = true;
    }

    std::sort(subs.begin(), subs.end(), [&](const SubNetwork& x, const SubNetwork& y) {
        return config.busbars[x.busbars.front()].id < config.busbars[y.busbars.front()].id;
    });
    return subs;
}

EventCatalog enumerate_events(const GridConfig& config) {
    EventCatalog catalog;

    std::vector<std::size_t> gen_order(config.generators.size());
    for (std::size_t i = 0; i < gen_order.size(); ++i) gen_order[i] = i;
    std::sort(gen_order.begin(), gen_order.end(), [&](std::size_t a, std::size_t b) {
        return config.generators[a].id < config.generators[b].id;
    });
    for (std::size_t g : gen_order) {
        Event e;
        e.kind = EventKind::generator_trip;
        e.target = config.generators[g].id;
        e.target_index = g;
        e.label = "gen-trip:" + e.target;
        catalog.events.push_back(std::move(e));
    }

    std::vector<std::size_t> tie_order(config.busties.size());
    for (std::size_t i = 0; i < tie_order.size(); ++i) tie_order[i] = i;
    std::sort(tie_order.begin(), tie_order.end(), [&](std::size_t a, std::size_t b) {
        return config.busties[a].id < config.busties[b].id;
    });
    for (std::size_t t : tie_order) {
        Event e;
        e.kind = EventKind::bustie_open;
        e.target = config.busties[t].id;
        e.target_index = t;
        e.label = "bustie-open:" + e.target;
        catalog.events.push_back(std::move(e));
    }

    std::set<std::string> names;
    for (const auto& g : config.generators) names.insert(g.building);
    catalog.buildings.assign(names.begin(), names.end());
    for (std::size_t b = 0; b < catalog.buildings.size(); ++b) {
        Event e;
        e.kind = EventKind::building_loss;
        e.target = catalog.buildings[b];
        e.target_index = b;
        e.label = "building-loss:" + e.target;
        for (std::size_t g = 0; g < config.generators.size(); ++g) {
            if (config.generators[g].building == catalog.buildings[b]) {
                e.member_generators.push_back(g);
            }
        }
        catalog.events.push_back(std::move(e));
    }

    if (config.tie.present) {
        Event e;
        e.kind = EventKind::grid_blackout;
        e.target = config.tie.id;
        e.target_index = 0;
        e.label = "grid-blackout:" + e.target;
        catalog.events.push_back(std::move(e));
    }

    for (std::size_t i = 0; i < catalog.events.size(); ++i) catalog.events[i].index = i;
    return catalog;
}

}  // namespace flsim
