#include "flsim/lse.hpp"

#include <algorithm>

#include "flsim/errors.hpp"

namespace flsim {

namespace {

void require_snapshot_shape(const GridConfig& config, const NetworkSnapshot& snap) {
    if (snap.gen_closed.size() != config.generators.size() ||
        snap.gen_power_mw.size() != config.generators.size() ||
        snap.gen_sr_mw.size() != config.generators.size() ||
        snap.load_closed.size() != config.loads.size() ||
        snap.load_power_mw.size() != config.loads.size() ||
        snap.bustie_closed.size() != config.busties.size()) {
        throw IncompleteInputError("snapshot does not cover the config; normalize_snapshot first");
    }
}

// Reserve of the closed generators of one sub-network, accumulated in config
// order. The emitted PLC code sums in the same order so comparisons on the
// results are reproducible bit for bit.
double subnet_sr(const GridConfig& config, const NetworkSnapshot& snap, const SubNetwork& sub) {
    double sr = 0.0;
    for (std::size_t g : sub.generators) {
        if (snap.gen_closed[g]) sr += snap.gen_sr_mw[g];
    }
    return sr;
}

PowerMismatch pm_for_subnets(std::vector<SubNetwork> subs, std::size_t event_index) {
    PowerMismatch pm;
    pm.event_index = event_index;
    pm.entries.reserve(subs.size());
    for (auto& s : subs) pm.entries.push_back({std::move(s), std::nullopt});
    return pm;
}

}  // namespace

PowerMismatch compute_pm_generator_trip(const GridConfig& config, const NetworkSnapshot& snap,
                                        const std::string& gen_id) {
    require_snapshot_shape(config, snap);
    auto gi = config.generator_index(gen_id);
    if (!gi) throw NotFoundError("unknown generator '" + gen_id + "'");

    auto pm = pm_for_subnets(partition(config, snap), 0);
    auto busbar = config.busbar_index(config.generators[*gi].busbar);
    for (auto& entry : pm.entries) {
        if (!entry.subnet.contains_busbar(*busbar)) continue;
        const bool closed = snap.gen_closed[*gi];
        const double p_i = closed ? snap.gen_power_mw[*gi] : 0.0;
        const double sr_i = closed ? snap.gen_sr_mw[*gi] : 0.0;
        const double sr_tot = subnet_sr(config, snap, entry.subnet);
        entry.pm_mw = p_i - (sr_tot - sr_i);
    }
    return pm;
}

PowerMismatch compute_pm_bustie_open(const GridConfig& config, const NetworkSnapshot& snap,
                                     const std::string& bustie_id) {
    require_snapshot_shape(config, snap);
    auto ti = config.bustie_index(bustie_id);
    if (!ti) throw NotFoundError("unknown bustie '" + bustie_id + "'");
    if (!snap.bustie_closed[*ti]) {
        throw PreconditionError("bustie '" + bustie_id +
                                "' is already open; its opening is not detectable as a transition");
    }

    auto pm = pm_for_subnets(partition_excluding(config, snap, *ti), 0);
    for (auto& entry : pm.entries) {
        double p_load = 0.0;
        for (std::size_t l : entry.subnet.loads) {
            if (snap.load_closed[l]) p_load += snap.load_power_mw[l];
        }
        double p_gen = 0.0;
        for (std::size_t g : entry.subnet.generators) {
            if (snap.gen_closed[g]) p_gen += snap.gen_power_mw[g];
        }
        // A closed external tie keeps feeding its side after the split, so its
        // import counts as local supply in the balance.
        if (entry.subnet.has_tie && config.tie.present && snap.tie_closed) {
            p_gen += snap.imported_power_mw;
        }
        entry.pm_mw = p_load - p_gen - subnet_sr(config, snap, entry.subnet);
    }
    return pm;
}

PowerMismatch compute_pm_building_loss(const GridConfig& config, const NetworkSnapshot& snap,
                                       const std::string& building) {
    require_snapshot_shape(config, snap);
    bool exists = false;
    for (const auto& g : config.generators) {
        if (g.building == building) {
            exists = true;
            break;
        }
    }
    if (!exists) throw NotFoundError("unknown building '" + building + "'");

    auto pm = pm_for_subnets(partition(config, snap), 0);
    for (auto& entry : pm.entries) {
        bool member = false;
        double lost = 0.0;
        double surviving_sr = 0.0;
        for (std::size_t g : entry.subnet.generators) {
            if (config.generators[g].building == building) {
                member = true;
                if (snap.gen_closed[g]) lost += snap.gen_power_mw[g];
            } else if (snap.gen_closed[g]) {
                surviving_sr += snap.gen_sr_mw[g];
            }
        }
        if (member) entry.pm_mw = lost - surviving_sr;
    }
    return pm;
}

PowerMismatch compute_pm_grid_blackout(const GridConfig& config, const NetworkSnapshot& snap) {
    require_snapshot_shape(config, snap);
    if (!config.tie.present) throw NotFoundError("no external tie configured");
    if (!snap.tie_closed) {
        throw PreconditionError("external tie is already open; blackout is not detectable");
    }

    auto pm = pm_for_subnets(partition(config, snap), 0);
    for (auto& entry : pm.entries) {
        if (!entry.subnet.has_tie) continue;
        entry.pm_mw = snap.imported_power_mw - subnet_sr(config, snap, entry.subnet);
    }
    return pm;
}

PowerMismatch compute_pm(const GridConfig& config, const NetworkSnapshot& snap,
                         const EventCatalog& catalog, std::size_t event_index) {
    if (event_index >= catalog.events.size()) {
        throw NotFoundError("event index out of range");
    }
    const Event& ev = catalog.events[event_index];
    PowerMismatch pm;
    switch (ev.kind) {
        case EventKind::generator_trip:
            pm = compute_pm_generator_trip(config, snap, ev.target);
            break;
        case EventKind::bustie_open:
            pm = compute_pm_bustie_open(config, snap, ev.target);
            break;
        case EventKind::building_loss:
            pm = compute_pm_building_loss(config, snap, ev.target);
            break;
        case EventKind::grid_blackout:
            pm = compute_pm_grid_blackout(config, snap);
            break;
    }
    pm.event_index = event_index;
    return pm;
}

bool Selection::feasible() const {
    return std::all_of(subnets.begin(), subnets.end(),
                       [](const SubnetSelection& s) { return s.feasible; });
}

double Selection::total_ps_mw() const {
    double ps = 0.0;
    for (const auto& s : subnets) ps += s.ps_mw;
    return ps;
}

Selection select_loads(const PowerMismatch& pm, const GridConfig& config,
                       const NetworkSnapshot& snap) {
    require_snapshot_shape(config, snap);

    Selection sel;
    sel.column.assign(config.loads.size(), false);

    for (std::size_t e = 0; e < pm.entries.size(); ++e) {
        const PmEntry& entry = pm.entries[e];
        if (!entry.pm_mw || !(*entry.pm_mw > 0.0)) continue;

        std::vector<std::size_t> candidates;
        for (std::size_t l : entry.subnet.loads) {
            if (config.loads[l].sheddable && snap.load_closed[l]) candidates.push_back(l);
        }
        std::sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
            if (config.loads[a].priority != config.loads[b].priority) {
                return config.loads[a].priority < config.loads[b].priority;
            }
            if (snap.load_power_mw[a] != snap.load_power_mw[b]) {
                return snap.load_power_mw[a] > snap.load_power_mw[b];
            }
            return config.loads[a].id < config.loads[b].id;
        });

        SubnetSelection out;
        out.pm_entry = e;
        out.pm_mw = *entry.pm_mw;
        for (std::size_t l : candidates) {
            if (out.ps_mw > out.pm_mw) break;
            out.marked.push_back(l);
            sel.column[l] = true;
            out.ps_mw += snap.load_power_mw[l];
        }
        if (!(out.ps_mw > out.pm_mw)) {
            // PS must end strictly above PM; shedding everything sheddable is
            // the best remaining action, so the marks stay.
            out.feasible = false;
            out.shortfall_mw = out.pm_mw - out.ps_mw;
        }
        sel.subnets.push_back(std::move(out));
    }
    return sel;
}

bool SheddingMatrix::any_infeasible() const {
    return std::any_of(info.begin(), info.end(), [](const ColumnInfo& c) { return c.infeasible; });
}

SheddingMatrix build_shedding_matrix(const GridConfig& config, const NetworkSnapshot& snap,
                                     const EventCatalog& catalog) {
    require_snapshot_shape(config, snap);

    SheddingMatrix m;
    m.timestamp_s = snap.timestamp_s;
    m.catalog = catalog;
    m.load_ids.reserve(config.loads.size());
    for (const auto& l : config.loads) m.load_ids.push_back(l.id);
    m.columns.assign(catalog.size(), std::vector<bool>(config.loads.size(), false));
    m.info.assign(catalog.size(), ColumnInfo{});

    for (std::size_t e = 0; e < catalog.size(); ++e) {
        const Event& ev = catalog.events[e];
        bool skip = false;
        switch (ev.kind) {
            case EventKind::generator_trip:
                skip = !snap.gen_closed[ev.target_index];
                break;
            case EventKind::bustie_open:
                skip = !snap.bustie_closed[ev.target_index];
                break;
            case EventKind::grid_blackout:
                skip = !snap.tie_closed;
                break;
            case EventKind::building_loss:
                // Fully lost buildings produce PM <= 0 on their own.
                skip = false;
                break;
        }
        if (skip) {
            m.info[e].skipped = true;
            continue;
        }

        Selection sel = select_loads(compute_pm(config, snap, catalog, e), config, snap);
        m.columns[e] = sel.column;
        m.info[e].subnets = sel.subnets;
        m.info[e].infeasible = !sel.feasible();
    }
    return m;
}

}  // namespace flsim
