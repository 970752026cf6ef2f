#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "flsim/grid.hpp"

namespace flsim {

// Power mismatch of one sub-network for one event. An empty pm_mw is the
// explicit no-action sentinel for sub-networks the event does not touch; a
// shedding action is required iff pm_mw > 0.
struct PmEntry {
    SubNetwork subnet;
    std::optional<double> pm_mw;
};

struct PowerMismatch {
    std::size_t event_index = 0;
    std::vector<PmEntry> entries;
};

// PM for the trip of one generator: its output minus the reserve of the
// surviving units in its sub-network. Throws NotFoundError for unknown ids.
PowerMismatch compute_pm_generator_trip(const GridConfig& config, const NetworkSnapshot& snap,
                                        const std::string& gen_id);

// PM per sub-network resulting from hypothetically opening a closed bustie:
// each side's pre-event net import minus its own reserve. Throws
// PreconditionError if the bustie is already open.
PowerMismatch compute_pm_bustie_open(const GridConfig& config, const NetworkSnapshot& snap,
                                     const std::string& bustie_id);

// PM for the loss of every generator inside a building, per sub-network that
// hosts at least one of the building's units.
PowerMismatch compute_pm_building_loss(const GridConfig& config, const NetworkSnapshot& snap,
                                       const std::string& building);

// PM for the blackout of the external grid: imported power minus the local
// reserve in the tie's sub-network. Throws NotFoundError when no tie is
// configured, PreconditionError when the tie breaker is open.
PowerMismatch compute_pm_grid_blackout(const GridConfig& config, const NetworkSnapshot& snap);

// Dispatches to the specific computation for a catalog event.
PowerMismatch compute_pm(const GridConfig& config, const NetworkSnapshot& snap,
                         const EventCatalog& catalog, std::size_t event_index);

struct SubnetSelection {
    std::size_t pm_entry = 0;  // index into PowerMismatch::entries
    double pm_mw = 0.0;
    double ps_mw = 0.0;
    std::vector<std::size_t> marked;  // load indices in selection order
    bool feasible = true;
    double shortfall_mw = 0.0;  // pm - ps when infeasible
};

struct Selection {
    std::vector<bool> column;  // one entry per config load
    std::vector<SubnetSelection> subnets;  // sub-networks with pm > 0 only

    bool feasible() const;
    double total_ps_mw() const;
};

// Marks sheddable, closed loads of each deficient sub-network in priority
// order (ascending priority, then descending measured power, then ascending
// load id) until the shed power strictly exceeds the mismatch. When the
// candidates run out first, every candidate stays marked and the sub-network
// is flagged infeasible with its shortfall.
Selection select_loads(const PowerMismatch& pm, const GridConfig& config,
                       const NetworkSnapshot& snap);

struct ColumnInfo {
    bool skipped = false;  // the event's defining breaker was already open
    bool infeasible = false;
    std::vector<SubnetSelection> subnets;
};

// Loads x events binary matrix plus the catalog indexing its columns.
struct SheddingMatrix {
    double timestamp_s = 0.0;
    std::vector<std::string> load_ids;  // row labels, config order
    EventCatalog catalog;
    std::vector<std::vector<bool>> columns;  // columns[event][load]
    std::vector<ColumnInfo> info;

    bool entry(std::size_t load, std::size_t event) const { return columns[event][load]; }
    std::size_t rows() const { return load_ids.size(); }
    std::size_t cols() const { return columns.size(); }
    bool any_infeasible() const;
};

// One full pass of the load selection engine: a column per catalog event.
// Events whose target element is already open yield all-zero columns.
// Infeasible columns are flagged, never fatal.
SheddingMatrix build_shedding_matrix(const GridConfig& config, const NetworkSnapshot& snap,
                                     const EventCatalog& catalog);

}  // namespace flsim
