#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace flsim {

struct Busbar {
    std::string id;
    std::string name;
};

// Breaker coupling two busbars. Opening it splits the grid into sub-networks.
struct Bustie {
    std::string id;
    std::string busbar_a;
    std::string busbar_b;
};

// One breakpoint of the spinning-reserve curve. The curve is a step function:
// for output power p the reserve is the value of the last breakpoint with
// power_mw <= p (the first breakpoint's value below the curve start). A run of
// zero values models the DLE combustion-change band where no pickup is
// available.
struct SrPoint {
    double power_mw = 0.0;
    double sr_mw = 0.0;
};

// Droop + two cascaded first-order lags, output limited to [p_min, p_max].
// rated_power_mw and f0_hz mirror the owning generator and grid; they are
// filled when the config is assembled so the governor is self-contained.
struct GovernorParams {
    double droop_pu = 0.05;
    double t_gov_s = 0.3;
    double t_turb_s = 0.6;
    double p_max_mw = 0.0;
    double p_min_mw = 0.0;
    double rated_power_mw = 0.0;
    double f0_hz = 50.0;
};

struct Generator {
    std::string id;
    std::string busbar;
    std::string building;
    double rated_power_mw = 0.0;
    double rated_apparent_power_mva = 0.0;
    double inertia_constant_s = 0.0;
    std::vector<SrPoint> sr_curve;
    GovernorParams governor;
};

struct Load {
    std::string id;
    std::string busbar;
    int priority = 1;  // lower sheds first; may change between snapshots
    bool sheddable = true;
};

struct ExternalTie {
    std::string id;
    std::string busbar;
    bool present = false;
};

// Plant-wide fast-load-shedding tuning.
struct FlsParams {
    double lse_period_s = 1.0;  // allowed range [0.5, 2.0]
    double settle_time_s = 3.0;
    double total_delay_s = 0.2;  // event to load breaker open, end to end
    double uf_threshold_hz = 48.0;
    double relay_pickup_s = 0.0;
};

// Static plant description. Immutable value data once built.
struct GridConfig {
    std::string plant_name;
    double f0_hz = 50.0;
    std::vector<Busbar> busbars;
    std::vector<Bustie> busties;
    std::vector<Generator> generators;
    std::vector<Load> loads;
    ExternalTie tie;
    FlsParams fls;

    std::optional<std::size_t> busbar_index(const std::string& id) const;
    std::optional<std::size_t> bustie_index(const std::string& id) const;
    std::optional<std::size_t> generator_index(const std::string& id) const;
    std::optional<std::size_t> load_index(const std::string& id) const;
};

struct Finding {
    std::string code;     // stable machine-readable tag, e.g. "busbar-count"
    std::string element;  // offending element id, empty for config-level findings
    std::string message;
};

struct ValidationReport {
    std::vector<Finding> findings;
    bool ok() const { return findings.empty(); }
};

// Checks every GridConfig invariant and returns all violations in a
// deterministic order. An empty report means the config is valid.
ValidationReport validate_config(const GridConfig& config);

// Live state at one acquisition instant. Vectors align with the config's
// element order. Open-breaker elements carry zero measured power and zero SR.
struct NetworkSnapshot {
    double timestamp_s = 0.0;
    std::vector<bool> gen_closed;
    std::vector<bool> load_closed;
    std::vector<bool> bustie_closed;
    bool tie_closed = false;
    std::vector<double> gen_power_mw;
    std::vector<double> load_power_mw;
    double imported_power_mw = 0.0;
    std::vector<double> gen_sr_mw;
};

// Spinning reserve available at the given output power (step-function lookup).
double evaluate_sr(const Generator& gen, double power_mw);

// Zeroes powers behind open breakers and fills gen_sr_mw from each
// generator's curve (or the override for every closed unit). Throws
// IncompleteInputError if the snapshot does not cover the config.
void normalize_snapshot(const GridConfig& config, NetworkSnapshot& snap,
                        std::optional<double> sr_override_mw = std::nullopt);

// One connected component of the busbar graph under closed busties.
struct SubNetwork {
    std::vector<std::size_t> busbars;  // config indices, ascending
    std::vector<std::size_t> generators;
    std::vector<std::size_t> loads;
    bool has_tie = false;

    bool contains_busbar(std::size_t b) const;
};

// Connected components where edges are busties closed in the snapshot,
// sorted by smallest member busbar id. Every element of the config lands in
// exactly one component.
std::vector<SubNetwork> partition(const GridConfig& config, const NetworkSnapshot& snap);

// Same, with one bustie treated as open regardless of the snapshot (used to
// evaluate hypothetical bustie-opening events).
std::vector<SubNetwork> partition_excluding(const GridConfig& config, const NetworkSnapshot& snap,
                                            std::optional<std::size_t> open_bustie);

enum class EventKind {
    generator_trip,
    bustie_open,
    building_loss,
    grid_blackout,
};

struct Event {
    EventKind kind = EventKind::generator_trip;
    std::size_t index = 0;  // column index in the shedding matrix
    std::string label;
    std::string target;            // generator/bustie id, building name, tie id
    std::size_t target_index = 0;  // into config.generators/busties or the building list
    std::vector<std::size_t> member_generators;  // building events only
};

struct EventCatalog {
    std::vector<Event> events;
    std::vector<std::string> buildings;  // distinct names, ascending

    std::size_t size() const { return events.size(); }
};

// Catalog of all foreseen events in canonical order: generator trips, bustie
// openings, building losses, external-grid blackout; each category ordered by
// id. Column indices are stable across calls for the same config.
EventCatalog enumerate_events(const GridConfig& config);

}  // namespace flsim
