#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "flsim/edsa.hpp"
#include "flsim/grid.hpp"

namespace flsim {

// Two cascaded first-order lags behind the droop feedback. x_gov tracks the
// limited power command, x_turb is the delivered mechanical power.
struct GovernorState {
    double setpoint_mw = 0.0;
    double x_gov_mw = 0.0;
    double x_turb_mw = 0.0;
};

GovernorState make_governor_state(double dispatch_mw);

struct GovernorStepResult {
    GovernorState state;
    double p_mech_mw = 0.0;
};

// Advances the turbine-governor by one step with the frequency error held
// constant. delta_f_hz = f - f0; underfrequency raises the command by
// |delta_f| / (droop * f0) * rated power, limited to [p_min, p_max].
GovernorStepResult governor_step(const GovernorParams& params, const GovernorState& state,
                                 double delta_f_hz, double dt_s);

// Rate of change of frequency for the given generation/load imbalance, summed
// over the connected generators' inertia. Throws PreconditionError when the
// set is empty (blackout condition).
double swing_rocof(const GridConfig& config, const std::vector<std::size_t>& connected_gens,
                   double p_gen_mw, double p_load_mw);

enum class ScriptedEventKind {
    generator_trip,
    bustie_open,
    building_loss,
    grid_blackout,
};

struct ScriptedEvent {
    double time_s = 0.0;
    ScriptedEventKind kind = ScriptedEventKind::generator_trip;
    std::string target;  // generator/bustie id or building name; unused for blackout
};

// One closed-loop study case. Dispatch/load vectors align with the config;
// disengaged entries mean the breaker starts open.
struct SimScenario {
    std::string name;
    std::vector<std::optional<double>> dispatch_mw;
    std::vector<std::optional<double>> load_mw;
    std::vector<bool> bustie_closed;  // initial states; empty = all closed
    bool tie_closed = false;
    double imported_power_mw = 0.0;
    std::vector<ScriptedEvent> events;
    double total_delay_s = 0.2;  // event to load-breaker open, end to end
    std::optional<double> sr_override_mw;
    double uf_threshold_hz = 48.0;
    double relay_pickup_s = 0.0;
    double duration_s = 10.0;
    double dt_s = 0.001;
};

struct BreakerTransition {
    double time_s = 0.0;
    char element = 'G';  // 'G' generator, 'L' load, 'B' bustie, 'E' external tie
    std::string id;
    bool closed = false;
};

// Time series of one simulation run. All series share the uniform time base.
struct SimTrace {
    double dt_s = 0.0;
    std::vector<double> time_s;
    std::vector<double> frequency_hz;
    std::vector<double> total_load_mw;
    std::vector<std::vector<double>> gen_power_mw;  // [generator][sample]
    std::vector<BreakerTransition> transitions;
    std::vector<TripCommand> commands;
    std::vector<DetectedEvent> second_events;
    bool relay_tripped = false;
    double relay_time_s = 0.0;
    bool blackout = false;
    double blackout_time_s = 0.0;
};

struct SimOptions {
    bool shedding_enabled = true;
};

// Integrates the swing equation and the turbine-governors with fixed-step
// RK4 while the LSE/ED-SA loops run on their own periods. Loads are constant
// power blocks; shed loads step to zero total_delay after the event sample,
// rounded up to the next step boundary. Relay trips and blackouts complete
// the trace with flags set.
SimTrace run_scenario(const GridConfig& config, const SimScenario& scenario,
                      const SimOptions& options = {});

// Minimum frequency sample of the trace.
double nadir(const SimTrace& trace);

}  // namespace flsim
