#include "flsim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "flsim/errors.hpp"
#include "flsim/rk4.hpp"

namespace flsim {

namespace {

double clamp(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

// Droop feedback scaled to rated power, limited to the valve range. Lagging a
// limited command keeps the cascade outputs inside [p_min, p_max] as well.
double governor_command(const GovernorParams& p, double setpoint_mw, double delta_f_hz) {
    double cmd = setpoint_mw - delta_f_hz / (p.droop_pu * p.f0_hz) * p.rated_power_mw;
    return clamp(cmd, p.p_min_mw, p.p_max_mw);
}

long ceil_steps(double seconds, double dt) {
    if (seconds <= 0.0) return 0;
    return static_cast<long>(std::ceil(seconds / dt - 1e-9));
}

}  // namespace

GovernorState make_governor_state(double dispatch_mw) {
    return {dispatch_mw, dispatch_mw, dispatch_mw};
}

GovernorStepResult governor_step(const GovernorParams& params, const GovernorState& state,
                                 double delta_f_hz, double dt_s) {
    if (!(dt_s > 0.0)) throw PreconditionError("governor step requires dt > 0");

    const double cmd = governor_command(params, state.setpoint_mw, delta_f_hz);
    std::vector<double> y{state.x_gov_mw, state.x_turb_mw};
    Rk4 rk(2);
    rk.step(y, 0.0, dt_s, [&](double, const std::vector<double>& x, std::vector<double>& d) {
        d[0] = (cmd - x[0]) / params.t_gov_s;
        d[1] = (x[0] - x[1]) / params.t_turb_s;
    });

    GovernorStepResult result;
    result.state = state;
    result.state.x_gov_mw = y[0];
    result.state.x_turb_mw = y[1];
    result.p_mech_mw = y[1];
    return result;
}

double swing_rocof(const GridConfig& config, const std::vector<std::size_t>& connected_gens,
                   double p_gen_mw, double p_load_mw) {
    if (connected_gens.empty()) {
        throw PreconditionError("swing equation needs at least one connected generator");
    }
    double inertia = 0.0;
    for (std::size_t g : connected_gens) {
        const Generator& gen = config.generators[g];
        inertia += gen.inertia_constant_s * gen.rated_apparent_power_mva;
    }
    return config.f0_hz * (p_gen_mw - p_load_mw) / (2.0 * inertia);
}

SimTrace run_scenario(const GridConfig& config, const SimScenario& scenario,
                      const SimOptions& options) {
    {
        ValidationReport report = validate_config(config);
        if (!report.ok()) {
            throw PreconditionError("invalid config: " + report.findings.front().message);
        }
    }
    const std::size_t ng = config.generators.size();
    const std::size_t nl = config.loads.size();
    const std::size_t nt = config.busties.size();
    if (scenario.dispatch_mw.size() != ng || scenario.load_mw.size() != nl) {
        throw PreconditionError("scenario dispatch/load vectors do not match the config");
    }
    if (!scenario.bustie_closed.empty() && scenario.bustie_closed.size() != nt) {
        throw PreconditionError("scenario bustie states do not match the config");
    }
    if (!(scenario.dt_s > 0.0) || !(scenario.duration_s > 0.0)) {
        throw PreconditionError("scenario requires dt > 0 and duration > 0");
    }
    if (scenario.total_delay_s < 0.0) {
        throw PreconditionError("scenario requires total_delay >= 0");
    }
    for (const auto& ev : scenario.events) {
        if (!(ev.time_s > 0.0) || ev.time_s > scenario.duration_s) {
            throw PreconditionError("scripted event times must lie in (0, duration]");
        }
        switch (ev.kind) {
            case ScriptedEventKind::generator_trip:
                if (!config.generator_index(ev.target)) {
                    throw NotFoundError("scripted trip of unknown generator '" + ev.target + "'");
                }
                break;
            case ScriptedEventKind::bustie_open:
                if (!config.bustie_index(ev.target)) {
                    throw NotFoundError("scripted opening of unknown bustie '" + ev.target + "'");
                }
                break;
            case ScriptedEventKind::building_loss: {
                bool known = false;
                for (const auto& g : config.generators) known = known || g.building == ev.target;
                if (!known) throw NotFoundError("scripted loss of unknown building '" + ev.target + "'");
                break;
            }
            case ScriptedEventKind::grid_blackout:
                if (!config.tie.present) {
                    throw NotFoundError("scripted grid blackout without a configured external tie");
                }
                break;
        }
    }

    const double dt = scenario.dt_s;
    const double f0 = config.f0_hz;
    const long n_steps = std::max<long>(1, ceil_steps(scenario.duration_s, dt));
    const long delay_steps = ceil_steps(scenario.total_delay_s, dt);
    const long lse_every = std::max<long>(1, ceil_steps(config.fls.lse_period_s, dt));

    // Breaker state and constant-power blocks.
    std::vector<bool> gen_on(ng, false), load_on(nl, false), bustie_on(nt, true);
    std::vector<double> load_power(nl, 0.0);
    bool tie_on = config.tie.present && scenario.tie_closed;
    for (std::size_t g = 0; g < ng; ++g) gen_on[g] = scenario.dispatch_mw[g].has_value();
    for (std::size_t l = 0; l < nl; ++l) {
        if (scenario.load_mw[l]) {
            load_on[l] = true;
            load_power[l] = *scenario.load_mw[l];
        }
    }
    if (!scenario.bustie_closed.empty()) bustie_on = scenario.bustie_closed;

    // Governor states live in the integration vector: y = [f, (x_gov, x_turb) per generator].
    std::vector<double> y(1 + 2 * ng, 0.0);
    y[0] = f0;
    std::vector<double> setpoints(ng, 0.0);
    for (std::size_t g = 0; g < ng; ++g) {
        if (!gen_on[g]) continue;
        const double dispatch = *scenario.dispatch_mw[g];
        const GovernorParams& gp = config.generators[g].governor;
        if (dispatch < gp.p_min_mw || dispatch > gp.p_max_mw) {
            throw PreconditionError("dispatch of generator '" + config.generators[g].id +
                                    "' lies outside its governor limits");
        }
        setpoints[g] = dispatch;
        y[1 + 2 * g] = dispatch;
        y[2 + 2 * g] = dispatch;
    }

    std::vector<std::size_t> on_gens;
    auto refresh_on_gens = [&] {
        on_gens.clear();
        for (std::size_t g = 0; g < ng; ++g) {
            if (gen_on[g]) on_gens.push_back(g);
        }
    };
    refresh_on_gens();

    auto total_load = [&] {
        double p = 0.0;
        for (std::size_t l = 0; l < nl; ++l) {
            if (load_on[l]) p += load_power[l];
        }
        return p;
    };

    auto deriv = [&](double, const std::vector<double>& x, std::vector<double>& d) {
        double p_gen = 0.0;
        for (std::size_t g : on_gens) p_gen += x[2 + 2 * g];
        if (tie_on) p_gen += scenario.imported_power_mw;
        d[0] = swing_rocof(config, on_gens, p_gen, total_load());
        std::fill(d.begin() + 1, d.end(), 0.0);
        const double delta_f = x[0] - f0;
        for (std::size_t g : on_gens) {
            const GovernorParams& gp = config.generators[g].governor;
            const double cmd = governor_command(gp, setpoints[g], delta_f);
            d[1 + 2 * g] = (cmd - x[1 + 2 * g]) / gp.t_gov_s;
            d[2 + 2 * g] = (x[1 + 2 * g] - x[2 + 2 * g]) / gp.t_turb_s;
        }
    };

    // Scripted events mapped to the step grid (first boundary at or after the
    // scripted instant).
    struct GridEvent {
        long step;
        const ScriptedEvent* ev;
    };
    std::vector<GridEvent> script;
    script.reserve(scenario.events.size());
    for (const auto& ev : scenario.events) script.push_back({ceil_steps(ev.time_s, dt), &ev});
    std::stable_sort(script.begin(), script.end(),
                     [](const GridEvent& a, const GridEvent& b) { return a.step < b.step; });
    std::size_t script_next = 0;

    SimTrace trace;
    trace.dt_s = dt;
    trace.time_s.reserve(static_cast<std::size_t>(n_steps) + 1);
    trace.frequency_hz.reserve(static_cast<std::size_t>(n_steps) + 1);
    trace.total_load_mw.reserve(static_cast<std::size_t>(n_steps) + 1);
    trace.gen_power_mw.assign(ng, {});

    auto open_generator = [&](std::size_t g, double t) {
        if (!gen_on[g]) return;
        gen_on[g] = false;
        refresh_on_gens();
        trace.transitions.push_back({t, 'G', config.generators[g].id, false});
    };
    auto open_load = [&](std::size_t l, double t) {
        if (!load_on[l]) return;
        load_on[l] = false;
        trace.transitions.push_back({t, 'L', config.loads[l].id, false});
    };
    auto open_bustie = [&](std::size_t b, double t) {
        if (!bustie_on[b]) return;
        bustie_on[b] = false;
        trace.transitions.push_back({t, 'B', config.busties[b].id, false});
    };
    auto open_tie = [&](double t) {
        if (!tie_on) return;
        tie_on = false;
        trace.transitions.push_back({t, 'E', config.tie.id, false});
    };

    auto make_snapshot = [&](double t) {
        NetworkSnapshot s;
        s.timestamp_s = t;
        s.gen_closed = gen_on;
        s.load_closed = load_on;
        s.bustie_closed = bustie_on;
        s.tie_closed = tie_on;
        s.gen_power_mw.assign(ng, 0.0);
        for (std::size_t g : on_gens) s.gen_power_mw[g] = y[2 + 2 * g];
        s.load_power_mw.assign(nl, 0.0);
        for (std::size_t l = 0; l < nl; ++l) {
            if (load_on[l]) s.load_power_mw[l] = load_power[l];
        }
        s.imported_power_mw = tie_on ? scenario.imported_power_mw : 0.0;
        normalize_snapshot(config, s, scenario.sr_override_mw);
        return s;
    };

    const EventCatalog catalog = enumerate_events(config);
    MatrixStore store;
    EngineState engine;
    engine.settle_time_s = config.fls.settle_time_s;

    NetworkSnapshot snap = make_snapshot(0.0);
    store.publish(std::make_shared<SheddingMatrix>(build_shedding_matrix(config, snap, catalog)));
    engine.active = store.current();
    NetworkSnapshot prev_snap = snap;

    struct PendingTrip {
        long step;
        std::size_t load;
    };
    std::vector<PendingTrip> pending;

    const double uf = scenario.uf_threshold_hz;
    bool below = false;
    double below_since = 0.0;

    Rk4 rk(y.size());

    for (long k = 0; k <= n_steps; ++k) {
        const double t = static_cast<double>(k) * dt;

        while (script_next < script.size() && script[script_next].step <= k) {
            const ScriptedEvent& ev = *script[script_next].ev;
            switch (ev.kind) {
                case ScriptedEventKind::generator_trip:
                    open_generator(*config.generator_index(ev.target), t);
                    break;
                case ScriptedEventKind::bustie_open:
                    open_bustie(*config.bustie_index(ev.target), t);
                    break;
                case ScriptedEventKind::building_loss:
                    for (std::size_t g = 0; g < ng; ++g) {
                        if (config.generators[g].building == ev.target) open_generator(g, t);
                    }
                    break;
                case ScriptedEventKind::grid_blackout:
                    open_tie(t);
                    break;
            }
            ++script_next;
        }

        for (auto it = pending.begin(); it != pending.end();) {
            if (it->step <= k) {
                open_load(it->load, t);
                it = pending.erase(it);
            } else {
                ++it;
            }
        }

        if (k > 0) snap = make_snapshot(t);

        engine = tick(engine, t, [&] {
            store.publish(
                std::make_shared<SheddingMatrix>(build_shedding_matrix(config, snap, catalog)));
            return store.current();
        });
        engine.active = store.current();

        if (k > 0) {
            for (const DetectedEvent& ev : detect(prev_snap, snap, catalog)) {
                if (!options.shedding_enabled) break;
                ActResult r = act(engine, ev, *engine.active);
                engine = std::move(r.state);
                for (const TripCommand& cmd : r.commands) {
                    if (!load_on[cmd.load_index]) continue;  // breaker already open
                    trace.commands.push_back(cmd);
                    if (delay_steps == 0) {
                        open_load(cmd.load_index, t);
                    } else {
                        pending.push_back({k + delay_steps, cmd.load_index});
                    }
                }
            }
        }

        if (k % lse_every == 0 && k > 0) {
            store.publish(
                std::make_shared<SheddingMatrix>(build_shedding_matrix(config, snap, catalog)));
        }

        if (y[0] < uf) {
            if (!below) {
                below = true;
                below_since = t;
            }
            if (!trace.relay_tripped && t - below_since >= scenario.relay_pickup_s) {
                trace.relay_tripped = true;
                trace.relay_time_s = t;
            }
        } else {
            below = false;
        }

        trace.time_s.push_back(t);
        trace.frequency_hz.push_back(y[0]);
        trace.total_load_mw.push_back(total_load());
        for (std::size_t g = 0; g < ng; ++g) {
            trace.gen_power_mw[g].push_back(gen_on[g] ? y[2 + 2 * g] : 0.0);
        }

        if (on_gens.empty()) {
            trace.blackout = true;
            trace.blackout_time_s = t;
            break;
        }

        if (k < n_steps) {
            rk.step(y, t, dt, deriv);
            prev_snap = snap;
        }
    }

    trace.second_events = engine.second_events;
    return trace;
}

double nadir(const SimTrace& trace) {
    if (trace.frequency_hz.empty()) throw PreconditionError("empty trace has no nadir");
    return *std::min_element(trace.frequency_hz.begin(), trace.frequency_hz.end());
}

}  // namespace flsim
