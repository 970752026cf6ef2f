#include "flsim/edsa.hpp"

#include "flsim/errors.hpp"

namespace flsim {

std::vector<DetectedEvent> detect(const NetworkSnapshot& prev, const NetworkSnapshot& next,
                                  const EventCatalog& catalog) {
    if (!(prev.timestamp_s < next.timestamp_s)) {
        throw PreconditionError("snapshots must be consecutive (prev.timestamp < next.timestamp)");
    }

    std::vector<DetectedEvent> out;
    for (const Event& ev : catalog.events) {
        bool fired = false;
        switch (ev.kind) {
            case EventKind::generator_trip: {
                std::size_t g = ev.target_index;
                if (prev.gen_closed[g] && !next.gen_closed[g]) {
                    // Suppressed when this window completes the loss of the
                    // whole building: the building event fires instead.
                    const Event* bld = nullptr;
                    for (const Event& cand : catalog.events) {
                        if (cand.kind != EventKind::building_loss) continue;
                        for (std::size_t m : cand.member_generators) {
                            if (m == g) {
                                bld = &cand;
                                break;
                            }
                        }
                        if (bld) break;
                    }
                    if (bld) {
                        bool all_open = true;
                        bool any_prev = false;
                        for (std::size_t m : bld->member_generators) {
                            if (next.gen_closed[m]) all_open = false;
                            if (prev.gen_closed[m]) any_prev = true;
                        }
                        fired = !(all_open && any_prev);
                    } else {
                        fired = true;
                    }
                }
                break;
            }
            case EventKind::bustie_open: {
                std::size_t t = ev.target_index;
                fired = prev.bustie_closed[t] && !next.bustie_closed[t];
                break;
            }
            case EventKind::building_loss: {
                bool all_open = true;
                bool any_prev = false;
                for (std::size_t m : ev.member_generators) {
                    if (next.gen_closed[m]) all_open = false;
                    if (prev.gen_closed[m]) any_prev = true;
                }
                fired = all_open && any_prev;
                break;
            }
            case EventKind::grid_blackout:
                fired = prev.tie_closed && !next.tie_closed;
                break;
        }
        if (fired) out.push_back({ev.index, next.timestamp_s});
    }
    return out;
}

ActResult act(const EngineState& state, const DetectedEvent& event, const SheddingMatrix& matrix) {
    ActResult result;
    result.state = state;

    if (state.mode == EngineState::Mode::inhibited) {
        result.state.second_events.push_back(event);
        return result;
    }

    if (event.event_index >= matrix.cols()) {
        throw PreconditionError("detected event is outside the active matrix");
    }
    for (std::size_t l = 0; l < matrix.rows(); ++l) {
        if (matrix.entry(l, event.event_index)) {
            result.commands.push_back({matrix.load_ids[l], l, event.timestamp_s, event.event_index});
        }
    }
    // Any handled event starts the settle window, commands or not.
    result.state.mode = EngineState::Mode::inhibited;
    result.state.inhibited_until_s = event.timestamp_s + state.settle_time_s;
    return result;
}

EngineState tick(const EngineState& state, double now_s, const MatrixProvider& provider) {
    if (state.mode != EngineState::Mode::inhibited || now_s < state.inhibited_until_s) {
        return state;
    }
    EngineState next = state;
    next.mode = EngineState::Mode::armed;
    next.inhibited_until_s = 0.0;
    if (provider) next.active = provider();
    return next;
}

void MatrixStore::publish(std::shared_ptr<const SheddingMatrix> matrix) {
    std::lock_guard<std::mutex> lock(mutex_);
    matrix_ = std::move(matrix);
}

std::shared_ptr<const SheddingMatrix> MatrixStore::current() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return matrix_;
}

}  // namespace flsim
