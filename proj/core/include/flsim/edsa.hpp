#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "flsim/grid.hpp"
#include "flsim/lse.hpp"

namespace flsim {

// A catalog event observed as a breaker transition between two snapshots.
struct DetectedEvent {
    std::size_t event_index = 0;
    double timestamp_s = 0.0;
};

struct TripCommand {
    std::string load_id;
    std::size_t load_index = 0;
    double issue_time_s = 0.0;
    std::size_t event_index = 0;
};

// Fast-loop engine state. In inhibited mode the primary FLS issues no
// commands; detected events go to the second-event record and the backup
// underfrequency relay covers the plant until the engine re-arms.
struct EngineState {
    enum class Mode { armed, inhibited };

    Mode mode = Mode::armed;
    double inhibited_until_s = 0.0;
    double settle_time_s = 3.0;
    std::shared_ptr<const SheddingMatrix> active;
    std::vector<DetectedEvent> second_events;

    bool armed() const { return mode == Mode::armed; }
};

// Events whose defining breakers transitioned closed -> open between two
// consecutive snapshots, in catalog order. A building event fires when all of
// its generator breakers are open in `next` and at least one was closed in
// `prev`; it replaces the individual trip events of that building's units.
std::vector<DetectedEvent> detect(const NetworkSnapshot& prev, const NetworkSnapshot& next,
                                  const EventCatalog& catalog);

struct ActResult {
    std::vector<TripCommand> commands;
    EngineState state;
};

// Armed: emits one command per load marked in the event's matrix column and
// starts the settle window. Inhibited: no commands, the event is appended to
// the second-event record.
ActResult act(const EngineState& state, const DetectedEvent& event, const SheddingMatrix& matrix);

using MatrixProvider = std::function<std::shared_ptr<const SheddingMatrix>()>;

// Re-arms an inhibited engine once the settle window has elapsed, demanding a
// freshly recomputed matrix from the provider.
EngineState tick(const EngineState& state, double now_s, const MatrixProvider& provider);

// Whole-matrix atomic swap between the slow LSE loop and the fast engine;
// readers never observe a half-updated matrix.
class MatrixStore {
public:
    void publish(std::shared_ptr<const SheddingMatrix> matrix);
    std::shared_ptr<const SheddingMatrix> current() const;

private:
    mutable std::mutex mutex_;
    std::shared_ptr<const SheddingMatrix> matrix_;
};

}  // namespace flsim
