#include <benchmark/benchmark.h>

#include "flsim/config_io.hpp"
#include "flsim/dynamics.hpp"
#include "flsim/edsa.hpp"
#include "flsim/lse.hpp"
#include "flsim/st_codegen.hpp"
#include "flsim/st_interp.hpp"

using namespace flsim;

namespace {

const GridConfig& plant() {
    static GridConfig cfg = load_config(FLSIM_FIXTURE_DIR "/platform.json");
    return cfg;
}

const NetworkSnapshot& snapshot() {
    static NetworkSnapshot snap =
        load_snapshot(FLSIM_FIXTURE_DIR "/snapshot_normal.json", plant()).snapshot;
    return snap;
}

const SimScenario& scenario() {
    static SimScenario scn = load_scenario(FLSIM_FIXTURE_DIR "/trip_g2.json", plant());
    return scn;
}

void bm_build_matrix(benchmark::State& state) {
    const EventCatalog catalog = enumerate_events(plant());
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_shedding_matrix(plant(), snapshot(), catalog));
    }
}
BENCHMARK(bm_build_matrix);

void bm_detect_window(benchmark::State& state) {
    const EventCatalog catalog = enumerate_events(plant());
    NetworkSnapshot next = snapshot();
    next.timestamp_s += 0.1;
    next.gen_closed[1] = false;
    normalize_snapshot(plant(), next, std::nullopt);
    for (auto _ : state) {
        benchmark::DoNotOptimize(detect(snapshot(), next, catalog));
    }
}
BENCHMARK(bm_detect_window);

void bm_run_scenario(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_scenario(plant(), scenario()));
    }
}
BENCHMARK(bm_run_scenario)->Unit(benchmark::kMillisecond);

void bm_emit_st(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(emit_st(plant()));
    }
}
BENCHMARK(bm_emit_st);

void bm_interpret_lse(benchmark::State& state) {
    const StProgram prog = emit_st(plant());
    const st::Unit unit = st::parse(prog.source);
    const st::Env inputs = st_lse_inputs(plant(), snapshot());
    for (auto _ : state) {
        benchmark::DoNotOptimize(st::invoke(unit, prog.lse_block, inputs));
    }
}
BENCHMARK(bm_interpret_lse);

}  // namespace

BENCHMARK_MAIN();
