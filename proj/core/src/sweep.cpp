#include "flsim/sweep.hpp"

#include <atomic>
#include <cmath>
#include <thread>

namespace flsim {

std::vector<double> axis_range(double start, double stop, double step) {
    if (!(step > 0.0)) throw PreconditionError("axis step must be > 0");
    if (stop < start) throw PreconditionError("axis stop must be >= start");
    std::vector<double> values;
    const long n = static_cast<long>(std::floor((stop - start) / step + 0.5));
    for (long i = 0; i <= n; ++i) values.push_back(start + static_cast<double>(i) * step);
    if (values.empty() || values.back() > stop + step * 0.5) values.resize(values.size() - 1);
    if (values.empty()) values.push_back(start);
    return values;
}

namespace {

void require_axis(const std::vector<double>& axis, const char* name) {
    if (axis.empty()) throw PreconditionError(std::string(name) + " axis is empty");
    for (std::size_t i = 1; i < axis.size(); ++i) {
        if (!(axis[i] > axis[i - 1])) {
            throw PreconditionError(std::string(name) + " axis must be strictly increasing");
        }
    }
}

struct Cell {
    double nadir_hz;
    bool blackout;
};

Cell run_cell(const GridConfig& config, const SimScenario& base, double sr, double delay) {
    SimScenario scenario = base;
    scenario.sr_override_mw = sr;
    scenario.total_delay_s = delay;
    SimTrace trace = run_scenario(config, scenario);
    if (trace.blackout) return {0.0, true};
    return {nadir(trace), false};
}

}  // namespace

NadirSurface sweep_surface(const GridConfig& config, const SimScenario& base,
                           const std::vector<double>& sr_values,
                           const std::vector<double>& delay_values, unsigned threads) {
    require_axis(sr_values, "sr");
    require_axis(delay_values, "delay");

    NadirSurface surface;
    surface.scenario_name = base.name;
    surface.sr_mw = sr_values;
    surface.delay_s = delay_values;
    surface.nadir_hz.assign(sr_values.size(), std::vector<double>(delay_values.size(), 0.0));
    surface.blackout.assign(sr_values.size(), std::vector<char>(delay_values.size(), 0));

    const std::size_t cells = sr_values.size() * delay_values.size();
    if (threads == 0) {
        unsigned hw = std::thread::hardware_concurrency();
        threads = hw == 0 ? 1 : hw;
    }
    if (static_cast<std::size_t>(threads) > cells) threads = static_cast<unsigned>(cells);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t cell = next.fetch_add(1);
            if (cell >= cells) return;
            const std::size_t i = cell / delay_values.size();
            const std::size_t j = cell % delay_values.size();
            Cell r = run_cell(config, base, sr_values[i], delay_values[j]);
            surface.nadir_hz[i][j] = r.nadir_hz;
            surface.blackout[i][j] = r.blackout ? 1 : 0;
        }
    };

    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return surface;
}

SrSelection max_sr_for_margin(const GridConfig& config, const SimScenario& base,
                              double threshold_hz, double margin_hz, double sr_min_mw,
                              double sr_max_mw, double tolerance_mw) {
    if (!(tolerance_mw > 0.0)) throw PreconditionError("sr tolerance must be > 0");
    if (!(sr_max_mw >= sr_min_mw)) throw PreconditionError("sr range is empty");

    const double required = threshold_hz + margin_hz;
    std::size_t simulations = 0;
    auto probe = [&](double sr) {
        ++simulations;
        return run_cell(config, base, sr, base.total_delay_s);
    };

    Cell at_min = probe(sr_min_mw);
    if (at_min.blackout || at_min.nadir_hz < required) {
        throw InfeasibleSrError("no SR in range satisfies the margin", at_min.nadir_hz);
    }

    double lo = sr_min_mw;
    Cell best = at_min;
    Cell at_max = probe(sr_max_mw);
    if (!at_max.blackout && at_max.nadir_hz >= required) {
        return {sr_max_mw, at_max.nadir_hz, simulations};
    }

    double hi = sr_max_mw;
    while (hi - lo > tolerance_mw) {
        const double mid = 0.5 * (lo + hi);
        Cell at_mid = probe(mid);
        if (!at_mid.blackout && at_mid.nadir_hz >= required) {
            lo = mid;
            best = at_mid;
        } else {
            hi = mid;
        }
    }
    return {lo, best.nadir_hz, simulations};
}

}  // namespace flsim
