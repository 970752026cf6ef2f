#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "flsim/dynamics.hpp"
#include "flsim/errors.hpp"
#include "flsim/grid.hpp"

namespace flsim {

// Inclusive range [start, stop] in increments of step; stop is included when it
// lands within half a step of the grid.
std::vector<double> axis_range(double start, double stop, double step);

struct NadirSurface {
    std::string scenario_name;
    std::vector<double> sr_mw;     // row axis
    std::vector<double> delay_s;   // column axis
    std::vector<std::vector<double>> nadir_hz;  // [sr][delay]; 0 Hz sentinel on blackout
    std::vector<std::vector<char>> blackout;    // [sr][delay]

    std::size_t rows() const { return sr_mw.size(); }
    std::size_t cols() const { return delay_s.size(); }
};

// One simulation per (sr, delay) cell; every other scenario field held fixed.
// Cells are independent, so they may be evaluated on several threads; results
// land by index either way. threads = 0 picks a worker count automatically.
NadirSurface sweep_surface(const GridConfig& config, const SimScenario& base,
                           const std::vector<double>& sr_values,
                           const std::vector<double>& delay_values, unsigned threads = 0);

class InfeasibleSrError : public Error {
  public:
    InfeasibleSrError(const std::string& what, double achieved_nadir_hz)
        : Error(what), achieved_nadir_hz(achieved_nadir_hz) {}
    double achieved_nadir_hz;
};

struct SrSelection {
    double sr_mw;             // largest admissible SR setting, within tolerance
    double nadir_hz;          // simulated nadir at that setting
    std::size_t simulations;  // scenario runs spent by the search
};

// Bisection for the largest SR whose nadir stays at or above threshold + margin.
// Throws InfeasibleSrError when even sr_min fails the margin.
SrSelection max_sr_for_margin(const GridConfig& config, const SimScenario& base,
                              double threshold_hz, double margin_hz, double sr_min_mw,
                              double sr_max_mw, double tolerance_mw);

}  // namespace flsim
