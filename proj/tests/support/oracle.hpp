#pragma once

#include <cstddef>
#include <vector>

#include "flsim/grid.hpp"

namespace flsim::testsupport {

struct OracleColumn {
    std::vector<char> marks;  // one per config load, 1 = shed
    bool infeasible = false;
};

// Recomputes the whole shedding decision from scratch: BFS reachability,
// direct balance formulas, exhaustive priority-ordered candidate scan. Kept
// deliberately naive and separate so it cannot share a bug with the engine.
std::vector<OracleColumn> oracle_matrix(const GridConfig& config, const NetworkSnapshot& snap);

// Connected busbar components under the given bustie states; skip_bustie (if
// any) is treated as open. Components appear in order of their lowest busbar
// index.
std::vector<std::vector<std::size_t>> oracle_components(const GridConfig& config,
                                                        const std::vector<bool>& bustie_closed,
                                                        std::size_t skip_bustie = static_cast<std::size_t>(-1));

}  // namespace flsim::testsupport
