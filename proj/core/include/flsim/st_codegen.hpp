#pragma once

#include <string>

#include "flsim/grid.hpp"
#include "flsim/lse.hpp"
#include "flsim/st_interp.hpp"

namespace flsim {

struct StOptions {
    std::string lse_block = "FB_FLS_LSE";
    std::string edsa_block = "FB_FLS_EDSA";
};

struct StProgram {
    std::string source;
    std::string lse_block;
    std::string edsa_block;
    int n_gens = 0;
    int n_loads = 0;
    int n_busbars = 0;
    int n_busties = 0;
    int n_buildings = 0;
    int n_events = 0;
};

// Two IEC 61131-3 function blocks for a fixed plant: cyclic shedding-matrix
// computation (LSE) and transition detection with trip-column lookup (ED-SA).
// The text is deterministic for identical inputs.
StProgram emit_st(const GridConfig& config, const StOptions& options = {});

// Input environments shaped exactly like the emitted declarations, including
// the one-element padding used for zero-count arrays.
st::Env st_lse_inputs(const GridConfig& config, const NetworkSnapshot& snap);
st::Env st_edsa_inputs(const NetworkSnapshot& prev, const NetworkSnapshot& next,
                       const SheddingMatrix& matrix);

}  // namespace flsim
