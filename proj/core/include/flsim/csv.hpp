#pragma once

#include <string>
#include <vector>

#include "flsim/dynamics.hpp"
#include "flsim/grid.hpp"
#include "flsim/lse.hpp"
#include "flsim/sweep.hpp"

namespace flsim {

// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double value);

// Inverse of format_double; also accepts any standard decimal/exponent form.
double parse_double_field(const std::string& field);

// All writers: comma delimiter, '.' decimal separator, mandatory header row,
// LF line endings. Field values never contain commas (ids are restricted to
// [A-Za-z0-9_.:-]).
std::string matrix_csv(const SheddingMatrix& matrix);
std::string trace_csv(const GridConfig& config, const SimTrace& trace);
std::string surface_csv(const NadirSurface& surface);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;  // each sized like header
};

// Strict reader for the tool's own output: every row must match the header
// width. Throws FileParseError (path tag "<csv>") on malformed input.
CsvTable parse_csv(const std::string& text);

}  // namespace flsim
