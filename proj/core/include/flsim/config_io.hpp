#pragma once

#include <optional>
#include <string>

#include "flsim/dynamics.hpp"
#include "flsim/grid.hpp"

namespace flsim {

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// Parses the plant description without validating it; load_config adds the
// validate_config pass and throws PreconditionError listing every finding.
// All parsers reject unknown keys and report the offending field.
GridConfig parse_config_text(const std::string& text, const std::string& path_tag);
GridConfig parse_config(const std::string& path);
GridConfig load_config(const std::string& path);

struct SnapshotFile {
    NetworkSnapshot snapshot;  // normalized against the config
    std::optional<double> sr_override_mw;
};

SnapshotFile parse_snapshot_text(const std::string& text, const GridConfig& config,
                                 const std::string& path_tag);
SnapshotFile load_snapshot(const std::string& path, const GridConfig& config);

// Scenario defaults (delay, threshold, relay pickup) resolve from the
// config's FLS block when the file does not override them.
SimScenario parse_scenario_text(const std::string& text, const GridConfig& config,
                                const std::string& path_tag);
SimScenario load_scenario(const std::string& path, const GridConfig& config);

}  // namespace flsim
