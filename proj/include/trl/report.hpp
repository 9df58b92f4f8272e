#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "trl/dates.hpp"
#include "trl/errors.hpp"
#include "trl/glmm.hpp"
#include "trl/resilience.hpp"

namespace trl {

// Effective configuration for one CLI invocation.
struct RunConfig {
    std::string manifest_path;
    std::string out_dir = ".";
    std::string landfall = "2021-08-29";
    int drop_window_days = 7;  // window is landfall .. landfall + drop_window_days
    double rate_floor = 0.90;
    double z_floor = -1.82;
    int z_days_min = 2;
    std::optional<std::string> boundaries_path;
    double max_assign_km = std::numeric_limits<double>::infinity();
    FitControls controls;
    // simulate inputs
    std::uint64_t seed = 1;
    int groups = 36;
    int per_group = 5;
};

struct CommandOutcome {
    int exit_code = 0;
    std::vector<std::string> warnings;
};

CommandOutcome cmd_simulate(const RunConfig& cfg);
CommandOutcome cmd_quantify(const RunConfig& cfg);
CommandOutcome cmd_fit(const RunConfig& cfg);
CommandOutcome cmd_report(const RunConfig& cfg);
CommandOutcome cmd_run_all(const RunConfig& cfg);

// 0 success, 2 usage, 3 load, 4 data validation, 5 degenerate model
// (single-group fallback), 6 model failure.
int exit_code_for(const Error& e);

// Content lands under the final name only after a complete write: temp file
// in the same directory, then rename.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace trl
