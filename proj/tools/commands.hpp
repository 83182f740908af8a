#pragma once

#include <string>
#include <vector>

namespace qd::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;

struct RunOptions {
    std::string config_path;
    std::vector<std::string> overrides;  // section.key=value
};

/// Execute the configured experiment (qd or sail mode); writes archive CSV,
/// metrics CSV and, for 2-D grids, a heatmap into the output directory and
/// prints the final coverage and QD-score.
int cmd_run(const RunOptions& options);

/// Evaluate the configured genotype lattice through the configured
/// container, export the oracle archive, and if [oracle].compare names a
/// run archive, print the per-cell gaps where the run fell short.
int cmd_oracle(const RunOptions& options);

/// Re-render a heatmap from an exported archive CSV alone.
int cmd_render(const std::string& csv_path, const std::vector<int>& bins,
               const std::string& out_path);

}  // namespace qd::cli
