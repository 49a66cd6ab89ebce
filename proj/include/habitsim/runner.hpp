#pragma once

#include <string>
#include <vector>

#include "habitsim/config.hpp"
#include "habitsim/csv.hpp"
#include "habitsim/equilibrium.hpp"
#include "habitsim/lockdown.hpp"

namespace habitsim {

// Figure-ready data: demand/supply schedules and path families.
struct FigureData {
    std::string x_name;
    std::vector<PointSet> sets;
};

// Inverse-demand schedule around y2 at the state prevailing at time t of the
// no-lockdown path (or the counterfactual two-sector state during a
// lockdown), with the vertical supply at y2 truncated below p_min.
FigureData demand_supply_snapshot(const ModelConfig& cfg, const ModelDerived& d, double t,
                                  double h_at_t, int n_points = 101);

struct RunArtifacts {
    std::vector<std::string> files_written;
    std::string summary_path;
    int exit_code = 0;       // 0 ok, 2 config error, 3 scenario infeasible
    std::string diagnostic;  // non-empty on failure
};

// Batch scenario runner: executes every scenario in the manifest and writes
// per-scenario segment CSVs, figure CSVs, and a structured-text summary.
// Deterministic given the config; never consults the environment.
RunArtifacts run(const ParsedConfig& pc);

}  // namespace habitsim
