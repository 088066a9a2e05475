#pragma once

#include <string>
#include <utility>
#include <vector>

#include "config.hpp"

namespace qstcli {

struct ScenarioResult {
    std::vector<std::pair<std::string, double>> summary;   // ordered scalars
    std::vector<std::string> artifacts;                    // files written in out_dir
    bool thresholds_ok = true;   // validate: report values within spec
};

/// name in {validate, evolve, fcs, excess-work, geodesic}.
ScenarioResult run_scenario(const std::string& name, const RunConfig& config,
                            const std::string& out_dir);

/// Cartesian product over tau_list / beta_list / dim_list with a worker
/// pool; per-point outputs in subdirectories, aggregate CSV at the top.
ScenarioResult run_sweep(const RunConfig& config, const std::string& out_dir);

void write_manifest(const std::string& out_dir, const std::string& scenario,
                    const RunConfig& config, const ScenarioResult& result);

}  // namespace qstcli
