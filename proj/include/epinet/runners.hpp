#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "epinet/result_table.hpp"
#include "epinet/run_config.hpp"

namespace epinet {

// A finished experiment: the long-format result rows plus a manifest holding
// the resolved configuration (auto-picked horizons, resolved source nodes,
// graph statistics, library version). Writing the same artifacts twice
// produces identical bytes.
struct RunArtifacts {
    std::string name;
    ResultTable table;
    nlohmann::json manifest;
};

// Bound comparison: for each beta, the ODE mean, simulation mean, and the
// linearization / transformation bound totals on a shared grid.
RunArtifacts run_bound_compare(const RunConfig& cfg);

// Vaccination policies under a preventive or reactive scenario, one curve per
// (policy, budget) plus an unvaccinated baseline, common random numbers.
RunArtifacts run_policy_experiment(const RunConfig& cfg);

// SIS ensembles for each delta plus the mean-field curve.
RunArtifacts run_sis_demo(const RunConfig& cfg);

// Hazard / survival / residual-life curves and transformed-identity
// discrepancies for the configured report nodes.
RunArtifacts run_reliability_report(const RunConfig& cfg);

// Writes <out_dir>/<name>.csv and <out_dir>/<name>-manifest.json.
void write_artifacts(RunArtifacts& artifacts, const std::string& out_dir);

}  // namespace epinet
