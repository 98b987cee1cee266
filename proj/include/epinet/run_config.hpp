#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "epinet/graph.hpp"

namespace epinet {

// Graph sources understood by every experiment runner. kind selects which of
// the remaining fields matter.
struct GraphSpec {
    std::string kind = "er";  // file | er | ba | path | star | complete
    std::string path;         // file: edge list location
    bool use_lcc = true;      // file: restrict to the largest connected component
    std::size_t n = 100;
    double p = 0.05;              // er
    std::size_t m_attach = 2;     // ba
    std::uint64_t seed = 1;       // er | ba
};

struct GridSpec {
    double horizon = 0.0;      // 0 = pick automatically per experiment
    std::size_t points = 200;  // total grid size including t = 0
};

struct ScenarioSpec {
    std::string kind = "preventive";        // preventive | reactive
    std::vector<std::int64_t> sources;      // reactive: original node ids
    std::int64_t source_degree = -1;        // reactive: lowest-id node with this degree
    double t_star = 0.0;                    // 0 = default 1/(beta * lambda_max)
};

struct RunConfig {
    std::string name = "run";
    GraphSpec graph;
    std::vector<double> betas{0.05};
    std::vector<double> deltas{1.0, 0.8};    // sis demo
    std::size_t initial_infected = 0;        // sis demo; 0 = n/2
    ScenarioSpec scenario;
    std::vector<std::size_t> budgets{10};    // vaccination sizes
    std::size_t replicas = 2000;
    std::uint64_t seed = 42;
    int threads = 0;
    GridSpec grid;
    std::string out_dir = "out";
    std::vector<std::int64_t> report_nodes;  // reliability: original ids, empty = first 8
    double report_age = 0.0;                 // reliability: 0 = horizon/4
};

RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& cfg);
RunConfig load_config_file(const std::string& path);

// Materializes the configured graph (generating or loading + optional LCC).
Graph resolve_graph(const GraphSpec& spec);

}  // namespace epinet
