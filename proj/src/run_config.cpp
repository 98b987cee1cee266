#include "epinet/run_config.hpp"

#include <fstream>
#include <stdexcept>

#include "epinet/generators.hpp"

namespace epinet {

namespace {

template <typename T>
void read_if(const nlohmann::json& j, const char* key, T& into) {
    if (j.contains(key)) into = j.at(key).get<T>();
}

}  // namespace

RunConfig config_from_json(const nlohmann::json& j) {
    RunConfig cfg;
    read_if(j, "name", cfg.name);
    if (j.contains("graph")) {
        const auto& g = j.at("graph");
        read_if(g, "kind", cfg.graph.kind);
        read_if(g, "path", cfg.graph.path);
        read_if(g, "lcc", cfg.graph.use_lcc);
        read_if(g, "n", cfg.graph.n);
        read_if(g, "p", cfg.graph.p);
        read_if(g, "m_attach", cfg.graph.m_attach);
        read_if(g, "seed", cfg.graph.seed);
    }
    if (j.contains("model")) {
        const auto& m = j.at("model");
        if (m.contains("beta")) {
            if (m.at("beta").is_array())
                cfg.betas = m.at("beta").get<std::vector<double>>();
            else
                cfg.betas = {m.at("beta").get<double>()};
        }
        if (m.contains("delta")) {
            if (m.at("delta").is_array())
                cfg.deltas = m.at("delta").get<std::vector<double>>();
            else
                cfg.deltas = {m.at("delta").get<double>()};
        }
        read_if(m, "initial_infected", cfg.initial_infected);
    }
    if (j.contains("scenario")) {
        const auto& s = j.at("scenario");
        read_if(s, "kind", cfg.scenario.kind);
        read_if(s, "sources", cfg.scenario.sources);
        read_if(s, "source_degree", cfg.scenario.source_degree);
        read_if(s, "t_star", cfg.scenario.t_star);
        if (s.contains("k")) {
            if (s.at("k").is_array())
                cfg.budgets = s.at("k").get<std::vector<std::size_t>>();
            else
                cfg.budgets = {s.at("k").get<std::size_t>()};
        }
    }
    if (j.contains("ensemble")) {
        const auto& e = j.at("ensemble");
        read_if(e, "replicas", cfg.replicas);
        read_if(e, "seed", cfg.seed);
        read_if(e, "threads", cfg.threads);
    }
    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        read_if(g, "horizon", cfg.grid.horizon);
        read_if(g, "points", cfg.grid.points);
    }
    if (j.contains("output")) read_if(j.at("output"), "dir", cfg.out_dir);
    if (j.contains("reliability")) {
        const auto& r = j.at("reliability");
        read_if(r, "nodes", cfg.report_nodes);
        read_if(r, "age", cfg.report_age);
    }
    if (cfg.betas.empty()) throw std::invalid_argument("config needs at least one beta");
    if (cfg.grid.points < 2) throw std::invalid_argument("config needs at least two grid points");
    return cfg;
}

nlohmann::json config_to_json(const RunConfig& cfg) {
    nlohmann::json j;
    j["name"] = cfg.name;
    j["graph"] = {{"kind", cfg.graph.kind}, {"path", cfg.graph.path},
                  {"lcc", cfg.graph.use_lcc}, {"n", cfg.graph.n},
                  {"p", cfg.graph.p},         {"m_attach", cfg.graph.m_attach},
                  {"seed", cfg.graph.seed}};
    j["model"] = {{"beta", cfg.betas},
                  {"delta", cfg.deltas},
                  {"initial_infected", cfg.initial_infected}};
    j["scenario"] = {{"kind", cfg.scenario.kind},
                     {"sources", cfg.scenario.sources},
                     {"source_degree", cfg.scenario.source_degree},
                     {"t_star", cfg.scenario.t_star},
                     {"k", cfg.budgets}};
    j["ensemble"] = {{"replicas", cfg.replicas}, {"seed", cfg.seed}, {"threads", cfg.threads}};
    j["grid"] = {{"horizon", cfg.grid.horizon}, {"points", cfg.grid.points}};
    j["output"] = {{"dir", cfg.out_dir}};
    j["reliability"] = {{"nodes", cfg.report_nodes}, {"age", cfg.report_age}};
    return j;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    nlohmann::json j;
    in >> j;
    return config_from_json(j);
}

Graph resolve_graph(const GraphSpec& spec) {
    if (spec.kind == "file") {
        Graph g = load_edge_list_file(spec.path);
        return spec.use_lcc ? largest_connected_component(g) : g;
    }
    if (spec.kind == "er") return make_erdos_renyi(spec.n, spec.p, spec.seed);
    if (spec.kind == "ba") return make_barabasi_albert(spec.n, spec.m_attach, spec.seed);
    if (spec.kind == "path") return make_path(spec.n);
    if (spec.kind == "star") return make_star(spec.n >= 2 ? spec.n - 1 : 1);
    if (spec.kind == "complete") return make_complete(spec.n);
    throw std::invalid_argument("unknown graph kind: " + spec.kind);
}

}  // namespace epinet
