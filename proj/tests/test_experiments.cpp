#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "epinet/generators.hpp"
#include "epinet/result_table.hpp"
#include "epinet/run_config.hpp"
#include "epinet/runners.hpp"

using namespace epinet;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::set<std::string> methods_of(const ResultTable& t) {
    std::set<std::string> out;
    for (const auto& r : t.rows) out.insert(r.method);
    return out;
}

std::filesystem::path temp_file(const char* name) {
    return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("fixed topologies have the expected shape") {
    Graph p = make_path(5);
    CHECK(p.node_count() == 5);
    CHECK(p.edge_count() == 4);
    CHECK(p.degree(0) == 1);
    CHECK(p.degree(2) == 2);

    Graph s = make_star(6);
    CHECK(s.node_count() == 7);
    CHECK(s.edge_count() == 6);
    CHECK(s.degree(0) == 6);

    Graph k = make_complete(5);
    CHECK(k.node_count() == 5);
    CHECK(k.edge_count() == 10);
    for (NodeId v = 0; v < 5; ++v) CHECK(k.degree(v) == 4);
}

TEST_CASE("random graph generators are seed-deterministic") {
    Graph a = make_erdos_renyi(60, 0.1, 5);
    Graph b = make_erdos_renyi(60, 0.1, 5);
    Graph c = make_erdos_renyi(60, 0.1, 6);
    CHECK(a.edge_count() == b.edge_count());
    bool same = true;
    for (NodeId v = 0; v < 60; ++v) {
        auto na = a.neighbors(v), nb = b.neighbors(v);
        same = same && std::equal(na.begin(), na.end(), nb.begin(), nb.end());
    }
    CHECK(same);
    CHECK(a.edge_count() != c.edge_count());

    CHECK(make_erdos_renyi(40, 0.0, 1).edge_count() == 0);
    CHECK(make_erdos_renyi(40, 1.0, 1).edge_count() == 40 * 39 / 2);
    // mean 177, sd ~12.6
    CHECK(a.edge_count() > 110);
    CHECK(a.edge_count() < 250);
}

TEST_CASE("preferential attachment grows the advertised edge count") {
    const std::size_t n = 300, m = 2;
    Graph g = make_barabasi_albert(n, m, 11);
    CHECK(g.node_count() == n);
    CHECK(g.edge_count() == m * (m + 1) / 2 + (n - m - 1) * m);
    std::size_t max_deg = 0;
    for (NodeId v = 0; v < static_cast<NodeId>(n); ++v) {
        CHECK(g.degree(v) >= m);
        max_deg = std::max(max_deg, g.degree(v));
    }
    // hubs exist: far above the minimum in a scale-free draw
    CHECK(max_deg > 4 * m);
    Graph h = make_barabasi_albert(n, m, 11);
    CHECK(h.edge_count() == g.edge_count());
    CHECK_THROWS_AS(make_barabasi_albert(3, 3, 1), std::invalid_argument);
}

TEST_CASE("strongly connected extraction keeps the cycle and drops the tail") {
    std::vector<std::pair<std::int64_t, std::int64_t>> edges{
        {0, 1}, {1, 2}, {2, 0},  // 3-cycle
        {2, 3}, {3, 4},          // directed tail, not strongly connected
    };
    auto und = largest_scc_undirected_edges(edges);
    std::set<std::pair<std::int64_t, std::int64_t>> got(und.begin(), und.end());
    std::set<std::pair<std::int64_t, std::int64_t>> want{{0, 1}, {0, 2}, {1, 2}};
    CHECK(got == want);
}

TEST_CASE("equal-size strong components tie toward the smallest id") {
    std::vector<std::pair<std::int64_t, std::int64_t>> edges{
        {7, 8}, {8, 7}, {0, 3}, {3, 0}, {5, 5},
    };
    auto und = largest_scc_undirected_edges(edges);
    REQUIRE(und.size() == 1);
    CHECK(und[0] == std::pair<std::int64_t, std::int64_t>{0, 3});
}

TEST_CASE("reciprocal directed edges collapse to one undirected edge") {
    std::vector<std::pair<std::int64_t, std::int64_t>> edges{
        {1, 2}, {2, 1}, {2, 3}, {3, 2}, {3, 1}, {1, 3},
    };
    auto und = largest_scc_undirected_edges(edges);
    CHECK(und.size() == 3);
}

TEST_CASE("directed snapshot preprocessing round-trips through files") {
    auto in_path = temp_file("epinet_scc_in.txt");
    auto out_path = temp_file("epinet_scc_out.txt");
    {
        std::ofstream out(in_path);
        out << "# a directed snapshot\n";
        out << "10\t20\n20\t30\n30\t10\n30\t40\n";
    }
    auto [nodes, edges] = prepare_scc_edge_list(in_path.string(), out_path.string());
    CHECK(nodes == 3);
    CHECK(edges == 3);
    Graph g = load_edge_list_file(out_path.string());
    CHECK(g.node_count() == 3);
    CHECK(g.edge_count() == 3);
    CHECK(g.original_ids() == std::vector<std::int64_t>{10, 20, 30});
    std::remove(in_path.string().c_str());
    std::remove(out_path.string().c_str());
}

TEST_CASE("result tables serialize to stable sorted bytes") {
    ResultTable t;
    t.add({"exp-b", "m1", 1.5, 0.25, 0.0, 0, 7});
    t.add({"exp-a", "m2", 0.5, 2.0, 0.125, 3, 7});
    t.add({"exp-a", "m1", 1.0, 1.0, 0.0, 0, 7});
    t.add({"exp-a", "m1", 0.5, 3.0, 0.0, 0, 7});
    t.sort_rows();
    CHECK(t.to_csv() ==
          "experiment,method,time,value,stderr,K,seed\n"
          "exp-a,m1,0.5,3,0,0,7\n"
          "exp-a,m1,1,1,0,0,7\n"
          "exp-a,m2,0.5,2,0.125,3,7\n"
          "exp-b,m1,1.5,0.25,0,0,7\n");
}

TEST_CASE("csv fields with separators or quotes are escaped") {
    ResultTable t;
    t.add({"needs,comma", "has\"quote", 0.0, 1.0, 0.0, 0, 0});
    CHECK(t.to_csv() ==
          "experiment,method,time,value,stderr,K,seed\n"
          "\"needs,comma\",\"has\"\"quote\",0,1,0,0,0\n");
}

TEST_CASE("run configurations round-trip through json") {
    RunConfig cfg;
    cfg.name = "trial";
    cfg.graph.kind = "ba";
    cfg.graph.n = 500;
    cfg.graph.m_attach = 3;
    cfg.graph.seed = 17;
    cfg.betas = {0.05, 0.1};
    cfg.deltas = {0.8};
    cfg.scenario.kind = "reactive";
    cfg.scenario.sources = {4, 9};
    cfg.scenario.t_star = 2.5;
    cfg.budgets = {5, 25};
    cfg.replicas = 123;
    cfg.seed = 99;
    cfg.grid.horizon = 12.0;
    cfg.grid.points = 33;
    cfg.report_nodes = {1, 2};
    cfg.report_age = 3.0;
    auto j = config_to_json(cfg);
    RunConfig back = config_from_json(j);
    CHECK(config_to_json(back) == j);
    CHECK(back.betas == cfg.betas);
    CHECK(back.scenario.sources == cfg.scenario.sources);
    CHECK(back.budgets == cfg.budgets);
    CHECK(back.grid.points == cfg.grid.points);

    auto path = temp_file("epinet_cfg.json");
    {
        std::ofstream out(path);
        out << j.dump(2);
    }
    RunConfig loaded = load_config_file(path.string());
    CHECK(config_to_json(loaded) == j);
    std::remove(path.string().c_str());
}

TEST_CASE("scalar beta and k spellings are accepted") {
    nlohmann::json j;
    j["model"]["beta"] = 0.07;
    j["scenario"]["k"] = 12;
    RunConfig cfg = config_from_json(j);
    CHECK(cfg.betas == std::vector<double>{0.07});
    CHECK(cfg.budgets == std::vector<std::size_t>{12});
}

TEST_CASE("graph specs resolve to the requested topology") {
    GraphSpec spec;
    spec.kind = "path";
    spec.n = 4;
    CHECK(resolve_graph(spec).edge_count() == 3);
    spec.kind = "star";
    spec.n = 4;
    CHECK(resolve_graph(spec).degree(0) == 3);
    spec.kind = "complete";
    CHECK(resolve_graph(spec).edge_count() == 6);
    spec.kind = "er";
    spec.n = 50;
    spec.p = 0.1;
    spec.seed = 3;
    CHECK(resolve_graph(spec).node_count() == 50);
    spec.kind = "ba";
    spec.n = 50;
    spec.m_attach = 2;
    CHECK(resolve_graph(spec).node_count() == 50);
    spec.kind = "nope";
    CHECK_THROWS_AS(resolve_graph(spec), std::invalid_argument);

    auto path = temp_file("epinet_graph.txt");
    {
        std::ofstream out(path);
        out << "0 1\n1 2\n5 6\n";
    }
    GraphSpec file_spec;
    file_spec.kind = "file";
    file_spec.path = path.string();
    file_spec.use_lcc = true;
    CHECK(resolve_graph(file_spec).node_count() == 3);
    file_spec.use_lcc = false;
    CHECK(resolve_graph(file_spec).node_count() == 5);
    std::remove(path.string().c_str());
}

TEST_CASE("bound comparison emits ordered curves on the two-node graph") {
    RunConfig cfg;
    cfg.name = "tiny";
    cfg.graph.kind = "path";
    cfg.graph.n = 2;
    cfg.betas = {0.6};
    cfg.replicas = 400;
    cfg.grid.points = 12;
    cfg.seed = 7;
    cfg.threads = 2;
    RunArtifacts art = run_bound_compare(cfg);
    auto ms = methods_of(art.table);
    CHECK(ms == std::set<std::string>{"ode", "linearization", "transformation", "simulation"});
    CHECK(art.manifest["graph"]["nodes"] == 2);
    CHECK(art.manifest["resolved"].contains("horizon"));

    // collect per-method curves back out of the long format
    std::map<std::string, std::vector<double>> curve;
    for (const auto& r : art.table.rows)
        curve[r.method].push_back(r.value);
    const auto& ode = curve["ode"];
    const auto& tra = curve["transformation"];
    const auto& lin = curve["linearization"];
    const auto& sim = curve["simulation"];
    REQUIRE(ode.size() == 12);
    for (std::size_t k = 0; k < ode.size(); ++k) {
        // exact on this graph, so the transformed bound collapses onto the ode
        CHECK(tra[k] == doctest::Approx(ode[k]).epsilon(1e-6));
        CHECK(ode[k] <= tra[k] + 1e-9);
        CHECK(tra[k] <= lin[k] + 1e-9);
        CHECK(std::abs(sim[k] - ode[k]) < 0.2);
    }

    RunArtifacts again = run_bound_compare(cfg);
    CHECK(art.table.to_csv() == again.table.to_csv());
    CHECK(art.manifest.dump() == again.manifest.dump());
}

TEST_CASE("policy runner compares all contenders under one scenario") {
    RunConfig cfg;
    cfg.name = "pol";
    cfg.graph.kind = "er";
    cfg.graph.n = 30;
    cfg.graph.p = 0.15;
    cfg.graph.seed = 2;
    cfg.betas = {0.1};
    cfg.budgets = {2};
    cfg.replicas = 150;
    cfg.grid.points = 6;
    cfg.grid.horizon = 10.0;
    cfg.threads = 2;
    cfg.scenario.kind = "preventive";
    RunArtifacts art = run_policy_experiment(cfg);
    CHECK(methods_of(art.table) ==
          std::set<std::string>{"none", "preventive", "evc", "degree"});
    for (const auto& r : art.table.rows)
        if (r.method == "none")
            CHECK(r.k == 0);
        else
            CHECK(r.k == 2);

    cfg.scenario.kind = "reactive";
    cfg.graph.kind = "star";
    cfg.graph.n = 10;
    cfg.scenario.sources = {0};
    cfg.replicas = 100;
    RunArtifacts re = run_policy_experiment(cfg);
    CHECK(methods_of(re.table) ==
          std::set<std::string>{"none", "reactive", "evc", "degree"});
    CHECK(re.manifest["resolved"]["sources"] == nlohmann::json::array({0}));
    // removing two leaves lowers the final mean by about two nodes
    std::map<std::string, double> final_mean;
    for (const auto& r : re.table.rows) final_mean[r.method] = r.value;
    CHECK(final_mean["reactive"] < final_mean["none"]);
}

TEST_CASE("sis demo pairs simulation with the mean-field curve per delta") {
    RunConfig cfg;
    cfg.name = "sis";
    cfg.graph.kind = "complete";
    cfg.graph.n = 20;
    cfg.betas = {0.02};
    cfg.deltas = {1.0};
    cfg.initial_infected = 10;
    cfg.replicas = 200;
    cfg.grid.horizon = 8.0;
    cfg.grid.points = 5;
    cfg.threads = 2;
    RunArtifacts art = run_sis_demo(cfg);
    CHECK(methods_of(art.table) == std::set<std::string>{"ode", "simulation"});
    for (const auto& r : art.table.rows) CHECK(r.experiment == "sis-delta=1");
    // subcritical: both curves decay
    std::map<std::string, std::vector<double>> curve;
    for (const auto& r : art.table.rows) curve[r.method].push_back(r.value);
    CHECK(curve["ode"].front() == doctest::Approx(10.0).epsilon(1e-9));
    CHECK(curve["ode"].back() < 2.0);
    CHECK(curve["simulation"].front() == 10.0);
    CHECK(curve["simulation"].back() < 3.0);
}

TEST_CASE("reliability report covers curves, tables, and identity checks") {
    RunConfig cfg;
    cfg.name = "rel";
    cfg.graph.kind = "er";
    cfg.graph.n = 20;
    cfg.graph.p = 0.2;
    cfg.graph.seed = 4;
    cfg.betas = {0.1};
    cfg.grid.points = 8;
    cfg.report_nodes = {0, 1};
    RunArtifacts art = run_reliability_report(cfg);
    auto ms = methods_of(art.table);
    CHECK(ms.count("hazard") == 1);
    CHECK(ms.count("cumulative-hazard") == 1);
    CHECK(ms.count("survival") == 1);
    CHECK(ms.count("identity-value") == 1);
    CHECK(ms.count("identity-slope") == 1);
    bool saw_residual = false;
    for (const auto& m : ms) saw_residual = saw_residual || m.rfind("residual-age=", 0) == 0;
    CHECK(saw_residual);
    for (const auto& r : art.table.rows) {
        if (r.method == "survival") {
            CHECK(r.value >= 0.0);
            CHECK(r.value <= 1.0);
        }
        if (r.method == "identity-value") CHECK(r.value < 1e-6);
        if (r.method == "identity-slope") CHECK(r.value < 1e-6);
    }
}

TEST_CASE("artifacts land on disk and reproduce byte for byte") {
    RunConfig cfg;
    cfg.name = "repro";
    cfg.graph.kind = "path";
    cfg.graph.n = 2;
    cfg.betas = {0.5};
    cfg.replicas = 100;
    cfg.grid.points = 5;
    cfg.seed = 31;
    cfg.threads = 2;
    auto dir = std::filesystem::temp_directory_path() / "epinet_art";
    std::filesystem::remove_all(dir);

    RunArtifacts a = run_bound_compare(cfg);
    write_artifacts(a, dir.string());
    auto csv1 = slurp(dir / "repro.csv");
    auto man1 = slurp(dir / "repro-manifest.json");
    CHECK(!csv1.empty());
    CHECK(!man1.empty());

    RunArtifacts b = run_bound_compare(cfg);
    write_artifacts(b, dir.string());
    CHECK(slurp(dir / "repro.csv") == csv1);
    CHECK(slurp(dir / "repro-manifest.json") == man1);

    cfg.seed = 32;
    RunArtifacts c = run_bound_compare(cfg);
    write_artifacts(c, dir.string());
    CHECK(slurp(dir / "repro.csv") != csv1);
    std::filesystem::remove_all(dir);
}
