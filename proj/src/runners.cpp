#include "epinet/runners.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <stdexcept>

#include "epinet/bounds.hpp"
#include "epinet/dynamics.hpp"
#include "epinet/linalg.hpp"
#include "epinet/reliability.hpp"
#include "epinet/stochastic.hpp"
#include "epinet/vaccination.hpp"
#include "epinet/version.hpp"

namespace epinet {

namespace {

std::string fmt(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw std::runtime_error("format failure");
    return {buf, ptr};
}

std::vector<double> linspace(double T, std::size_t points) {
    if (!(T > 0.0)) throw std::invalid_argument("horizon must be positive");
    if (points < 2) throw std::invalid_argument("need at least two grid points");
    std::vector<double> grid(points);
    for (std::size_t k = 0; k < points; ++k)
        grid[k] = T * static_cast<double>(k) / static_cast<double>(points - 1);
    return grid;
}

// Smallest t with f(t) >= target for a nondecreasing f, by doubling then
// bisection. Used to pick horizons from the closed-form bound totals.
double rising_time(const std::function<double(double)>& f, double target, double t0) {
    double hi = t0;
    int guard = 0;
    while (f(hi) < target) {
        hi *= 2.0;
        if (++guard > 120) throw std::runtime_error("horizon search did not terminate");
    }
    double lo = 0.0;
    for (int i = 0; i < 60; ++i) {
        double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (f(mid) >= target ? hi : lo) = mid;
    }
    return hi;
}

double sum_transformed_bound(const Graph& g, double beta, const StateVector& x0, double t) {
    std::vector<double> y = transformation_yhat_finite(g, beta, x0, t);
    double total = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i)
        total += x0.values[i] == 1.0 ? 1.0 : transform_f(y[i]);
    return total;
}

double sum_linearization(const Graph& g, double beta, const StateVector& x0, double t) {
    std::vector<double> x = expm_action(g, {}, beta * t, x0.values).values;
    double total = 0.0;
    for (double v : x) total += v;
    return total;
}

double start_scale(const Graph& g, double beta) {
    double lower = spectral_radius_bounds(g).first;
    return 1.0 / (beta * std::max(lower, 1.0));
}

NodeId by_original_id(const Graph& g, std::int64_t original) {
    const auto& ids = g.original_ids();
    auto it = std::lower_bound(ids.begin(), ids.end(), original);
    if (it == ids.end() || *it != original)
        throw std::invalid_argument("node id " + std::to_string(original) +
                                    " is not in the graph");
    return static_cast<NodeId>(it - ids.begin());
}

// Resolves the scenario's source list. Priority: explicit ids, then the
// lowest-id node of the requested degree, then the lowest-id node whose
// degree sits at the 90th percentile.
std::vector<NodeId> resolve_sources(const Graph& g, const ScenarioSpec& sc) {
    if (!sc.sources.empty()) {
        std::vector<NodeId> out;
        out.reserve(sc.sources.size());
        for (std::int64_t s : sc.sources) out.push_back(by_original_id(g, s));
        std::sort(out.begin(), out.end());
        if (std::adjacent_find(out.begin(), out.end()) != out.end())
            throw std::invalid_argument("duplicate scenario source");
        return out;
    }
    std::size_t want;
    if (sc.source_degree >= 0) {
        want = static_cast<std::size_t>(sc.source_degree);
    } else {
        std::vector<std::size_t> degs(g.node_count());
        for (std::size_t i = 0; i < g.node_count(); ++i)
            degs[i] = g.degree(static_cast<NodeId>(i));
        std::sort(degs.begin(), degs.end());
        want = degs[(degs.size() - 1) * 9 / 10];
    }
    for (std::size_t i = 0; i < g.node_count(); ++i)
        if (g.degree(static_cast<NodeId>(i)) == want) return {static_cast<NodeId>(i)};
    throw std::invalid_argument("no node with degree " + std::to_string(want));
}

nlohmann::json graph_stats(const Graph& g) {
    DegreeSummary d = degree_summary(g);
    return {{"nodes", g.node_count()},
            {"edges", g.edge_count()},
            {"mean_degree", d.mean_degree},
            {"max_degree", d.max_degree}};
}

nlohmann::json base_manifest(const RunConfig& cfg, const Graph& g) {
    nlohmann::json m;
    m["name"] = cfg.name;
    m["version"] = kVersion;
    m["config"] = config_to_json(cfg);
    m["graph"] = graph_stats(g);
    return m;
}

}  // namespace

RunArtifacts run_bound_compare(const RunConfig& cfg) {
    Graph g = resolve_graph(cfg.graph);
    const std::size_t n = g.node_count();

    std::vector<NodeId> sources = resolve_sources(g, cfg.scenario);
    StateVector x0;
    x0.values.assign(n, 0.0);
    for (NodeId s : sources) x0.values[static_cast<std::size_t>(s)] = 1.0;

    RunArtifacts art;
    art.name = cfg.name;
    art.manifest = base_manifest(cfg, g);
    art.manifest["resolved"]["sources"] = sources;
    nlohmann::json horizons = nlohmann::json::object();

    for (double beta : cfg.betas) {
        double T = cfg.grid.horizon;
        if (!(T > 0.0)) {
            double t0 = start_scale(g, beta);
            double t_sat = rising_time(
                [&](double t) { return sum_transformed_bound(g, beta, x0, t); },
                0.995 * static_cast<double>(n), t0);
            double t_cross = rising_time(
                [&](double t) { return sum_linearization(g, beta, x0, t); },
                static_cast<double>(n), t0);
            T = std::max(t_sat, 10.0 * t_cross);
        }
        horizons["beta=" + fmt(beta)] = T;
        std::vector<double> grid = linspace(T, cfg.grid.points);
        std::string experiment = cfg.name + "-beta=" + fmt(beta);

        Trajectory ode = integrate_si(g, {beta, 0.0}, x0, grid);
        BoundResult lin = linearization_bound(g, beta, x0, grid);
        BoundResult tra = transformation_bound(g, beta, x0, grid);
        EnsembleResult sim =
            run_ensemble(g, beta, InitialFixedSet{sources}, cfg.replicas, grid, cfg.seed,
                         cfg.threads);

        for (std::size_t k = 0; k < grid.size(); ++k) {
            auto total = [](const std::vector<double>& v) {
                double s = 0.0;
                for (double x : v) s += x;
                return s;
            };
            art.table.add({experiment, "ode", grid[k], total(ode.states[k]), 0.0, 0, 0});
            art.table.add({experiment, "linearization", grid[k], total(lin.probability.states[k]),
                           0.0, lin.series_terms[k], 0});
            art.table.add({experiment, "transformation", grid[k],
                           total(tra.probability.states[k]), 0.0, tra.series_terms[k], 0});
            art.table.add({experiment, "simulation", grid[k], sim.mean_count[k],
                           sim.stderr_count[k], 0, cfg.seed});
        }
    }
    art.manifest["resolved"]["horizon"] = horizons;
    art.table.sort_rows();
    return art;
}

RunArtifacts run_policy_experiment(const RunConfig& cfg) {
    Graph g = resolve_graph(cfg.graph);
    const std::size_t n = g.node_count();
    if (cfg.betas.size() != 1)
        throw std::invalid_argument("policy experiment expects exactly one beta");
    const double beta = cfg.betas[0];
    const bool reactive = cfg.scenario.kind == "reactive";
    if (!reactive && cfg.scenario.kind != "preventive")
        throw std::invalid_argument("unknown scenario kind: " + cfg.scenario.kind);

    EigenPair top = dominant_eigenpair(g, {}, false);
    double t_star = cfg.scenario.t_star > 0.0 ? cfg.scenario.t_star : 1.0 / (beta * top.value);

    std::vector<NodeId> sources;
    StateVector x0;
    if (reactive) {
        sources = resolve_sources(g, cfg.scenario);
        x0.values.assign(n, 0.0);
        for (NodeId s : sources) x0.values[static_cast<std::size_t>(s)] = 1.0;
    } else {
        x0.values.assign(n, 1.0 / static_cast<double>(n));
    }

    double T = cfg.grid.horizon;
    if (!(T > 0.0)) {
        double t_sat = rising_time(
            [&](double t) { return sum_transformed_bound(g, beta, x0, t); },
            0.999 * static_cast<double>(n), start_scale(g, beta));
        T = 1.5 * t_sat;
    }
    std::vector<double> grid = linspace(T, cfg.grid.points);

    struct Contender {
        std::string label;
        PolicyKind kind;
        std::vector<double> scores;
    };
    std::vector<Contender> contenders;
    if (reactive)
        contenders.push_back({"reactive", PolicyKind::reactive,
                              reactive_scores(g, beta, x0, t_star)});
    else
        contenders.push_back({"preventive", PolicyKind::preventive,
                              preventive_scores(g, beta, 1.0, t_star)});
    contenders.push_back({"evc", PolicyKind::evc, top.right});
    contenders.push_back({"degree", PolicyKind::degree, degree_scores(g)});

    Scenario scenario;
    if (reactive)
        scenario = ReactiveScenario{sources};
    else
        scenario = PreventiveScenario{};

    RunArtifacts art;
    art.name = cfg.name;
    art.manifest = base_manifest(cfg, g);
    art.manifest["resolved"]["horizon"] = T;
    art.manifest["resolved"]["t_star"] = t_star;
    art.manifest["resolved"]["lambda_max"] = top.value;
    art.manifest["resolved"]["sources"] = sources;

    std::vector<PolicySelection> selections;
    std::vector<std::pair<std::string, long>> labels;
    selections.push_back(select_top_k(PolicyKind::degree, 0.0, degree_scores(g), 0));
    labels.emplace_back("none", 0);
    for (std::size_t K : cfg.budgets) {
        for (const Contender& c : contenders) {
            selections.push_back(select_top_k(c.kind, t_star, c.scores, K, sources));
            labels.emplace_back(c.label, static_cast<long>(K));
        }
    }

    auto evals = evaluate_policy(g, beta, selections, scenario, cfg.replicas, grid, cfg.seed,
                                 cfg.threads);
    for (std::size_t e = 0; e < evals.size(); ++e) {
        const auto& [label, K] = labels[e];
        for (std::size_t k = 0; k < grid.size(); ++k)
            art.table.add({cfg.name, label, grid[k], evals[e].ensemble.mean_count[k],
                           evals[e].ensemble.stderr_count[k], K, cfg.seed});
    }
    art.table.sort_rows();
    return art;
}

RunArtifacts run_sis_demo(const RunConfig& cfg) {
    Graph g = resolve_graph(cfg.graph);
    const std::size_t n = g.node_count();
    if (cfg.betas.size() != 1)
        throw std::invalid_argument("sis demo expects exactly one beta");
    const double beta = cfg.betas[0];
    std::size_t c = cfg.initial_infected > 0 ? cfg.initial_infected : n / 2;
    if (c == 0 || c > n) throw std::invalid_argument("initial infected count out of range");

    double T = cfg.grid.horizon > 0.0 ? cfg.grid.horizon : 60.0;
    std::vector<double> grid = linspace(T, cfg.grid.points);

    RunArtifacts art;
    art.name = cfg.name;
    art.manifest = base_manifest(cfg, g);
    art.manifest["resolved"]["horizon"] = T;
    art.manifest["resolved"]["initial_infected"] = c;

    StateVector x0;
    x0.values.assign(n, static_cast<double>(c) / static_cast<double>(n));
    for (double delta : cfg.deltas) {
        std::string experiment = cfg.name + "-delta=" + fmt(delta);
        SisEnsembleResult sim =
            run_sis_ensemble(g, beta, delta, c, cfg.replicas, grid, cfg.seed, cfg.threads);
        Trajectory ode = integrate_sis(g, {beta, delta}, x0, grid);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            double mf = 0.0;
            for (double v : ode.states[k]) mf += v;
            art.table.add({experiment, "simulation", grid[k], sim.mean_count[k],
                           sim.stderr_count[k], 0, cfg.seed});
            art.table.add({experiment, "ode", grid[k], mf, 0.0, 0, 0});
        }
    }
    art.table.sort_rows();
    return art;
}

RunArtifacts run_reliability_report(const RunConfig& cfg) {
    Graph g = resolve_graph(cfg.graph);
    const std::size_t n = g.node_count();
    if (cfg.betas.size() != 1)
        throw std::invalid_argument("reliability report expects exactly one beta");
    const double beta = cfg.betas[0];

    // Interior initial state so the transformed identities are finite.
    StateVector x0;
    x0.values.assign(n, 0.01);

    double T = cfg.grid.horizon;
    if (!(T > 0.0)) {
        T = 1.2 * rising_time(
                      [&](double t) { return sum_transformed_bound(g, beta, x0, t); },
                      0.9 * static_cast<double>(n), start_scale(g, beta));
    }
    std::vector<double> grid = linspace(T, cfg.grid.points);

    std::vector<NodeId> nodes;
    if (cfg.report_nodes.empty()) {
        for (std::size_t i = 0; i < std::min<std::size_t>(n, 8); ++i)
            nodes.push_back(static_cast<NodeId>(i));
    } else {
        for (std::int64_t v : cfg.report_nodes) nodes.push_back(by_original_id(g, v));
    }
    double age = cfg.report_age > 0.0 ? cfg.report_age : T / 4.0;
    std::vector<double> ages{age, 2.0 * age};

    RunArtifacts art;
    art.name = cfg.name;
    art.manifest = base_manifest(cfg, g);
    art.manifest["resolved"]["horizon"] = T;
    art.manifest["resolved"]["x0_uniform"] = 0.01;
    art.manifest["resolved"]["ages"] = ages;
    art.manifest["resolved"]["nodes"] = nodes;

    HazardCurve hc = hazard_curve(g, beta, x0, grid);
    SurvivalCurves sc = survival_curve(g, beta, x0, grid);
    for (NodeId v : nodes) {
        auto vi = static_cast<std::size_t>(v);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            art.table.add({cfg.name, "hazard", grid[k], hc.hazard[k][vi], 0.0, v, 0});
            art.table.add({cfg.name, "cumulative-hazard", grid[k], hc.cumulative[k][vi], 0.0, v,
                           0});
            art.table.add({cfg.name, "survival", grid[k], sc.survival[k][vi], 0.0, v, 0});
        }
    }

    std::vector<double> lookahead = linspace(T / 2.0, cfg.grid.points / 2 + 2);
    for (double a : ages) {
        auto rows = residual_life_distribution(g, beta, x0, a, lookahead);
        std::string method = "residual-age=" + fmt(a);
        for (NodeId v : nodes)
            for (std::size_t k = 0; k < lookahead.size(); ++k)
                art.table.add({cfg.name, method, lookahead[k],
                               rows[k][static_cast<std::size_t>(v)], 0.0, v, 0});
    }

    TransformedIdentityReport rep = transformed_identity_check(g, beta, x0, grid);
    art.table.add({cfg.name, "identity-value", 0.0, rep.max_value_discrepancy, 0.0, 0, 0});
    art.table.add({cfg.name, "identity-slope", 0.0, rep.max_derivative_discrepancy, 0.0, 0, 0});
    art.table.sort_rows();
    return art;
}

void write_artifacts(RunArtifacts& artifacts, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    artifacts.table.write_csv(out_dir + "/" + artifacts.name + ".csv");
    std::ofstream mf(out_dir + "/" + artifacts.name + "-manifest.json", std::ios::binary);
    if (!mf) throw std::runtime_error("cannot write manifest");
    mf << artifacts.manifest.dump(2) << '\n';
}

}  // namespace epinet
