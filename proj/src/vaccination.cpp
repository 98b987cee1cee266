#include "epinet/vaccination.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace epinet {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

std::vector<double> preventive_scores(const Graph& g, double beta,
                                      double expected_initial_infectives, double t_star,
                                      const ExpmActionParams& params) {
    const auto n = static_cast<double>(g.node_count());
    if (!(expected_initial_infectives > 0.0 && expected_initial_infectives < n))
        throw std::invalid_argument("expected initial infectives must lie in (0, n)");
    if (!(beta >= 0.0) || !(t_star >= 0.0))
        throw std::invalid_argument("beta and t_star must be nonnegative");
    double alpha = 1.0 - expected_initial_infectives / n;
    std::vector<double> ones(g.node_count(), 1.0);
    return expm_action(g, {}, alpha * beta * t_star, ones, params).values;
}

std::vector<double> reactive_scores(const Graph& g, double beta, const StateVector& x0,
                                    double t_star, const ExpmActionParams& params) {
    if (!(beta >= 0.0) || !(t_star >= 0.0))
        throw std::invalid_argument("beta and t_star must be nonnegative");
    std::vector<double> scores = transformation_yhat_finite(g, beta, x0, t_star, params);
    for (std::size_t i = 0; i < scores.size(); ++i)
        if (x0.values[i] == 1.0) scores[i] = kNegInf;
    return scores;
}

std::vector<double> evc_scores(const Graph& g, double tol, int max_iters) {
    return dominant_eigenpair(g, {}, false, tol, max_iters).right;
}

std::vector<double> degree_scores(const Graph& g) {
    return degree_summary(g).degrees;
}

PolicySelection select_top_k(PolicyKind policy, double t_star, std::span<const double> scores,
                             std::size_t k, std::span<const NodeId> excluded) {
    const std::size_t n = scores.size();
    std::vector<char> skip(n, 0);
    for (NodeId e : excluded) {
        if (e < 0 || static_cast<std::size_t>(e) >= n)
            throw std::invalid_argument("excluded id out of range");
        skip[static_cast<std::size_t>(e)] = 1;
    }
    std::vector<NodeId> order;
    order.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        if (!skip[i] && scores[i] > kNegInf) order.push_back(static_cast<NodeId>(i));
    if (k > order.size())
        throw std::invalid_argument("budget exceeds the number of selectable nodes");
    std::stable_sort(order.begin(), order.end(), [&scores](NodeId a, NodeId b) {
        double sa = scores[static_cast<std::size_t>(a)];
        double sb = scores[static_cast<std::size_t>(b)];
        if (sa != sb) return sa > sb;
        return a < b;
    });

    PolicySelection sel;
    sel.policy = policy;
    sel.t_star = t_star;
    sel.budget = k;
    sel.selected.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
    sel.scores.assign(scores.begin(), scores.end());
    return sel;
}

Graph immunize(const Graph& g, const PolicySelection& selection) {
    const std::size_t n = g.node_count();
    std::vector<char> removed(n, 0);
    for (NodeId v : selection.selected) {
        if (v < 0 || static_cast<std::size_t>(v) >= n)
            throw std::invalid_argument("selected id out of range");
        if (removed[static_cast<std::size_t>(v)])
            throw std::invalid_argument("selected id repeated");
        removed[static_cast<std::size_t>(v)] = 1;
    }
    if (selection.selected.size() >= n)
        throw std::invalid_argument("cannot immunize every node");

    std::vector<NodeId> remap(n, -1);
    std::vector<std::int64_t> kept_originals;
    NodeId next = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!removed[i]) {
            remap[i] = next++;
            kept_originals.push_back(g.original_ids()[i]);
        }
    }
    std::vector<std::pair<NodeId, NodeId>> edges;
    edges.reserve(g.edge_count());
    for (std::size_t i = 0; i < n; ++i) {
        if (removed[i]) continue;
        for (NodeId j : g.neighbors(static_cast<NodeId>(i)))
            if (static_cast<std::size_t>(j) > i && !removed[static_cast<std::size_t>(j)])
                edges.emplace_back(remap[i], remap[static_cast<std::size_t>(j)]);
    }
    Graph out = Graph::from_edges(static_cast<std::size_t>(next), edges);
    out.set_original_ids(std::move(kept_originals));
    return out;
}

std::vector<PolicyEvaluation> evaluate_policy(const Graph& g, double beta,
                                              std::span<const PolicySelection> selections,
                                              const Scenario& scenario, std::size_t replicas,
                                              std::span<const double> grid,
                                              std::uint64_t master_seed, int threads) {
    const std::size_t n = g.node_count();
    const auto* reactive = std::get_if<ReactiveScenario>(&scenario);
    if (reactive) {
        if (reactive->sources.empty())
            throw std::invalid_argument("reactive scenario needs at least one source");
        for (NodeId s : reactive->sources)
            if (s < 0 || static_cast<std::size_t>(s) >= n)
                throw std::invalid_argument("scenario source out of range");
    }

    std::vector<PolicyEvaluation> out;
    out.reserve(selections.size());
    for (const PolicySelection& sel : selections) {
        PolicyEvaluation ev;
        ev.selection = sel;
        ev.residual = immunize(g, sel);

        std::vector<char> removed(n, 0);
        for (NodeId v : sel.selected) removed[static_cast<std::size_t>(v)] = 1;
        ev.kept.reserve(n - sel.selected.size());
        for (std::size_t i = 0; i < n; ++i)
            if (!removed[i]) ev.kept.push_back(static_cast<NodeId>(i));

        InitialCondition init = InitialUniformSingleSource{};
        if (reactive) {
            std::vector<NodeId> mapped;
            mapped.reserve(reactive->sources.size());
            for (NodeId s : reactive->sources) {
                auto it = std::lower_bound(ev.kept.begin(), ev.kept.end(), s);
                if (it == ev.kept.end() || *it != s)
                    throw std::invalid_argument("a scenario source was immunized");
                mapped.push_back(static_cast<NodeId>(it - ev.kept.begin()));
            }
            init = InitialFixedSet{std::move(mapped)};
        }
        ev.ensemble = run_ensemble(ev.residual, beta, init, replicas, grid, master_seed, threads);
        out.push_back(std::move(ev));
    }
    return out;
}

}  // namespace epinet
