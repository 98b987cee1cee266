#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "epinet/bounds.hpp"
#include "epinet/graph.hpp"
#include "epinet/linalg.hpp"
#include "epinet/stochastic.hpp"

namespace epinet {

enum class PolicyKind { preventive, reactive, evc, degree };

struct PolicySelection {
    PolicyKind policy = PolicyKind::degree;
    double t_star = 0.0;       // score evaluation time (0 when not applicable)
    std::size_t budget = 0;    // requested number of nodes
    std::vector<NodeId> selected;
    std::vector<double> scores;  // full score vector the selection was drawn from
};

// Scores for vaccinating before an outbreak whose location is unknown:
// row sums of exp(alpha beta t* A) with alpha = 1 - c/n, where c is the
// expected number of initially infected nodes. This is the ranking induced by
// the transformed bound at a uniform initial state x0 = (c/n) 1 (terms equal
// across nodes are dropped). Requires 0 < c < n.
std::vector<double> preventive_scores(const Graph& g, double beta,
                                      double expected_initial_infectives, double t_star,
                                      const ExpmActionParams& params = {});

// Scores for vaccinating during an outbreak with known state x0: the finite
// part of the transformed bound at t*. Already-infected nodes (x0 == 1) get
// -inf so they can never be selected.
std::vector<double> reactive_scores(const Graph& g, double beta, const StateVector& x0,
                                    double t_star, const ExpmActionParams& params = {});

// Dominant adjacency eigenvector (eigenvector centrality).
std::vector<double> evc_scores(const Graph& g, double tol = 1e-12, int max_iters = 100000);

std::vector<double> degree_scores(const Graph& g);

// Highest-score-first selection of k nodes; ties broken toward the smaller
// node id; ids listed in excluded are skipped. Requires
// k <= n - |excluded ∪ {-inf scores}|.
PolicySelection select_top_k(PolicyKind policy, double t_star, std::span<const double> scores,
                             std::size_t k, std::span<const NodeId> excluded = {});

// Induced subgraph after deleting the selected nodes (they can neither be
// infected nor transmit). The result's original_ids compose with the input's.
Graph immunize(const Graph& g, const PolicySelection& selection);

// Outbreak starts at one uniformly random non-immunized node per replica.
struct PreventiveScenario {};
// Outbreak starts at the given nodes (ids in the unvaccinated graph).
struct ReactiveScenario {
    std::vector<NodeId> sources;
};
using Scenario = std::variant<PreventiveScenario, ReactiveScenario>;

struct PolicyEvaluation {
    PolicySelection selection;
    Graph residual;                   // graph the ensemble ran on
    std::vector<NodeId> kept;         // residual node -> original graph node
    EnsembleResult ensemble;
};

// Evaluates each selection under the same scenario with common random
// numbers: replica r always draws from seed (master_seed, r), so policy
// curves differ only through the removed nodes. Reactive sources must
// survive every selection.
std::vector<PolicyEvaluation> evaluate_policy(const Graph& g, double beta,
                                              std::span<const PolicySelection> selections,
                                              const Scenario& scenario, std::size_t replicas,
                                              std::span<const double> grid,
                                              std::uint64_t master_seed, int threads = 0);

}  // namespace epinet
