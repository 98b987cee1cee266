#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <variant>
#include <vector>

#include "epinet/dynamics.hpp"
#include "epinet/graph.hpp"

namespace epinet {

// Replica r of a run with master seed m draws from a generator seeded by the
// pair (m, r) only. Replicas are therefore independent of scheduling order
// and whole runs reproduce bitwise for a fixed (graph, parameters, m).
struct Seed {
    std::uint64_t master = 0;
    std::uint64_t replica = 0;
};

class ReplicaRng {
public:
    explicit ReplicaRng(Seed seed);

    std::uint64_t next_u64() { return gen_(); }
    // Uniform on [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
    // Exponential with the given rate; exact at u = 0.
    double exponential(double rate);
    // Uniform integer in [0, n).
    std::size_t uniform_index(std::size_t n);

private:
    std::mt19937_64 gen_;
};

// One exact continuous-time SI epidemic: every susceptible node with k
// currently infected neighbors is infected at rate beta*k. Returns each
// node's infection time (0 for sources, +inf if still susceptible at the
// horizon). Event-driven: each susceptible keeps one tentative infection time
// that is redrawn when its infected-neighbor count changes, which preserves
// the exact law by memorylessness.
std::vector<double> simulate_si_replica(const Graph& g, double beta,
                                        std::span<const NodeId> sources, double horizon,
                                        Seed seed);

// Same mechanism plus curing at rate delta per infected node. Returns the
// number of infected nodes at each grid time.
std::vector<double> simulate_sis_counts(const Graph& g, double beta, double delta,
                                        std::span<const NodeId> initial,
                                        std::span<const double> grid, Seed seed);

struct InitialFixedSet {
    std::vector<NodeId> nodes;
};
struct InitialUniformSingleSource {};
// Independent per-node infection with probability x0[i]; an empty draw is a
// legitimate sample (nothing spreads in that replica).
struct InitialBernoulli {
    std::vector<double> x0;
};
using InitialCondition =
    std::variant<InitialFixedSet, InitialUniformSingleSource, InitialBernoulli>;

struct EnsembleResult {
    std::vector<double> times;
    std::vector<double> mean_count;    // mean infected count at each grid time
    std::vector<double> stderr_count;  // standard error of that mean
    std::vector<std::vector<double>> node_probability;  // [time][node] empirical marginals
    std::size_t replicas = 0;
    std::size_t node_count = 0;
    // Infection time of node i in replica r at [r * node_count + i].
    std::vector<double> infection_times;
};

// Runs SI replicas r = 0..replicas-1 with seeds (master_seed, r) and
// aggregates in fixed replica order, so results do not depend on the thread
// count. threads == 0 uses the hardware concurrency.
EnsembleResult run_ensemble(const Graph& g, double beta, const InitialCondition& initial,
                            std::size_t replicas, std::span<const double> grid,
                            std::uint64_t master_seed, int threads = 0);

// Exact marginals of the stochastic SI process from independent Bernoulli(x0)
// starts, by integrating the forward equations over all 2^n subsets. Only
// feasible for n <= 12; rejects larger graphs.
Trajectory master_equation_oracle(const Graph& g, double beta, std::span<const double> x0,
                                  std::span<const double> grid, const Accuracy& acc = {});

struct SisEnsembleResult {
    std::vector<double> times;
    std::vector<double> mean_count;
    std::vector<double> stderr_count;
    std::size_t replicas = 0;
};

// SIS ensemble; each replica draws its own initial set of exactly
// initial_infected distinct nodes uniformly at random.
SisEnsembleResult run_sis_ensemble(const Graph& g, double beta, double delta,
                                   std::size_t initial_infected, std::size_t replicas,
                                   std::span<const double> grid, std::uint64_t master_seed,
                                   int threads = 0);

}  // namespace epinet
