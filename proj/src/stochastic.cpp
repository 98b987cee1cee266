#include "epinet/stochastic.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <thread>

namespace epinet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_grid_sorted(std::span<const double> grid) {
    if (grid.empty()) throw std::invalid_argument("time grid is empty");
    if (!(grid[0] >= 0.0)) throw std::invalid_argument("time grid starts before 0");
    for (std::size_t k = 1; k < grid.size(); ++k)
        if (!(grid[k] > grid[k - 1]))
            throw std::invalid_argument("time grid must be strictly increasing");
}

}  // namespace

ReplicaRng::ReplicaRng(Seed seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed.master), static_cast<std::uint32_t>(seed.master >> 32),
                      static_cast<std::uint32_t>(seed.replica), static_cast<std::uint32_t>(seed.replica >> 32)};
    gen_.seed(seq);
}

double ReplicaRng::exponential(double rate) {
    double u = uniform01();
    if (!(rate > 0.0)) return kInf;
    return -std::log1p(-u) / rate;
}

std::size_t ReplicaRng::uniform_index(std::size_t n) {
    if (n == 0) throw std::invalid_argument("uniform_index over empty range");
    auto idx = static_cast<std::size_t>(static_cast<double>(n) * uniform01());
    return idx < n ? idx : n - 1;
}

namespace {

struct Event {
    double time;
    NodeId node;
    std::uint32_t gen;
};

struct LaterEvent {
    bool operator()(const Event& a, const Event& b) const { return a.time > b.time; }
};

using EventQueue = std::priority_queue<Event, std::vector<Event>, LaterEvent>;

// Tentative infection times are redrawn whenever a node's infected-neighbor
// count changes; the per-node generation counter invalidates stale queue
// entries. Redraw-on-change keeps the law exact because the exponential clock
// is memoryless.
std::vector<double> simulate_si_core(const Graph& g, double beta,
                                     std::span<const NodeId> sources, double horizon,
                                     ReplicaRng& rng) {
    const std::size_t n = g.node_count();
    std::vector<char> infected(n, 0);
    std::vector<double> when(n, kInf);
    std::vector<std::uint32_t> gen(n, 0);
    std::vector<std::uint32_t> hot(n, 0);  // infected-neighbor counts

    for (NodeId s : sources) {
        if (s < 0 || static_cast<std::size_t>(s) >= n)
            throw std::invalid_argument("source id out of range");
        if (infected[static_cast<std::size_t>(s)])
            throw std::invalid_argument("duplicate source id");
        infected[static_cast<std::size_t>(s)] = 1;
        when[static_cast<std::size_t>(s)] = 0.0;
    }

    EventQueue queue;
    for (NodeId s : sources)
        for (NodeId v : g.neighbors(s))
            if (!infected[static_cast<std::size_t>(v)]) ++hot[static_cast<std::size_t>(v)];
    for (std::size_t v = 0; v < n; ++v)
        if (!infected[v] && hot[v] > 0)
            queue.push({rng.exponential(beta * hot[v]), static_cast<NodeId>(v), gen[v]});

    while (!queue.empty()) {
        Event ev = queue.top();
        queue.pop();
        if (ev.time > horizon) break;
        auto u = static_cast<std::size_t>(ev.node);
        if (infected[u] || ev.gen != gen[u]) continue;
        infected[u] = 1;
        when[u] = ev.time;
        for (NodeId w : g.neighbors(ev.node)) {
            auto wi = static_cast<std::size_t>(w);
            if (infected[wi]) continue;
            ++hot[wi];
            ++gen[wi];
            queue.push({ev.time + rng.exponential(beta * hot[wi]), w, gen[wi]});
        }
    }
    return when;
}

std::vector<double> simulate_sis_core(const Graph& g, double beta, double delta,
                                      std::span<const NodeId> initial,
                                      std::span<const double> grid, ReplicaRng& rng) {
    const std::size_t n = g.node_count();
    std::vector<char> infected(n, 0);
    std::vector<std::uint32_t> gen(n, 0);
    std::vector<std::uint32_t> hot(n, 0);
    enum : std::uint8_t { kInfect = 0, kRecover = 1 };

    struct SisEvent {
        double time;
        NodeId node;
        std::uint32_t gen;
        std::uint8_t kind;
    };
    struct Later {
        bool operator()(const SisEvent& a, const SisEvent& b) const { return a.time > b.time; }
    };
    std::priority_queue<SisEvent, std::vector<SisEvent>, Later> queue;

    std::size_t current = 0;
    for (NodeId s : initial) {
        if (s < 0 || static_cast<std::size_t>(s) >= n)
            throw std::invalid_argument("initial id out of range");
        if (infected[static_cast<std::size_t>(s)])
            throw std::invalid_argument("duplicate initial id");
        infected[static_cast<std::size_t>(s)] = 1;
        ++current;
    }
    for (NodeId s : initial)
        for (NodeId v : g.neighbors(s)) ++hot[static_cast<std::size_t>(v)];
    for (std::size_t v = 0; v < n; ++v) {
        if (infected[v])
            queue.push({rng.exponential(delta), static_cast<NodeId>(v), gen[v], kRecover});
        else if (hot[v] > 0)
            queue.push({rng.exponential(beta * hot[v]), static_cast<NodeId>(v), gen[v], kInfect});
    }

    std::vector<double> counts(grid.size(), 0.0);
    std::size_t gi = 0;
    const double horizon = grid.back();

    auto record_until = [&](double t) {
        while (gi < grid.size() && grid[gi] < t) counts[gi++] = static_cast<double>(current);
    };

    while (!queue.empty()) {
        SisEvent ev = queue.top();
        queue.pop();
        if (ev.time > horizon) break;
        auto u = static_cast<std::size_t>(ev.node);
        if (ev.gen != gen[u]) continue;
        if (ev.kind == kInfect) {
            if (infected[u]) continue;
            record_until(ev.time);
            infected[u] = 1;
            ++current;
            ++gen[u];
            queue.push({ev.time + rng.exponential(delta), ev.node, gen[u], kRecover});
            for (NodeId w : g.neighbors(ev.node)) {
                auto wi = static_cast<std::size_t>(w);
                ++hot[wi];
                if (!infected[wi]) {
                    ++gen[wi];
                    queue.push({ev.time + rng.exponential(beta * hot[wi]), w, gen[wi], kInfect});
                }
            }
        } else {
            if (!infected[u]) continue;
            record_until(ev.time);
            infected[u] = 0;
            --current;
            ++gen[u];
            if (hot[u] > 0)
                queue.push({ev.time + rng.exponential(beta * hot[u]), ev.node, gen[u], kInfect});
            for (NodeId w : g.neighbors(ev.node)) {
                auto wi = static_cast<std::size_t>(w);
                --hot[wi];
                if (!infected[wi]) {
                    ++gen[wi];
                    if (hot[wi] > 0)
                        queue.push(
                            {ev.time + rng.exponential(beta * hot[wi]), w, gen[wi], kInfect});
                }
            }
        }
    }
    record_until(kInf);
    return counts;
}

std::vector<NodeId> draw_initial(const InitialCondition& initial, std::size_t n,
                                 ReplicaRng& rng) {
    if (const auto* fixed = std::get_if<InitialFixedSet>(&initial)) return fixed->nodes;
    if (std::holds_alternative<InitialUniformSingleSource>(initial))
        return {static_cast<NodeId>(rng.uniform_index(n))};
    const auto& bern = std::get<InitialBernoulli>(initial);
    std::vector<NodeId> nodes;
    for (std::size_t i = 0; i < n; ++i)
        if (rng.uniform01() < bern.x0[i]) nodes.push_back(static_cast<NodeId>(i));
    return nodes;
}

void validate_initial(const InitialCondition& initial, std::size_t n) {
    if (const auto* fixed = std::get_if<InitialFixedSet>(&initial)) {
        if (fixed->nodes.empty()) throw std::invalid_argument("fixed source set is empty");
        std::vector<NodeId> sorted = fixed->nodes;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw std::invalid_argument("fixed source set has duplicates");
        if (sorted.front() < 0 || static_cast<std::size_t>(sorted.back()) >= n)
            throw std::invalid_argument("fixed source id out of range");
    } else if (const auto* bern = std::get_if<InitialBernoulli>(&initial)) {
        if (bern->x0.size() != n) throw std::invalid_argument("Bernoulli x0 length mismatch");
        for (double p : bern->x0)
            if (!(p >= 0.0 && p <= 1.0))
                throw std::invalid_argument("Bernoulli probabilities must lie in [0,1]");
    }
}

int resolve_threads(int threads, std::size_t replicas) {
    int nt = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    if (nt < 1) nt = 1;
    if (static_cast<std::size_t>(nt) > replicas) nt = static_cast<int>(replicas);
    return nt;
}

// Runs fn(r) for r in [0, replicas) across nt threads on disjoint ranges.
template <typename Fn>
void parallel_replicas(std::size_t replicas, int nt, const Fn& fn) {
    if (nt <= 1) {
        for (std::size_t r = 0; r < replicas; ++r) fn(r);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nt));
    std::size_t chunk = (replicas + static_cast<std::size_t>(nt) - 1) / static_cast<std::size_t>(nt);
    for (int t = 0; t < nt; ++t) {
        std::size_t lo = static_cast<std::size_t>(t) * chunk;
        std::size_t hi = std::min(replicas, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t r = lo; r < hi; ++r) fn(r);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace

std::vector<double> simulate_si_replica(const Graph& g, double beta,
                                        std::span<const NodeId> sources, double horizon,
                                        Seed seed) {
    if (!(beta >= 0.0)) throw std::invalid_argument("beta must be nonnegative");
    if (!(horizon >= 0.0)) throw std::invalid_argument("horizon must be nonnegative");
    if (sources.empty()) throw std::invalid_argument("source set is empty");
    ReplicaRng rng(seed);
    return simulate_si_core(g, beta, sources, horizon, rng);
}

std::vector<double> simulate_sis_counts(const Graph& g, double beta, double delta,
                                        std::span<const NodeId> initial,
                                        std::span<const double> grid, Seed seed) {
    if (!(beta >= 0.0)) throw std::invalid_argument("beta must be nonnegative");
    if (!(delta >= 0.0)) throw std::invalid_argument("delta must be nonnegative");
    validate_grid_sorted(grid);
    if (initial.empty()) throw std::invalid_argument("initial set is empty");
    ReplicaRng rng(seed);
    return simulate_sis_core(g, beta, delta, initial, grid, rng);
}

EnsembleResult run_ensemble(const Graph& g, double beta, const InitialCondition& initial,
                            std::size_t replicas, std::span<const double> grid,
                            std::uint64_t master_seed, int threads) {
    const std::size_t n = g.node_count();
    if (!(beta >= 0.0)) throw std::invalid_argument("beta must be nonnegative");
    if (replicas == 0) throw std::invalid_argument("need at least one replica");
    validate_grid_sorted(grid);
    validate_initial(initial, n);

    EnsembleResult out;
    out.times.assign(grid.begin(), grid.end());
    out.replicas = replicas;
    out.node_count = n;
    out.infection_times.assign(replicas * n, kInf);

    const double horizon = grid.back();
    parallel_replicas(replicas, resolve_threads(threads, replicas), [&](std::size_t r) {
        ReplicaRng rng(Seed{master_seed, r});
        std::vector<NodeId> sources = draw_initial(initial, n, rng);
        if (sources.empty()) return;  // empty Bernoulli draw: all times stay +inf
        std::vector<double> when = simulate_si_core(g, beta, sources, horizon, rng);
        std::copy(when.begin(), when.end(), out.infection_times.begin() + static_cast<std::ptrdiff_t>(r * n));
    });

    // Aggregate in replica order for scheduling-independent results.
    const std::size_t G = grid.size();
    out.mean_count.assign(G, 0.0);
    out.stderr_count.assign(G, 0.0);
    out.node_probability.assign(G, std::vector<double>(n, 0.0));
    std::vector<double> sum(G, 0.0), sumsq(G, 0.0);
    std::vector<double> hist(G + 1, 0.0);
    for (std::size_t r = 0; r < replicas; ++r) {
        std::fill(hist.begin(), hist.end(), 0.0);
        const double* when = out.infection_times.data() + r * n;
        for (std::size_t i = 0; i < n; ++i) {
            double t = when[i];
            if (t > horizon) continue;
            auto k = static_cast<std::size_t>(
                std::lower_bound(grid.begin(), grid.end(), t) - grid.begin());
            hist[k] += 1.0;
            out.node_probability[k][i] += 1.0;
        }
        double running = 0.0;
        for (std::size_t k = 0; k < G; ++k) {
            running += hist[k];
            sum[k] += running;
            sumsq[k] += running * running;
        }
    }
    const auto R = static_cast<double>(replicas);
    for (std::size_t k = 0; k < G; ++k) {
        out.mean_count[k] = sum[k] / R;
        if (replicas > 1) {
            double var = (sumsq[k] - R * out.mean_count[k] * out.mean_count[k]) / (R - 1.0);
            out.stderr_count[k] = std::sqrt(std::max(var, 0.0) / R);
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (k > 0) out.node_probability[k][i] += out.node_probability[k - 1][i];
        }
    }
    for (std::size_t k = 0; k < G; ++k)
        for (std::size_t i = 0; i < n; ++i) out.node_probability[k][i] /= R;
    return out;
}

Trajectory master_equation_oracle(const Graph& g, double beta, std::span<const double> x0,
                                  std::span<const double> grid, const Accuracy& acc) {
    const std::size_t n = g.node_count();
    if (n > 12) throw std::invalid_argument("master equation oracle is limited to 12 nodes");
    if (x0.size() != n) throw std::invalid_argument("x0 length mismatch");
    for (double p : x0)
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument("probabilities must lie in [0,1]");
    validate_grid_sorted(grid);

    std::vector<std::uint32_t> nbr(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (NodeId j : g.neighbors(static_cast<NodeId>(i)))
            nbr[i] |= 1u << static_cast<unsigned>(j);

    const std::size_t states = std::size_t{1} << n;
    std::vector<double> p0(states);
    for (std::size_t s = 0; s < states; ++s) {
        double p = 1.0;
        for (std::size_t i = 0; i < n; ++i)
            p *= (s >> i & 1u) ? x0[i] : 1.0 - x0[i];
        p0[s] = p;
    }

    // Forward equations over subsets: mass leaves state S toward S + {i} at
    // rate beta * (infected neighbors of i in S) for each susceptible i.
    OdeRhs rhs = [&g, beta, n, states, &nbr](double, const std::vector<double>& p,
                                             std::vector<double>& dpdt) {
        dpdt.assign(states, 0.0);
        for (std::size_t s = 0; s < states; ++s) {
            double ps = p[s];
            if (ps == 0.0) continue;
            for (std::size_t i = 0; i < n; ++i) {
                if (s >> i & 1u) continue;
                auto k = static_cast<unsigned>(std::popcount(nbr[i] & static_cast<std::uint32_t>(s)));
                if (k == 0) continue;
                double flow = beta * k * ps;
                dpdt[s] -= flow;
                dpdt[s | (std::size_t{1} << i)] += flow;
            }
        }
    };

    auto dist = integrate_ode(rhs, p0, grid, acc);
    Trajectory traj;
    traj.kind = StateKind::probability;
    traj.times.assign(grid.begin(), grid.end());
    traj.states.reserve(grid.size());
    for (const auto& p : dist) {
        std::vector<double> marg(n, 0.0);
        for (std::size_t s = 0; s < states; ++s) {
            if (p[s] == 0.0) continue;
            for (std::size_t i = 0; i < n; ++i)
                if (s >> i & 1u) marg[i] += p[s];
        }
        traj.states.push_back(std::move(marg));
    }
    return traj;
}

SisEnsembleResult run_sis_ensemble(const Graph& g, double beta, double delta,
                                   std::size_t initial_infected, std::size_t replicas,
                                   std::span<const double> grid, std::uint64_t master_seed,
                                   int threads) {
    const std::size_t n = g.node_count();
    if (initial_infected == 0 || initial_infected > n)
        throw std::invalid_argument("initial_infected must be in [1, n]");
    if (replicas == 0) throw std::invalid_argument("need at least one replica");
    if (!(beta >= 0.0) || !(delta >= 0.0))
        throw std::invalid_argument("rates must be nonnegative");
    validate_grid_sorted(grid);

    const std::size_t G = grid.size();
    std::vector<double> rows(replicas * G, 0.0);
    parallel_replicas(replicas, resolve_threads(threads, replicas), [&](std::size_t r) {
        ReplicaRng rng(Seed{master_seed, r});
        std::vector<NodeId> pool(n);
        std::iota(pool.begin(), pool.end(), NodeId{0});
        for (std::size_t j = 0; j < initial_infected; ++j)
            std::swap(pool[j], pool[j + rng.uniform_index(n - j)]);
        std::vector<NodeId> initial(pool.begin(),
                                    pool.begin() + static_cast<std::ptrdiff_t>(initial_infected));
        std::vector<double> counts = simulate_sis_core(g, beta, delta, initial, grid, rng);
        std::copy(counts.begin(), counts.end(), rows.begin() + static_cast<std::ptrdiff_t>(r * G));
    });

    SisEnsembleResult out;
    out.times.assign(grid.begin(), grid.end());
    out.replicas = replicas;
    out.mean_count.assign(G, 0.0);
    out.stderr_count.assign(G, 0.0);
    std::vector<double> sum(G, 0.0), sumsq(G, 0.0);
    for (std::size_t r = 0; r < replicas; ++r)
        for (std::size_t k = 0; k < G; ++k) {
            double c = rows[r * G + k];
            sum[k] += c;
            sumsq[k] += c * c;
        }
    const auto R = static_cast<double>(replicas);
    for (std::size_t k = 0; k < G; ++k) {
        out.mean_count[k] = sum[k] / R;
        if (replicas > 1) {
            double var = (sumsq[k] - R * out.mean_count[k] * out.mean_count[k]) / (R - 1.0);
            out.stderr_count[k] = std::sqrt(std::max(var, 0.0) / R);
        }
    }
    return out;
}

}  // namespace epinet
