#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "epinet/graph.hpp"

namespace epinet {

// Nodes 0..n-1 in a line.
Graph make_path(std::size_t n);
// Hub 0 with the given number of leaves (n = leaves + 1).
Graph make_star(std::size_t leaves);
Graph make_complete(std::size_t n);

// G(n, p): each unordered pair is an edge independently with probability p.
// Deterministic for a fixed seed. Isolated nodes are kept; extract the
// largest component separately when connectivity matters.
Graph make_erdos_renyi(std::size_t n, double p, std::uint64_t seed);

// Preferential attachment: starts from a complete graph on m_attach + 1
// nodes; every later node attaches to m_attach distinct existing nodes chosen
// proportionally to degree. Deterministic for a fixed seed.
Graph make_barabasi_albert(std::size_t n, std::size_t m_attach, std::uint64_t seed);

// Largest strongly connected component of a *directed* edge list, returned as
// an undirected edge list over the original ids (ties on size broken toward
// the smallest contained id). This is the standard preprocessing step for
// directed network snapshots before the undirected loader takes over.
std::vector<std::pair<std::int64_t, std::int64_t>> largest_scc_undirected_edges(
    const std::vector<std::pair<std::int64_t, std::int64_t>>& directed_edges);

// Reads a directed edge list file ('#' comments allowed), extracts the
// largest SCC and writes the undirected edge list to out_path. Returns
// {nodes, undirected edges} of the result.
std::pair<std::size_t, std::size_t> prepare_scc_edge_list(const std::string& in_path,
                                                          const std::string& out_path);

}  // namespace epinet
