#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace epinet {

using NodeId = std::int32_t;

// Undirected simple graph on nodes 0..n-1 with sorted compressed neighbor
// lists. Immutable after construction, safe to share across threads.
//
// Every graph keeps a per-node list of "original" ids so that nodes remain
// traceable through file loading, component extraction and immunization.
// For generated graphs the original id of node i is simply i.
class Graph {
public:
    Graph() = default;

    // Builds from an edge list over ids 0..n-1. Self-loops and duplicate
    // edges (in either orientation) are dropped silently; use load_edge_list
    // when those counts matter.
    static Graph from_edges(std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& edges);

    std::size_t node_count() const { return n_; }
    std::size_t edge_count() const { return edge_count_; }

    // Neighbors of i in ascending order.
    std::span<const NodeId> neighbors(NodeId i) const {
        return {adj_.data() + offsets_[static_cast<std::size_t>(i)],
                adj_.data() + offsets_[static_cast<std::size_t>(i) + 1]};
    }

    std::size_t degree(NodeId i) const {
        return offsets_[static_cast<std::size_t>(i) + 1] - offsets_[static_cast<std::size_t>(i)];
    }

    const std::vector<std::int64_t>& original_ids() const { return original_ids_; }
    void set_original_ids(std::vector<std::int64_t> ids);

private:
    std::size_t n_ = 0;
    std::size_t edge_count_ = 0;
    std::vector<std::size_t> offsets_{0};
    std::vector<NodeId> adj_;
    std::vector<std::int64_t> original_ids_;
};

struct LoadOptions {
    char comment = '#';       // lines whose first non-space char is this are skipped
    char delimiter = '\0';    // '\0' means any run of spaces/tabs/commas
};

struct LoadReport {
    std::size_t self_loops_dropped = 0;
    std::size_t duplicate_edges_dropped = 0;
    std::size_t comment_lines = 0;
};

// Reads a whitespace- or delimiter-separated edge list of integer node ids.
// Ids may be arbitrary non-negative 64-bit integers; they are relabeled to a
// contiguous 0..n-1 range in ascending order of original id. The input is
// treated as undirected: "a b" and "b a" describe the same edge. Throws
// ParseError (with line number) on malformed lines and std::runtime_error if
// no edges survive.
Graph load_edge_list(std::istream& in, const LoadOptions& opts = {}, LoadReport* report = nullptr);
Graph load_edge_list_file(const std::string& path, const LoadOptions& opts = {},
                          LoadReport* report = nullptr);

// Induced subgraph on the largest connected component. Ties on size are
// broken toward the component containing the smallest original id. The
// result's original_ids compose with the input's. Idempotent.
Graph largest_connected_component(const Graph& g);

// w_i = sum over neighbors j of scale_j * v_j. An empty scale means all ones.
// Accumulation follows the stored ascending neighbor order, so results are
// bitwise reproducible for a given graph.
std::vector<double> matvec(const Graph& g, std::span<const double> v,
                           std::span<const double> scale = {});

struct DegreeSummary {
    std::vector<double> degrees;
    double mean_degree = 0.0;
    std::size_t max_degree = 0;
};

DegreeSummary degree_summary(const Graph& g);

}  // namespace epinet
