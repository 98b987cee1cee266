#include "epinet/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "epinet/errors.hpp"

namespace epinet {

Graph Graph::from_edges(std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& edges) {
    if (n == 0) throw std::invalid_argument("graph must have at least one node");
    if (n > static_cast<std::size_t>(std::numeric_limits<NodeId>::max()))
        throw std::invalid_argument("node count exceeds NodeId range");

    std::vector<std::pair<NodeId, NodeId>> canon;
    canon.reserve(edges.size());
    for (auto [a, b] : edges) {
        if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= n || static_cast<std::size_t>(b) >= n)
            throw std::invalid_argument("edge endpoint out of range");
        if (a == b) continue;
        canon.emplace_back(std::min(a, b), std::max(a, b));
    }
    std::sort(canon.begin(), canon.end());
    canon.erase(std::unique(canon.begin(), canon.end()), canon.end());

    Graph g;
    g.n_ = n;
    g.edge_count_ = canon.size();
    std::vector<std::size_t> deg(n, 0);
    for (auto [a, b] : canon) {
        ++deg[static_cast<std::size_t>(a)];
        ++deg[static_cast<std::size_t>(b)];
    }
    g.offsets_.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] = g.offsets_[i] + deg[i];
    g.adj_.resize(2 * canon.size());
    std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    for (auto [a, b] : canon) {
        g.adj_[cursor[static_cast<std::size_t>(a)]++] = b;
        g.adj_[cursor[static_cast<std::size_t>(b)]++] = a;
    }
    // Canonical pairs are sorted, so each neighbor list is already ascending.
    g.original_ids_.resize(n);
    std::iota(g.original_ids_.begin(), g.original_ids_.end(), std::int64_t{0});
    return g;
}

void Graph::set_original_ids(std::vector<std::int64_t> ids) {
    if (ids.size() != n_) throw std::invalid_argument("original id list has wrong length");
    original_ids_ = std::move(ids);
}

namespace {

bool is_sep(char c, char delimiter) {
    if (delimiter != '\0') return c == delimiter || c == ' ' || c == '\t';
    return c == ' ' || c == '\t' || c == ',';
}

}  // namespace

Graph load_edge_list(std::istream& in, const LoadOptions& opts, LoadReport* report) {
    LoadReport local;
    std::vector<std::pair<std::int64_t, std::int64_t>> raw;
    std::string line;
    std::size_t lineno = 0;

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t pos = 0;
        while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
        if (pos == line.size()) continue;  // blank
        if (line[pos] == opts.comment) {
            ++local.comment_lines;
            continue;
        }

        std::int64_t ids[2];
        int found = 0;
        while (pos < line.size()) {
            while (pos < line.size() && is_sep(line[pos], opts.delimiter)) ++pos;
            if (pos == line.size()) break;
            std::size_t start = pos;
            while (pos < line.size() && !is_sep(line[pos], opts.delimiter)) ++pos;
            if (found >= 2) throw ParseError("expected exactly two fields", lineno);
            std::int64_t value = 0;
            auto [ptr, ec] = std::from_chars(line.data() + start, line.data() + pos, value);
            if (ec != std::errc{} || ptr != line.data() + pos)
                throw ParseError("field '" + line.substr(start, pos - start) +
                                     "' is not an integer node id",
                                 lineno);
            if (value < 0) throw ParseError("negative node id", lineno);
            ids[found++] = value;
        }
        if (found != 2) throw ParseError("expected exactly two fields", lineno);
        raw.emplace_back(ids[0], ids[1]);
    }

    if (raw.empty()) throw std::runtime_error("edge list contains no edges");

    std::vector<std::int64_t> originals;
    originals.reserve(2 * raw.size());
    for (auto [a, b] : raw) {
        originals.push_back(a);
        originals.push_back(b);
    }
    std::sort(originals.begin(), originals.end());
    originals.erase(std::unique(originals.begin(), originals.end()), originals.end());
    if (originals.size() > static_cast<std::size_t>(std::numeric_limits<NodeId>::max()))
        throw std::runtime_error("too many distinct node ids");

    auto to_internal = [&originals](std::int64_t id) {
        return static_cast<NodeId>(std::lower_bound(originals.begin(), originals.end(), id) -
                                   originals.begin());
    };

    std::vector<std::pair<NodeId, NodeId>> edges;
    edges.reserve(raw.size());
    for (auto [a, b] : raw) {
        if (a == b) {
            ++local.self_loops_dropped;
            continue;
        }
        NodeId u = to_internal(a), v = to_internal(b);
        edges.emplace_back(std::min(u, v), std::max(u, v));
    }
    std::sort(edges.begin(), edges.end());
    std::size_t before = edges.size();
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    local.duplicate_edges_dropped = before - edges.size();
    if (edges.empty()) throw std::runtime_error("edge list contains no edges after cleanup");

    Graph g = Graph::from_edges(originals.size(), edges);
    g.set_original_ids(std::move(originals));
    if (report) *report = local;
    return g;
}

Graph load_edge_list_file(const std::string& path, const LoadOptions& opts, LoadReport* report) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open edge list file: " + path);
    return load_edge_list(in, opts, report);
}

Graph largest_connected_component(const Graph& g) {
    const std::size_t n = g.node_count();
    std::vector<NodeId> comp(n, -1);
    NodeId ncomp = 0;
    std::vector<NodeId> queue;
    for (std::size_t s = 0; s < n; ++s) {
        if (comp[s] >= 0) continue;
        comp[s] = ncomp;
        queue.assign(1, static_cast<NodeId>(s));
        while (!queue.empty()) {
            NodeId u = queue.back();
            queue.pop_back();
            for (NodeId v : g.neighbors(u)) {
                if (comp[static_cast<std::size_t>(v)] < 0) {
                    comp[static_cast<std::size_t>(v)] = ncomp;
                    queue.push_back(v);
                }
            }
        }
        ++ncomp;
    }

    std::vector<std::size_t> size(static_cast<std::size_t>(ncomp), 0);
    std::vector<std::int64_t> min_original(static_cast<std::size_t>(ncomp),
                                           std::numeric_limits<std::int64_t>::max());
    for (std::size_t i = 0; i < n; ++i) {
        auto c = static_cast<std::size_t>(comp[i]);
        ++size[c];
        min_original[c] = std::min(min_original[c], g.original_ids()[i]);
    }
    std::size_t best = 0;
    for (std::size_t c = 1; c < size.size(); ++c) {
        if (size[c] > size[best] ||
            (size[c] == size[best] && min_original[c] < min_original[best]))
            best = c;
    }

    // Kept nodes in ascending internal id keep their relative order.
    std::vector<NodeId> remap(n, -1);
    std::vector<std::int64_t> kept_originals;
    kept_originals.reserve(size[best]);
    NodeId next = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (static_cast<std::size_t>(comp[i]) == best) {
            remap[i] = next++;
            kept_originals.push_back(g.original_ids()[i]);
        }
    }
    std::vector<std::pair<NodeId, NodeId>> edges;
    edges.reserve(g.edge_count());
    for (std::size_t i = 0; i < n; ++i) {
        if (remap[i] < 0) continue;
        for (NodeId j : g.neighbors(static_cast<NodeId>(i))) {
            if (static_cast<std::size_t>(j) > i) edges.emplace_back(remap[i], remap[static_cast<std::size_t>(j)]);
        }
    }
    Graph out = Graph::from_edges(size[best], edges);
    out.set_original_ids(std::move(kept_originals));
    return out;
}

std::vector<double> matvec(const Graph& g, std::span<const double> v,
                           std::span<const double> scale) {
    const std::size_t n = g.node_count();
    if (v.size() != n) throw std::invalid_argument("matvec: vector length mismatch");
    if (!scale.empty() && scale.size() != n)
        throw std::invalid_argument("matvec: scale length mismatch");
    std::vector<double> w(n, 0.0);
    if (scale.empty()) {
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (NodeId j : g.neighbors(static_cast<NodeId>(i))) acc += v[static_cast<std::size_t>(j)];
            w[i] = acc;
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (NodeId j : g.neighbors(static_cast<NodeId>(i)))
                acc += scale[static_cast<std::size_t>(j)] * v[static_cast<std::size_t>(j)];
            w[i] = acc;
        }
    }
    return w;
}

DegreeSummary degree_summary(const Graph& g) {
    DegreeSummary s;
    const std::size_t n = g.node_count();
    s.degrees.resize(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t d = g.degree(static_cast<NodeId>(i));
        s.degrees[i] = static_cast<double>(d);
        total += static_cast<double>(d);
        s.max_degree = std::max(s.max_degree, d);
    }
    s.mean_degree = n ? total / static_cast<double>(n) : 0.0;
    return s;
}

}  // namespace epinet
