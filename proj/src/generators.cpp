#include "epinet/generators.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "epinet/errors.hpp"

namespace epinet {

Graph make_path(std::size_t n) {
    if (n < 2) throw std::invalid_argument("path needs at least two nodes");
    std::vector<std::pair<NodeId, NodeId>> edges;
    edges.reserve(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i)
        edges.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(i + 1));
    return Graph::from_edges(n, edges);
}

Graph make_star(std::size_t leaves) {
    if (leaves < 1) throw std::invalid_argument("star needs at least one leaf");
    std::vector<std::pair<NodeId, NodeId>> edges;
    edges.reserve(leaves);
    for (std::size_t i = 1; i <= leaves; ++i) edges.emplace_back(0, static_cast<NodeId>(i));
    return Graph::from_edges(leaves + 1, edges);
}

Graph make_complete(std::size_t n) {
    if (n < 2) throw std::invalid_argument("complete graph needs at least two nodes");
    std::vector<std::pair<NodeId, NodeId>> edges;
    edges.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            edges.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(j));
    return Graph::from_edges(n, edges);
}

Graph make_erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("need at least two nodes");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0,1]");
    std::mt19937_64 gen(seed);
    auto unit = [&gen] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (unit() < p) edges.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(j));
    return Graph::from_edges(n, edges);
}

Graph make_barabasi_albert(std::size_t n, std::size_t m_attach, std::uint64_t seed) {
    if (m_attach < 1) throw std::invalid_argument("m_attach must be positive");
    if (n < m_attach + 2) throw std::invalid_argument("need n > m_attach + 1");
    std::mt19937_64 gen(seed);
    auto unit = [&gen] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };

    std::vector<std::pair<NodeId, NodeId>> edges;
    // Endpoint multiset: sampling a uniform entry is degree-proportional.
    std::vector<NodeId> endpoints;
    for (std::size_t i = 0; i <= m_attach; ++i)
        for (std::size_t j = i + 1; j <= m_attach; ++j) {
            edges.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(j));
            endpoints.push_back(static_cast<NodeId>(i));
            endpoints.push_back(static_cast<NodeId>(j));
        }
    for (std::size_t v = m_attach + 1; v < n; ++v) {
        std::vector<NodeId> targets;
        while (targets.size() < m_attach) {
            auto idx = static_cast<std::size_t>(unit() * static_cast<double>(endpoints.size()));
            if (idx >= endpoints.size()) idx = endpoints.size() - 1;
            NodeId candidate = endpoints[idx];
            if (std::find(targets.begin(), targets.end(), candidate) == targets.end())
                targets.push_back(candidate);
        }
        for (NodeId t : targets) {
            edges.emplace_back(static_cast<NodeId>(v), t);
            endpoints.push_back(static_cast<NodeId>(v));
            endpoints.push_back(t);
        }
    }
    return Graph::from_edges(n, edges);
}

std::vector<std::pair<std::int64_t, std::int64_t>> largest_scc_undirected_edges(
    const std::vector<std::pair<std::int64_t, std::int64_t>>& directed_edges) {
    if (directed_edges.empty()) throw std::invalid_argument("empty edge list");

    std::vector<std::int64_t> ids;
    ids.reserve(2 * directed_edges.size());
    for (auto [a, b] : directed_edges) {
        ids.push_back(a);
        ids.push_back(b);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    auto index_of = [&ids](std::int64_t v) {
        return static_cast<std::size_t>(std::lower_bound(ids.begin(), ids.end(), v) -
                                        ids.begin());
    };
    const std::size_t n = ids.size();

    // Forward and reverse adjacency in CSR form.
    std::vector<std::size_t> fo(n + 1, 0), ro(n + 1, 0);
    for (auto [a, b] : directed_edges) {
        ++fo[index_of(a) + 1];
        ++ro[index_of(b) + 1];
    }
    for (std::size_t i = 0; i < n; ++i) {
        fo[i + 1] += fo[i];
        ro[i + 1] += ro[i];
    }
    std::vector<std::size_t> fadj(directed_edges.size()), radj(directed_edges.size());
    {
        std::vector<std::size_t> fc(fo.begin(), fo.end() - 1), rc(ro.begin(), ro.end() - 1);
        for (auto [a, b] : directed_edges) {
            std::size_t u = index_of(a), v = index_of(b);
            fadj[fc[u]++] = v;
            radj[rc[v]++] = u;
        }
    }

    // Kosaraju with explicit stacks.
    std::vector<char> seen(n, 0);
    std::vector<std::size_t> order;
    order.reserve(n);
    std::vector<std::pair<std::size_t, std::size_t>> stack;
    for (std::size_t s = 0; s < n; ++s) {
        if (seen[s]) continue;
        seen[s] = 1;
        stack.emplace_back(s, fo[s]);
        while (!stack.empty()) {
            auto& [u, cursor] = stack.back();
            if (cursor < fo[u + 1]) {
                std::size_t v = fadj[cursor++];
                if (!seen[v]) {
                    seen[v] = 1;
                    stack.emplace_back(v, fo[v]);
                }
            } else {
                order.push_back(u);
                stack.pop_back();
            }
        }
    }
    std::vector<std::int32_t> comp(n, -1);
    std::int32_t ncomp = 0;
    std::vector<std::size_t> dfs;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        if (comp[*it] >= 0) continue;
        comp[*it] = ncomp;
        dfs.assign(1, *it);
        while (!dfs.empty()) {
            std::size_t u = dfs.back();
            dfs.pop_back();
            for (std::size_t k = ro[u]; k < ro[u + 1]; ++k) {
                std::size_t v = radj[k];
                if (comp[v] < 0) {
                    comp[v] = ncomp;
                    dfs.push_back(v);
                }
            }
        }
        ++ncomp;
    }

    std::vector<std::size_t> size(static_cast<std::size_t>(ncomp), 0);
    std::vector<std::int64_t> min_id(static_cast<std::size_t>(ncomp),
                                     std::numeric_limits<std::int64_t>::max());
    for (std::size_t i = 0; i < n; ++i) {
        auto c = static_cast<std::size_t>(comp[i]);
        ++size[c];
        min_id[c] = std::min(min_id[c], ids[i]);
    }
    std::size_t best = 0;
    for (std::size_t c = 1; c < size.size(); ++c)
        if (size[c] > size[best] || (size[c] == size[best] && min_id[c] < min_id[best]))
            best = c;

    std::vector<std::pair<std::int64_t, std::int64_t>> out;
    for (auto [a, b] : directed_edges) {
        if (a == b) continue;
        std::size_t u = index_of(a), v = index_of(b);
        if (static_cast<std::size_t>(comp[u]) != best ||
            static_cast<std::size_t>(comp[v]) != best)
            continue;
        out.emplace_back(std::min(a, b), std::max(a, b));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    if (out.empty()) throw std::runtime_error("largest SCC has no edges");
    return out;
}

std::pair<std::size_t, std::size_t> prepare_scc_edge_list(const std::string& in_path,
                                                          const std::string& out_path) {
    std::ifstream in(in_path);
    if (!in) throw std::runtime_error("cannot open edge list file: " + in_path);
    std::vector<std::pair<std::int64_t, std::int64_t>> edges;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t pos = line.find_first_not_of(" \t");
        if (pos == std::string::npos || line[pos] == '#') continue;
        std::int64_t a = 0, b = 0;
        const char* begin = line.data() + pos;
        const char* end = line.data() + line.size();
        auto ra = std::from_chars(begin, end, a);
        if (ra.ec != std::errc{}) throw ParseError("expected an integer node id", lineno);
        const char* next = ra.ptr;
        while (next < end && (*next == ' ' || *next == '\t' || *next == ',')) ++next;
        auto rb = std::from_chars(next, end, b);
        if (rb.ec != std::errc{}) throw ParseError("expected two integer node ids", lineno);
        edges.emplace_back(a, b);
    }
    auto undirected = largest_scc_undirected_edges(edges);

    std::unordered_set<std::int64_t> nodes;
    for (auto [a, b] : undirected) {
        nodes.insert(a);
        nodes.insert(b);
    }
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write edge list file: " + out_path);
    out << "# undirected largest-SCC edge list derived from " << in_path << "\n";
    for (auto [a, b] : undirected) out << a << '\t' << b << '\n';
    return {nodes.size(), undirected.size()};
}

}  // namespace epinet
