#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "epinet/errors.hpp"
#include "epinet/generators.hpp"
#include "epinet/graph.hpp"

using namespace epinet;

TEST_CASE("edge list loading builds a sorted symmetric graph") {
    std::istringstream in("0 1\n1 2\n");
    Graph g = load_edge_list(in);
    CHECK(g.node_count() == 3);
    CHECK(g.edge_count() == 2);
    CHECK(g.degree(0) == 1);
    CHECK(g.degree(1) == 2);
    CHECK(g.degree(2) == 1);
    auto nb = g.neighbors(1);
    REQUIRE(nb.size() == 2);
    CHECK(nb[0] == 0);
    CHECK(nb[1] == 2);
}

TEST_CASE("loader drops self-loops and duplicates, counting them") {
    std::istringstream in("0 1\n1 0\n0 0\n# comment line\n1 2\n");
    LoadReport report;
    Graph g = load_edge_list(in, {}, &report);
    CHECK(g.node_count() == 3);
    CHECK(g.edge_count() == 2);
    CHECK(report.self_loops_dropped == 1);
    CHECK(report.duplicate_edges_dropped == 1);
    CHECK(report.comment_lines == 1);
}

TEST_CASE("loader relabels sparse original ids in ascending order") {
    std::istringstream in("30 10\n10 20\n");
    Graph g = load_edge_list(in);
    REQUIRE(g.node_count() == 3);
    CHECK(g.original_ids() == std::vector<std::int64_t>{10, 20, 30});
    // 10 <-> 30 and 10 <-> 20: node 0 (id 10) has degree 2
    CHECK(g.degree(0) == 2);
    CHECK(g.degree(1) == 1);
    CHECK(g.degree(2) == 1);
}

TEST_CASE("loader accepts tabs, commas, and CRLF") {
    std::istringstream in("0\t1\r\n1,2\r\n");
    Graph g = load_edge_list(in);
    CHECK(g.node_count() == 3);
    CHECK(g.edge_count() == 2);
}

TEST_CASE("malformed lines raise ParseError with the line number") {
    std::istringstream bad_token("0 1\nx 2\n");
    CHECK_THROWS_AS(load_edge_list(bad_token), ParseError);
    std::istringstream in2("0 1\n2\n");
    try {
        load_edge_list(in2);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
    std::istringstream three("0 1 2\n");
    CHECK_THROWS_AS(load_edge_list(three), ParseError);
}

TEST_CASE("empty input is an error") {
    std::istringstream in("# only comments\n\n");
    CHECK_THROWS_AS(load_edge_list(in), std::runtime_error);
}

TEST_CASE("largest component wins by size") {
    // triangle {0,1,2} + edge {3,4}
    Graph g = Graph::from_edges(5, {{0, 1}, {1, 2}, {0, 2}, {3, 4}});
    Graph lcc = largest_connected_component(g);
    CHECK(lcc.node_count() == 3);
    CHECK(lcc.edge_count() == 3);
    CHECK(lcc.original_ids() == std::vector<std::int64_t>{0, 1, 2});
}

TEST_CASE("component ties break toward the smallest original id") {
    // two triangles; the one containing original id 0 must win
    Graph g = Graph::from_edges(6, {{3, 4}, {4, 5}, {3, 5}, {0, 1}, {1, 2}, {0, 2}});
    Graph lcc = largest_connected_component(g);
    CHECK(lcc.original_ids() == std::vector<std::int64_t>{0, 1, 2});

    // same graph but relabeled so the *other* triangle holds the smallest id
    std::istringstream in("13 14\n14 15\n13 15\n20 21\n21 22\n20 22\n");
    Graph h = load_edge_list(in);
    Graph hl = largest_connected_component(h);
    CHECK(hl.original_ids() == std::vector<std::int64_t>{13, 14, 15});
}

TEST_CASE("component extraction is idempotent and composes original ids") {
    std::mt19937_64 gen(7);
    for (int trial = 0; trial < 10; ++trial) {
        Graph g = make_erdos_renyi(40, 0.04, gen());
        Graph l1 = largest_connected_component(g);
        Graph l2 = largest_connected_component(l1);
        CHECK(l1.node_count() == l2.node_count());
        CHECK(l1.edge_count() == l2.edge_count());
        CHECK(l1.original_ids() == l2.original_ids());
        for (std::size_t i = 0; i < l1.node_count(); ++i)
            CHECK(l1.degree(static_cast<NodeId>(i)) == l2.degree(static_cast<NodeId>(i)));
    }
}

TEST_CASE("neighbor lists stay symmetric and sorted on random graphs") {
    std::mt19937_64 gen(11);
    for (int trial = 0; trial < 5; ++trial) {
        Graph g = make_erdos_renyi(60, 0.08, gen());
        for (std::size_t i = 0; i < g.node_count(); ++i) {
            auto nb = g.neighbors(static_cast<NodeId>(i));
            for (std::size_t k = 0; k < nb.size(); ++k) {
                if (k > 0) CHECK(nb[k] > nb[k - 1]);
                auto back = g.neighbors(nb[k]);
                CHECK(std::find(back.begin(), back.end(), static_cast<NodeId>(i)) != back.end());
            }
        }
    }
}

TEST_CASE("matvec matches hand-computed values") {
    Graph path2 = make_path(2);
    std::vector<double> v{1.0, 0.0};
    auto w = matvec(path2, v);
    CHECK(w == std::vector<double>{0.0, 1.0});

    Graph tri = make_complete(3);
    std::vector<double> ones{1.0, 1.0, 1.0};
    CHECK(matvec(tri, ones) == std::vector<double>{2.0, 2.0, 2.0});

    // path 0-1-2 with scale masking node 0
    Graph path3 = make_path(3);
    std::vector<double> v3{1.0, 1.0, 1.0};
    std::vector<double> s3{0.0, 1.0, 1.0};
    CHECK(matvec(path3, v3, s3) == std::vector<double>{1.0, 1.0, 1.0});
}

TEST_CASE("matvec of all-ones returns the degree vector") {
    std::mt19937_64 gen(23);
    for (int trial = 0; trial < 5; ++trial) {
        Graph g = make_erdos_renyi(50, 0.1, gen());
        std::vector<double> ones(g.node_count(), 1.0);
        auto w = matvec(g, ones);
        auto d = degree_summary(g);
        CHECK(w == d.degrees);
    }
}

TEST_CASE("matvec validates dimensions") {
    Graph g = make_path(3);
    std::vector<double> bad{1.0, 2.0};
    CHECK_THROWS_AS(matvec(g, bad), std::invalid_argument);
    std::vector<double> v{1.0, 2.0, 3.0};
    CHECK_THROWS_AS(matvec(g, v, bad), std::invalid_argument);
}

TEST_CASE("degree summary on a star") {
    Graph g = make_star(4);
    auto s = degree_summary(g);
    CHECK(s.degrees == std::vector<double>{4.0, 1.0, 1.0, 1.0, 1.0});
    CHECK(s.mean_degree == doctest::Approx(1.6));
    CHECK(s.max_degree == 4);
}

TEST_CASE("from_edges rejects bad input") {
    CHECK_THROWS_AS(Graph::from_edges(0, {}), std::invalid_argument);
    CHECK_THROWS_AS(Graph::from_edges(2, {{0, 2}}), std::invalid_argument);
    CHECK_THROWS_AS(Graph::from_edges(2, {{-1, 0}}), std::invalid_argument);
}
