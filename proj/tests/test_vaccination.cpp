#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "epinet/generators.hpp"
#include "epinet/linalg.hpp"
#include "epinet/vaccination.hpp"

using namespace epinet;

namespace {

std::vector<double> make_grid(double T, std::size_t points) {
    std::vector<double> grid(points);
    for (std::size_t k = 0; k < points; ++k)
        grid[k] = T * static_cast<double>(k) / static_cast<double>(points - 1);
    return grid;
}

}  // namespace

TEST_CASE("preventive scores put the hub of a star first") {
    Graph g = make_star(6);
    auto scores = preventive_scores(g, 0.2, 1.0, 3.0);
    REQUIRE(scores.size() == 7);
    for (std::size_t i = 1; i < 7; ++i) CHECK(scores[0] > scores[i]);
    // leaves are exchangeable
    for (std::size_t i = 2; i < 7; ++i)
        CHECK(scores[i] == doctest::Approx(scores[1]).epsilon(1e-12));
    CHECK_THROWS_AS(preventive_scores(g, 0.2, 0.0, 3.0), std::invalid_argument);
    CHECK_THROWS_AS(preventive_scores(g, 0.2, 7.0, 3.0), std::invalid_argument);
}

TEST_CASE("preventive ranking is invariant to the dropped affine terms") {
    // the full bound at the uniform state is a positive affine function of the
    // score vector, so rankings must coincide
    Graph g = largest_connected_component(make_erdos_renyi(30, 0.15, 64));
    const std::size_t n = g.node_count();
    double beta = 0.1, c = 3.0, tstar = 4.0;
    auto scores = preventive_scores(g, beta, c, tstar);

    double frac = c / static_cast<double>(n);
    StateVector x0{std::vector<double>(n, frac), StateKind::probability};
    auto yfin = transformation_yhat_finite(g, beta, x0, tstar);
    std::vector<std::size_t> by_score(n), by_bound(n);
    for (std::size_t i = 0; i < n; ++i) by_score[i] = by_bound[i] = i;
    std::sort(by_score.begin(), by_score.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    std::sort(by_bound.begin(), by_bound.end(),
              [&](std::size_t a, std::size_t b) { return yfin[a] > yfin[b]; });
    CHECK(by_score == by_bound);
}

TEST_CASE("reactive scores rank proximity to the outbreak") {
    Graph g = make_path(4);
    StateVector x0{{1.0, 0.0, 0.0, 0.0}, StateKind::probability};
    auto scores = reactive_scores(g, 0.3, x0, 2.0);
    CHECK(scores[0] == -std::numeric_limits<double>::infinity());
    CHECK(scores[1] > scores[2]);
    CHECK(scores[2] > scores[3]);
    CHECK(scores[3] > 0.0);
}

TEST_CASE("two sources on a path produce a symmetric reactive ranking") {
    Graph g = make_path(5);
    StateVector x0{{1.0, 0.0, 0.0, 0.0, 1.0}, StateKind::probability};
    auto scores = reactive_scores(g, 0.3, x0, 2.0);
    CHECK(scores[1] == doctest::Approx(scores[3]).epsilon(1e-12));
    CHECK(scores[1] > scores[2]);
    CHECK(std::isinf(scores[0]));
    CHECK(std::isinf(scores[4]));
}

TEST_CASE("centrality and degree scores are what they say") {
    Graph g = make_star(4);
    auto evc = evc_scores(g);
    for (std::size_t i = 1; i < 5; ++i) CHECK(evc[0] > evc[i]);
    auto deg = degree_scores(g);
    CHECK(deg[0] == 4.0);
    for (std::size_t i = 1; i < 5; ++i) CHECK(deg[i] == 1.0);
}

TEST_CASE("selection takes the top scores with deterministic tie-breaking") {
    std::vector<double> scores{0.5, 0.9, 0.5, 0.1, 0.9};
    auto sel = select_top_k(PolicyKind::degree, 0.0, scores, 3);
    CHECK(sel.selected == std::vector<NodeId>{1, 4, 0});
    CHECK(sel.budget == 3);
    CHECK(sel.scores == scores);

    auto sel2 = select_top_k(PolicyKind::degree, 0.0, scores, 3,
                             std::vector<NodeId>{1, 0});
    CHECK(sel2.selected == std::vector<NodeId>{4, 2, 3});

    // -inf entries are never selectable
    std::vector<double> with_inf{0.5, -std::numeric_limits<double>::infinity(), 0.2};
    auto sel3 = select_top_k(PolicyKind::reactive, 1.0, with_inf, 2);
    CHECK(sel3.selected == std::vector<NodeId>{0, 2});
    CHECK_THROWS_AS(select_top_k(PolicyKind::reactive, 1.0, with_inf, 3),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        select_top_k(PolicyKind::degree, 0.0, scores, 4, std::vector<NodeId>{0, 1}),
        std::invalid_argument);
}

TEST_CASE("immunization removes nodes and the edges they carried") {
    Graph g = make_star(4);
    PolicySelection sel;
    sel.selected = {0};
    Graph r = immunize(g, sel);
    CHECK(r.node_count() == 4);
    CHECK(r.edge_count() == 0);
    // removing one path interior splits the line
    Graph p = make_path(5);
    PolicySelection mid;
    mid.selected = {2};
    Graph q = immunize(p, mid);
    CHECK(q.node_count() == 4);
    CHECK(q.edge_count() == 2);
    CHECK(q.original_ids() == std::vector<std::int64_t>{0, 1, 3, 4});

    PolicySelection all;
    all.selected = {0, 1, 2, 3, 4};
    CHECK_THROWS_AS(immunize(p, all), std::invalid_argument);
}

TEST_CASE("original ids survive two rounds of relabeling") {
    // load -> lcc -> immunize keeps pointing back at input labels
    Graph g = make_path(6);
    std::vector<std::int64_t> ids{10, 20, 30, 40, 50, 60};
    g.set_original_ids(ids);
    PolicySelection sel;
    sel.selected = {1, 3};
    Graph r = immunize(g, sel);
    CHECK(r.original_ids() == std::vector<std::int64_t>{10, 30, 50, 60});
}

TEST_CASE("evaluating the empty policy reproduces a plain ensemble bitwise") {
    Graph g = largest_connected_component(make_erdos_renyi(20, 0.2, 14));
    auto grid = make_grid(8.0, 9);
    PolicySelection none;
    none.policy = PolicyKind::degree;
    none.budget = 0;
    std::vector<PolicySelection> sels{none};
    auto evals = evaluate_policy(g, 0.1, sels, PreventiveScenario{}, 300, grid, 2025, 2);
    REQUIRE(evals.size() == 1);
    auto plain = run_ensemble(g, 0.1, InitialUniformSingleSource{}, 300, grid, 2025, 2);
    CHECK(evals[0].ensemble.infection_times == plain.infection_times);
    CHECK(evals[0].ensemble.mean_count == plain.mean_count);
    CHECK(evals[0].residual.node_count() == g.node_count());
}

TEST_CASE("cutting all leaves off a star pins the outbreak at the hub") {
    Graph g = make_star(3);
    PolicySelection leaves;
    leaves.policy = PolicyKind::reactive;
    leaves.selected = {1, 2, 3};
    std::vector<PolicySelection> sels{leaves};
    auto grid = make_grid(5.0, 6);
    auto evals =
        evaluate_policy(g, 0.5, sels, ReactiveScenario{{0}}, 100, grid, 3, 1);
    REQUIRE(evals.size() == 1);
    CHECK(evals[0].residual.node_count() == 1);
    for (double m : evals[0].ensemble.mean_count) CHECK(m == 1.0);
}

TEST_CASE("immunizing a reactive source is rejected") {
    Graph g = make_path(3);
    PolicySelection sel;
    sel.policy = PolicyKind::reactive;
    sel.selected = {0};
    std::vector<PolicySelection> sels{sel};
    auto grid = make_grid(2.0, 3);
    CHECK_THROWS_AS(
        evaluate_policy(g, 0.1, sels, ReactiveScenario{{0}}, 10, grid, 1, 1),
        std::invalid_argument);
}

TEST_CASE("common random numbers reuse the same outbreak across policies") {
    Graph g = largest_connected_component(make_erdos_renyi(30, 0.15, 8));
    const std::size_t n = g.node_count();
    auto deg = degree_scores(g);
    auto evc = evc_scores(g);
    std::vector<PolicySelection> sels{
        select_top_k(PolicyKind::degree, 0.0, deg, 3),
        select_top_k(PolicyKind::evc, 0.0, evc, 3),
    };
    auto grid = make_grid(10.0, 5);
    auto evals = evaluate_policy(g, 0.1, sels, PreventiveScenario{}, 200, grid, 99, 2);
    REQUIRE(evals.size() == 2);
    // same master seed: if both policies kept the same residual graph the
    // ensembles would coincide; with different removals they still share
    // source draws, which shows up as strong positive correlation of counts
    const auto& a = evals[0].ensemble;
    const auto& b = evals[1].ensemble;
    double sa = 0, sb = 0, sab = 0, saa = 0, sbb = 0;
    std::size_t k = grid.size() - 1;
    for (std::size_t r = 0; r < 200; ++r) {
        double ca = 0, cb = 0;
        for (std::size_t i = 0; i < a.node_count; ++i)
            if (a.infection_times[r * a.node_count + i] <= grid[k]) ++ca;
        for (std::size_t i = 0; i < b.node_count; ++i)
            if (b.infection_times[r * b.node_count + i] <= grid[k]) ++cb;
        sa += ca; sb += cb; sab += ca * cb; saa += ca * ca; sbb += cb * cb;
    }
    double R = 200.0;
    double cov = sab / R - (sa / R) * (sb / R);
    double corr = cov / std::sqrt((saa / R - sa * sa / (R * R)) *
                                  (sbb / R - sb * sb / (R * R)));
    CHECK(corr > 0.2);
    CHECK(n > 3);
}
