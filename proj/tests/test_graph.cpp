#include <algorithm>
#include <set>
#include <vector>

#include "doctest.h"
#include "powerlab/errors.hpp"
#include "powerlab/graph.hpp"
#include "powerlab/rng.hpp"

using namespace powerlab;

TEST_CASE("build_graph normalizes, sorts, and validates") {
    Graph g = build_graph(4, {{2, 0}, {0, 1}, {3, 3}, {1, 2}});
    CHECK(g.n == 4);
    CHECK(g.edge_count() == 4);
    CHECK(g.has_loops);
    CHECK(g.has_edge(0, 2));
    CHECK(g.has_edge(2, 0));
    CHECK(g.has_edge(3, 3));
    CHECK_FALSE(g.has_edge(0, 3));
    auto row0 = g.neighbors(0);
    CHECK(std::is_sorted(row0.begin(), row0.end()));
    CHECK(g.degree(3) == 1);  // loop stored once

    CHECK_THROWS_AS(build_graph(3, {{0, 1}, {1, 0}}), validation_error);
    CHECK_THROWS_AS(build_graph(3, {{0, 3}}), validation_error);
    CHECK_THROWS_AS(build_graph(-1, {}), validation_error);
}

TEST_CASE("edges round-trips through build_graph") {
    RngStream rng(17);
    std::set<Edge> picked;
    while (picked.size() < 30) {
        Vertex u = static_cast<Vertex>(rng.next_below(15));
        Vertex v = static_cast<Vertex>(rng.next_below(15));
        picked.insert({std::min(u, v), std::max(u, v)});
    }
    std::vector<Edge> edges(picked.begin(), picked.end());
    Graph g = build_graph(15, edges);
    CHECK(g.edges() == edges);
    CHECK(build_graph(15, g.edges()).adj == g.adj);
}

TEST_CASE("graph_hash distinguishes graphs and ignores edge order") {
    Graph a = build_graph(5, {{0, 1}, {1, 2}, {2, 3}});
    Graph b = build_graph(5, {{2, 3}, {1, 2}, {0, 1}});
    Graph c = build_graph(5, {{0, 1}, {1, 2}, {2, 4}});
    CHECK(graph_hash(a) == graph_hash(b));
    CHECK(graph_hash(a) != graph_hash(c));
    CHECK(graph_hash_hex(a).size() == 16);
}

TEST_CASE("bfs distances on a path with a pendant loop") {
    Graph g = build_graph(5, {{0, 1}, {1, 2}, {2, 3}, {0, 0}});
    auto d = bfs_distances(g, 0);
    CHECK(d == std::vector<std::int32_t>{0, 1, 2, 3, -1});
    auto capped = bfs_distances(g, 0, 2);
    CHECK(capped == std::vector<std::int32_t>{0, 1, 2, -1, -1});
    auto multi = bfs_distances_multi(g, {0, 3});
    CHECK(multi == std::vector<std::int32_t>{0, 1, 1, 0, -1});
}

TEST_CASE("components and largest_component") {
    Graph g = build_graph(7, {{0, 1}, {1, 2}, {3, 4}, {5, 5}});
    CHECK(component_count(g) == 4);
    auto ids = component_ids(g);
    CHECK(ids[0] == ids[1]);
    CHECK(ids[1] == ids[2]);
    CHECK(ids[3] == ids[4]);
    CHECK(ids[0] != ids[3]);
    InducedSubgraph big = largest_component(g);
    CHECK(big.graph.n == 3);
    CHECK(big.original_ids == std::vector<Vertex>{0, 1, 2});
    CHECK(big.graph.has_edge(0, 1));
    CHECK(big.graph.has_edge(1, 2));
    CHECK_FALSE(big.graph.has_edge(0, 2));
}

TEST_CASE("diameter and eccentricity agree on the Petersen graph") {
    Graph p = petersen_graph();
    CHECK(p.n == 10);
    CHECK(p.edge_count() == 15);
    for (Vertex v = 0; v < 10; ++v) CHECK(p.degree(v) == 3);
    CHECK(diameter(p) == 2);
    for (Vertex v = 0; v < 10; ++v) CHECK(eccentricity(p, v) == 2);
    CHECK(girth(p) == 5);
}

TEST_CASE("heawood graph invariants") {
    Graph h = heawood_graph();
    CHECK(h.n == 14);
    CHECK(h.edge_count() == 21);
    for (Vertex v = 0; v < 14; ++v) CHECK(h.degree(v) == 3);
    CHECK(girth(h) == 6);
    CHECK(diameter(h) == 3);
}

TEST_CASE("girth handles forests, loops, and parallel-free graphs") {
    CHECK_FALSE(girth(path_graph(6)).has_value());
    CHECK(girth(cycle_graph(9)) == 9);
    CHECK(girth(complete_graph(4)) == 3);
    CHECK(girth(build_graph(3, {{0, 1}, {1, 1}})) == 1);
    CHECK_FALSE(girth(star_graph(5)).has_value());
}

TEST_CASE("diameter rejects disconnected graphs") {
    Graph g = build_graph(4, {{0, 1}, {2, 3}});
    CHECK_THROWS_AS(diameter(g), validation_error);
}

TEST_CASE("delta profile of a d-regular high-girth graph is (d-1)-geometric") {
    // Heawood: 3-regular, girth 6, so balls of radius <= 2 are trees.
    Graph h = heawood_graph();
    DeltaProfile p = delta_profile(h, 2);
    REQUIRE(p.delta.size() == 3);
    CHECK(p.delta[0] == 1);
    // dist(x,.) = 1 and dist(y,.) >= 1: the d-1 = 2 neighbors of x besides y.
    CHECK(p.delta[1] == 2);
    // dist(x,.) = 2 and dist(y,.) >= 2: in a tree ball, (d-1)^2 = 4.
    CHECK(p.delta[2] == 4);
    CHECK(p.r == 2);
}

TEST_CASE("delta profile on the cycle") {
    DeltaProfile p = delta_profile(cycle_graph(12), 3);
    REQUIRE(p.delta.size() == 4);
    CHECK(p.delta[0] == 1);
    CHECK(p.delta[1] == 1);
    CHECK(p.delta[2] == 1);
    CHECK(p.delta[3] == 1);
}

TEST_CASE("max_power_degree counts punctured balls") {
    Graph c = cycle_graph(10);
    CHECK(max_power_degree(c, {0}, 0) == 1);
    CHECK(max_power_degree(c, {0}, 1) == 2);
    CHECK(max_power_degree(c, {0}, 2) == 4);
    Graph k = complete_graph(6);
    CHECK(max_power_degree(k, {0, 3}, 1) == 5);
    CHECK(max_power_degree(k, {0, 3}, 2) == 5);
}

TEST_CASE("with_labels validates size and values") {
    Graph g = build_graph(3, {{0, 1}});
    Graph l = with_labels(std::move(g), {1, 2, 1});
    CHECK(l.labels == std::vector<std::uint8_t>{1, 2, 1});
    Graph g2 = build_graph(3, {{0, 1}});
    CHECK_THROWS_AS(with_labels(std::move(g2), {1, 2}), validation_error);
}

TEST_CASE("without_loops strips loops only") {
    Graph g = build_graph(4, {{0, 0}, {0, 1}, {2, 2}, {2, 3}});
    Graph s = without_loops(g);
    CHECK(s.edge_count() == 2);
    CHECK_FALSE(s.has_loops);
    CHECK(s.has_edge(0, 1));
    CHECK(s.has_edge(2, 3));
}
