#pragma once

// Undirected graphs in CSR form with sorted neighbor lists.  Vertices are
// 0-based int32 ids; self-loops are legal (powered graphs carry one per
// vertex) and are stored once in the loop vertex's own list.  Graphs are
// immutable after construction; every mutation-like operation returns a new
// Graph, so sharing across threads needs no locking.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace powerlab {

using Vertex = std::int32_t;
using Edge = std::pair<Vertex, Vertex>;  // normalized u <= v

struct Graph {
    std::int64_t n = 0;
    std::vector<std::int64_t> offsets;  // size n + 1
    std::vector<Vertex> adj;            // sorted within each row
    std::vector<std::uint8_t> labels;   // empty, or size n with values 1/2
    bool has_loops = false;

    std::int64_t degree(std::int64_t v) const { return offsets[v + 1] - offsets[v]; }
    std::span<const Vertex> neighbors(std::int64_t v) const {
        return {adj.data() + offsets[v], static_cast<std::size_t>(degree(v))};
    }
    // Number of undirected edges; a loop counts once.
    std::int64_t edge_count() const;
    bool has_edge(Vertex u, Vertex v) const;
    std::vector<Edge> edges() const;  // normalized, sorted
};

// Validates endpoints, rejects duplicates (naming the offending pair), sorts
// rows.  Edges may arrive in either orientation.
Graph build_graph(std::int64_t n, const std::vector<Edge>& edges);

Graph with_labels(Graph g, std::vector<std::uint8_t> labels);
Graph without_loops(const Graph& g);

// FNV-1a over n and the normalized edge list; used to fingerprint powered
// graphs against their base graph.
std::uint64_t graph_hash(const Graph& g);
std::string graph_hash_hex(const Graph& g);

// BFS distances from source; -1 marks unreachable vertices. max_depth < 0
// means unbounded. Self-loops never shorten paths and are ignored.
std::vector<std::int32_t> bfs_distances(const Graph& g, Vertex source,
                                        std::int32_t max_depth = -1);
// Distance to the nearest of several sources (multi-source BFS).
std::vector<std::int32_t> bfs_distances_multi(const Graph& g,
                                              const std::vector<Vertex>& sources,
                                              std::int32_t max_depth = -1);

std::vector<std::int32_t> component_ids(const Graph& g);
std::int64_t component_count(const Graph& g);

struct InducedSubgraph {
    Graph graph;
    std::vector<Vertex> original_ids;  // new id -> old id, increasing
};
InducedSubgraph largest_component(const Graph& g);

// Eccentricity-based metrics; throw validation_error on disconnected input
// (the error names the component count).
std::int64_t diameter(const Graph& g);
std::int32_t eccentricity(const Graph& g, Vertex v);

// Length of a shortest cycle; nullopt for forests. A self-loop is a 1-cycle.
std::optional<std::int64_t> girth(const Graph& g);

// delta[i] = min over oriented edges (x, y) of |{v : dist(x,v) = i and
// dist(y,v) >= i}|, for 0 <= i <= r; delta[0] is always 1. d_hat is the
// powered-degree proxy ((1/(r+1)) * sum_i sqrt(delta[i]*delta[r-i]))^(2/r).
struct DeltaProfile {
    std::int32_t r = 0;
    std::vector<std::int64_t> delta;
    double d_hat = 0.0;
};
DeltaProfile delta_profile(const Graph& g, std::int32_t r);

// Max over v in subset of |{w : 1 <= dist(v, w) <= i}|; i = 0 returns 1 by
// convention (the base case of the perturbation bound).
std::int64_t max_power_degree(const Graph& g, const std::vector<Vertex>& subset,
                              std::int32_t i);

// Fixed test-bed graphs.
Graph cycle_graph(std::int64_t n);
Graph path_graph(std::int64_t n);
Graph complete_graph(std::int64_t n);
Graph star_graph(std::int64_t leaves);
Graph petersen_graph();
Graph heawood_graph();

}  // namespace powerlab
