#include "powerlab/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "powerlab/errors.hpp"

namespace powerlab {

std::int64_t Graph::edge_count() const {
    std::int64_t directed = static_cast<std::int64_t>(adj.size());
    if (!has_loops) return directed / 2;
    std::int64_t loops = 0;
    for (std::int64_t v = 0; v < n; ++v) {
        for (Vertex w : neighbors(v))
            if (w == v) ++loops;
    }
    return (directed - loops) / 2 + loops;
}

bool Graph::has_edge(Vertex u, Vertex v) const {
    if (u < 0 || v < 0 || u >= n || v >= n) return false;
    auto row = neighbors(u);
    return std::binary_search(row.begin(), row.end(), v);
}

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    out.reserve(static_cast<std::size_t>(edge_count()));
    for (Vertex v = 0; v < n; ++v)
        for (Vertex w : neighbors(v))
            if (w >= v) out.emplace_back(v, w);
    return out;
}

Graph build_graph(std::int64_t n, const std::vector<Edge>& edges) {
    if (n < 0) throw validation_error("vertex count must be non-negative");
    Graph g;
    g.n = n;
    std::vector<Edge> norm;
    norm.reserve(edges.size());
    for (auto [u, v] : edges) {
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw validation_error("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                                   ") has an endpoint outside [0, " + std::to_string(n) + ")");
        if (u > v) std::swap(u, v);
        norm.emplace_back(u, v);
    }
    std::sort(norm.begin(), norm.end());
    for (std::size_t i = 1; i < norm.size(); ++i) {
        if (norm[i] == norm[i - 1])
            throw validation_error("duplicate edge (" + std::to_string(norm[i].first) + ", " +
                                   std::to_string(norm[i].second) + ")");
    }
    std::vector<std::int64_t> deg(static_cast<std::size_t>(n) + 1, 0);
    for (auto [u, v] : norm) {
        ++deg[static_cast<std::size_t>(u) + 1];
        if (u != v) ++deg[static_cast<std::size_t>(v) + 1];
        else g.has_loops = true;
    }
    g.offsets.assign(static_cast<std::size_t>(n) + 1, 0);
    for (std::int64_t v = 0; v < n; ++v) g.offsets[v + 1] = g.offsets[v] + deg[v + 1];
    g.adj.resize(static_cast<std::size_t>(g.offsets[n]));
    std::vector<std::int64_t> cursor(g.offsets.begin(), g.offsets.end() - 1);
    for (auto [u, v] : norm) {
        g.adj[static_cast<std::size_t>(cursor[u]++)] = v;
        if (u != v) g.adj[static_cast<std::size_t>(cursor[v]++)] = u;
    }
    for (std::int64_t v = 0; v < n; ++v)
        std::sort(g.adj.begin() + g.offsets[v], g.adj.begin() + g.offsets[v + 1]);
    return g;
}

Graph with_labels(Graph g, std::vector<std::uint8_t> labels) {
    if (static_cast<std::int64_t>(labels.size()) != g.n)
        throw validation_error("label vector size does not match vertex count");
    for (std::uint8_t l : labels)
        if (l != 1 && l != 2) throw validation_error("labels must be 1 or 2");
    g.labels = std::move(labels);
    return g;
}

Graph without_loops(const Graph& g) {
    if (!g.has_loops) return g;
    std::vector<Edge> kept;
    for (auto& e : g.edges())
        if (e.first != e.second) kept.push_back(e);
    Graph out = build_graph(g.n, kept);
    out.labels = g.labels;
    return out;
}

std::uint64_t graph_hash(const Graph& g) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    auto mix = [&h](std::uint64_t value) {
        for (int byte = 0; byte < 8; ++byte) {
            h ^= (value >> (8 * byte)) & 0xFF;
            h *= 0x100000001B3ULL;
        }
    };
    mix(static_cast<std::uint64_t>(g.n));
    for (auto [u, v] : g.edges()) {
        mix(static_cast<std::uint64_t>(u));
        mix(static_cast<std::uint64_t>(v));
    }
    return h;
}

std::string graph_hash_hex(const Graph& g) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(graph_hash(g)));
    return std::string(buf);
}

std::vector<std::int32_t> bfs_distances(const Graph& g, Vertex source, std::int32_t max_depth) {
    return bfs_distances_multi(g, {source}, max_depth);
}

std::vector<std::int32_t> bfs_distances_multi(const Graph& g, const std::vector<Vertex>& sources,
                                              std::int32_t max_depth) {
    if (sources.empty()) throw validation_error("BFS needs at least one source");
    std::vector<std::int32_t> dist(static_cast<std::size_t>(g.n), -1);
    std::vector<Vertex> frontier;
    for (Vertex s : sources) {
        if (s < 0 || s >= g.n)
            throw validation_error("BFS source " + std::to_string(s) + " out of range");
        if (dist[s] != 0) {
            dist[s] = 0;
            frontier.push_back(s);
        }
    }
    std::vector<Vertex> next;
    std::int32_t depth = 0;
    while (!frontier.empty() && (max_depth < 0 || depth < max_depth)) {
        ++depth;
        next.clear();
        for (Vertex v : frontier) {
            for (Vertex w : g.neighbors(v)) {
                if (dist[w] < 0) {
                    dist[w] = depth;
                    next.push_back(w);
                }
            }
        }
        frontier.swap(next);
    }
    return dist;
}

std::vector<std::int32_t> component_ids(const Graph& g) {
    std::vector<std::int32_t> comp(static_cast<std::size_t>(g.n), -1);
    std::int32_t next_id = 0;
    std::vector<Vertex> stack;
    for (Vertex s = 0; s < g.n; ++s) {
        if (comp[s] >= 0) continue;
        comp[s] = next_id;
        stack.push_back(s);
        while (!stack.empty()) {
            Vertex v = stack.back();
            stack.pop_back();
            for (Vertex w : g.neighbors(v)) {
                if (comp[w] < 0) {
                    comp[w] = next_id;
                    stack.push_back(w);
                }
            }
        }
        ++next_id;
    }
    return comp;
}

std::int64_t component_count(const Graph& g) {
    auto comp = component_ids(g);
    std::int32_t max_id = -1;
    for (auto c : comp) max_id = std::max(max_id, c);
    return max_id + 1;
}

InducedSubgraph largest_component(const Graph& g) {
    auto comp = component_ids(g);
    std::int64_t count = 0;
    for (auto c : comp) count = std::max<std::int64_t>(count, c + 1);
    if (count == 0) throw validation_error("graph has no vertices");
    std::vector<std::int64_t> sizes(static_cast<std::size_t>(count), 0);
    for (auto c : comp) ++sizes[c];
    std::int32_t best = 0;
    for (std::int32_t c = 1; c < count; ++c)
        if (sizes[c] > sizes[best]) best = c;  // ties keep the lower id, deterministic

    InducedSubgraph out;
    std::vector<Vertex> remap(static_cast<std::size_t>(g.n), -1);
    for (Vertex v = 0; v < g.n; ++v) {
        if (comp[v] == best) {
            remap[v] = static_cast<Vertex>(out.original_ids.size());
            out.original_ids.push_back(v);
        }
    }
    std::vector<Edge> edges;
    for (Vertex v = 0; v < g.n; ++v) {
        if (comp[v] != best) continue;
        for (Vertex w : g.neighbors(v))
            if (w >= v) edges.emplace_back(remap[v], remap[w]);
    }
    out.graph = build_graph(static_cast<std::int64_t>(out.original_ids.size()), edges);
    if (!g.labels.empty()) {
        std::vector<std::uint8_t> labels;
        labels.reserve(out.original_ids.size());
        for (Vertex old : out.original_ids) labels.push_back(g.labels[old]);
        out.graph.labels = std::move(labels);
    }
    return out;
}

std::int32_t eccentricity(const Graph& g, Vertex v) {
    auto dist = bfs_distances(g, v);
    std::int32_t ecc = 0;
    for (std::int32_t d : dist) {
        if (d < 0) {
            auto comps = component_count(g);
            throw validation_error("eccentricity undefined: graph is disconnected (" +
                                   std::to_string(comps) + " components)");
        }
        ecc = std::max(ecc, d);
    }
    return ecc;
}

std::int64_t diameter(const Graph& g) {
    if (g.n == 0) throw validation_error("diameter undefined on the empty graph");
    std::int64_t diam = 0;
    for (Vertex v = 0; v < g.n; ++v) diam = std::max<std::int64_t>(diam, eccentricity(g, v));
    return diam;
}

std::optional<std::int64_t> girth(const Graph& g) {
    for (Vertex v = 0; v < g.n; ++v)
        if (g.has_edge(v, v)) return 1;
    // BFS from every vertex; a non-tree edge (u, w) seen at depths d(u), d(w)
    // witnesses a cycle of length d(u) + d(w) + 1 through the root. Scanning
    // every root makes the minimum exact.
    std::int64_t best = -1;
    std::vector<std::int32_t> dist(static_cast<std::size_t>(g.n));
    std::vector<Vertex> parent(static_cast<std::size_t>(g.n));
    std::vector<Vertex> queue;
    for (Vertex root = 0; root < g.n; ++root) {
        std::fill(dist.begin(), dist.end(), -1);
        queue.clear();
        queue.push_back(root);
        dist[root] = 0;
        parent[root] = -1;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            Vertex v = queue[head];
            if (best >= 0 && 2LL * dist[v] >= best) break;
            for (Vertex w : g.neighbors(v)) {
                if (w == parent[v]) {
                    parent[v] = -2;  // skip the tree edge once; parallel edges don't exist
                    continue;
                }
                if (dist[w] < 0) {
                    dist[w] = dist[v] + 1;
                    parent[w] = v;
                    queue.push_back(w);
                } else {
                    std::int64_t len = static_cast<std::int64_t>(dist[v]) + dist[w] + 1;
                    if (best < 0 || len < best) best = len;
                }
            }
        }
    }
    if (best < 0) return std::nullopt;
    return best;
}

DeltaProfile delta_profile(const Graph& g, std::int32_t r) {
    if (r < 1) throw validation_error("delta profile needs r >= 1");
    if (g.has_loops) throw validation_error("delta profile is defined on loop-free graphs");
    if (g.adj.empty()) throw validation_error("delta profile undefined on an edgeless graph");
    DeltaProfile out;
    out.r = r;
    out.delta.assign(static_cast<std::size_t>(r) + 1, std::numeric_limits<std::int64_t>::max());
    out.delta[0] = 1;

    std::vector<std::int64_t> count(static_cast<std::size_t>(r) + 1, 0);
    std::vector<std::pair<Vertex, std::int32_t>> ball_x;
    for (Vertex x = 0; x < g.n; ++x) {
        if (g.degree(x) == 0) continue;
        auto dist_x = bfs_distances(g, x, r);
        ball_x.clear();
        for (Vertex v = 0; v < g.n; ++v)
            if (dist_x[v] >= 1) ball_x.emplace_back(v, dist_x[v]);
        for (Vertex y : g.neighbors(x)) {
            // oriented edge (x, y): count vertices at distance exactly i from
            // x that are at distance >= i from y
            auto dist_y = bfs_distances(g, y, r);
            std::fill(count.begin(), count.end(), 0);
            for (auto [v, dx] : ball_x) {
                std::int32_t dy = dist_y[v];
                if (dy < 0 || dy >= dx) ++count[dx];
            }
            for (std::int32_t i = 1; i <= r; ++i)
                out.delta[i] = std::min(out.delta[i], count[i]);
        }
    }
    double sum = 0.0;
    for (std::int32_t i = 0; i <= r; ++i)
        sum += std::sqrt(static_cast<double>(out.delta[i]) * static_cast<double>(out.delta[r - i]));
    out.d_hat = std::pow(sum / (r + 1), 2.0 / r);
    return out;
}

std::int64_t max_power_degree(const Graph& g, const std::vector<Vertex>& subset, std::int32_t i) {
    if (subset.empty()) throw validation_error("max_power_degree needs a non-empty vertex subset");
    for (Vertex v : subset)
        if (v < 0 || v >= g.n)
            throw validation_error("subset vertex " + std::to_string(v) + " out of range");
    if (i < 0) throw validation_error("max_power_degree needs i >= 0");
    if (i == 0) return 1;
    std::int64_t best = 0;
    for (Vertex v : subset) {
        auto dist = bfs_distances(g, v, i);
        std::int64_t ball = 0;
        for (Vertex w = 0; w < g.n; ++w)
            if (w != v && dist[w] >= 1 && dist[w] <= i) ++ball;
        best = std::max(best, ball);
    }
    return best;
}

Graph cycle_graph(std::int64_t n) {
    if (n < 3) throw validation_error("cycle graph needs n >= 3");
    std::vector<Edge> edges;
    for (Vertex v = 0; v < n; ++v) edges.emplace_back(v, static_cast<Vertex>((v + 1) % n));
    return build_graph(n, edges);
}

Graph path_graph(std::int64_t n) {
    if (n < 1) throw validation_error("path graph needs n >= 1");
    std::vector<Edge> edges;
    for (Vertex v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
    return build_graph(n, edges);
}

Graph complete_graph(std::int64_t n) {
    std::vector<Edge> edges;
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v) edges.emplace_back(u, v);
    return build_graph(n, edges);
}

Graph star_graph(std::int64_t leaves) {
    std::vector<Edge> edges;
    for (Vertex v = 1; v <= leaves; ++v) edges.emplace_back(0, v);
    return build_graph(leaves + 1, edges);
}

Graph petersen_graph() {
    // outer 5-cycle 0..4, inner pentagram 5..9, spokes i -- i+5
    std::vector<Edge> edges;
    for (Vertex i = 0; i < 5; ++i) {
        edges.emplace_back(i, static_cast<Vertex>((i + 1) % 5));
        edges.emplace_back(static_cast<Vertex>(5 + i), static_cast<Vertex>(5 + (i + 2) % 5));
        edges.emplace_back(i, static_cast<Vertex>(i + 5));
    }
    return build_graph(10, edges);
}

Graph heawood_graph() {
    // LCF notation [5, -5]^7 on a 14-cycle
    std::vector<Edge> edges;
    for (Vertex i = 0; i < 14; ++i) edges.emplace_back(i, static_cast<Vertex>((i + 1) % 14));
    for (Vertex i = 0; i < 14; i += 2) edges.emplace_back(i, static_cast<Vertex>((i + 5) % 14));
    return build_graph(14, edges);
}

}  // namespace powerlab
