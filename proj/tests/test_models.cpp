#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "doctest.h"
#include "powerlab/errors.hpp"
#include "powerlab/graph.hpp"
#include "powerlab/models.hpp"
#include "powerlab/rng.hpp"
#include "powerlab/spectral.hpp"

using namespace powerlab;

namespace {

// Within/cross degree tally against the label vector.
std::pair<std::int64_t, std::int64_t> degree_split(const Graph& g, Vertex v) {
    std::int64_t same = 0, cross = 0;
    for (Vertex u : g.neighbors(v))
        (g.labels[static_cast<std::size_t>(u)] == g.labels[static_cast<std::size_t>(v)] ? same
                                                                                        : cross)++;
    return {same, cross};
}

}  // namespace

TEST_CASE("gen_er hits the expected edge count and is seed-deterministic") {
    Graph g = gen_er(500, 6.0, 42);
    CHECK(g.n == 500);
    // E[m] = C(n,2) * d/n = (n-1)d/2 = 1497; allow 5 sigma.
    CHECK(g.edge_count() > 1300);
    CHECK(g.edge_count() < 1700);
    CHECK_FALSE(g.has_loops);
    CHECK(graph_hash(gen_er(500, 6.0, 42)) == graph_hash(g));
    CHECK(graph_hash(gen_er(500, 6.0, 43)) != graph_hash(g));
    CHECK_THROWS_AS(gen_er(0, 1.0, 1), validation_error);
    CHECK_THROWS_AS(gen_er(10, 11.0, 1), validation_error);
}

TEST_CASE("gen_sbm labels are balanced-ish and drive the densities") {
    Graph g = gen_sbm(600, 18.0, 2.0, 7);
    REQUIRE(g.labels.size() == 600);
    std::int64_t ones = 0;
    for (auto l : g.labels) {
        CHECK((l == 1 || l == 2));
        if (l == 1) ++ones;
    }
    CHECK(ones > 200);
    CHECK(ones < 400);
    std::int64_t same = 0, cross = 0;
    for (auto [u, v] : g.edges())
        (g.labels[static_cast<std::size_t>(u)] == g.labels[static_cast<std::size_t>(v)] ? same
                                                                                        : cross)++;
    // E[same] = (C(n1,2)+C(n2,2)) * 18/600 ~ 2690, E[cross] = n1*n2*2/600 ~ 300.
    CHECK(same > 5 * cross);
}

TEST_CASE("gen_rr is exactly regular and validates parity") {
    Graph g = gen_rr(400, 7, 3);
    for (Vertex v = 0; v < g.n; ++v) CHECK(g.degree(v) == 7);
    CHECK_FALSE(g.has_loops);
    CHECK_THROWS_AS(gen_rr(401, 7, 3), validation_error);  // odd n*d
    CHECK_THROWS_AS(gen_rr(6, 6, 3), validation_error);    // d >= n
    CHECK(graph_hash(gen_rr(400, 7, 3)) == graph_hash(g));
}

TEST_CASE("gen_rr_clique plants the clique and keeps regularity") {
    Graph g = gen_rr_clique(1000, 20, 10, 11);
    for (Vertex v = 0; v < g.n; ++v) CHECK(g.degree(v) == 20);
    // Recover the clique as the support of the fixed edges: count vertices
    // whose neighborhood contains 9 mutual co-members.
    std::int64_t clique_pairs = 0;
    std::vector<Vertex> members;
    for (Vertex v = 0; v < g.n; ++v) {
        std::int64_t mutual = 0;
        for (Vertex u : g.neighbors(v))
            if (u != v) {
                std::int64_t shared = 0;
                for (Vertex w : g.neighbors(v))
                    if (w != u && g.has_edge(u, w)) ++shared;
                if (shared >= 8) ++mutual;
            }
        if (mutual >= 9) members.push_back(v);
    }
    // The ten planted vertices induce all 45 pairs.
    REQUIRE(members.size() >= 10);
    for (std::size_t i = 0; i < members.size(); ++i)
        for (std::size_t j = i + 1; j < members.size(); ++j)
            if (g.has_edge(members[i], members[j])) ++clique_pairs;
    CHECK(clique_pairs >= 45);
    CHECK(graph_hash(gen_rr_clique(1000, 20, 0, 5)) == graph_hash(gen_rr(1000, 20, 5)));
    CHECK_THROWS_AS(gen_rr_clique(100, 5, 7, 1), validation_error);  // c > d+1
}

TEST_CASE("gen_rr_clique second eigenvalue sits in the clique band") {
    // Planted 10-clique on a 20-regular graph: lambda2 = Theta(c + sqrt(d)).
    Graph g = gen_rr_clique(1000, 20, 10, 17);
    const double l2 = top_eigs_sym(csr_operator(g), 2, 1e-8, 5000, 0).eigenvalues[1];
    const double scale = 10.0 + std::sqrt(20.0);
    CHECK(l2 >= 0.3 * scale);
    CHECK(l2 <= 3.0 * scale);
}

TEST_CASE("gen_rsbm audits exact within and cross degrees") {
    Graph g = gen_rsbm(200, 6, 2, 9);
    REQUIRE(g.labels.size() == 200);
    std::int64_t ones = 0;
    for (auto l : g.labels)
        if (l == 1) ++ones;
    CHECK(ones == 100);
    for (Vertex v = 0; v < g.n; ++v) {
        auto [same, cross] = degree_split(g, v);
        CHECK(same == 6);
        CHECK(cross == 2);
    }
    // The +/-1 community vector is an exact eigenvector with eigenvalue a-b,
    // so lambda2 >= a - b = 4.
    std::vector<double> f(200);
    for (std::size_t i = 0; i < 200; ++i) f[i] = g.labels[i] == 1 ? 1.0 : -1.0;
    CHECK(rayleigh(csr_operator(g), f) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK_THROWS_AS(gen_rsbm(201, 6, 2, 9), validation_error);  // odd n
    CHECK_THROWS_AS(gen_rsbm(20, 11, 2, 9), validation_error);  // a > n/2 - 1
}

TEST_CASE("gen_rsbm_clique keeps the degree audit when feasible") {
    Graph g = gen_rsbm_clique(120, 10, 4, 5, 13);
    for (Vertex v = 0; v < g.n; ++v) {
        auto [same, cross] = degree_split(g, v);
        CHECK(same == 10);
        CHECK(cross == 4);
    }
    CHECK(graph_hash(gen_rsbm_clique(120, 10, 4, 0, 13)) == graph_hash(gen_rsbm(120, 10, 4, 13)));
}

TEST_CASE("gen_rsbm_clique rejects budget-infeasible cliques") {
    // A 10-clique vertex needs 9 within-coverage but a = 8 caps it, and b = 2
    // cannot host 10-same splits either; no community assignment works.
    CHECK_THROWS_AS(gen_rsbm_clique(2000, 8, 2, 10, 1), numerical_error);
}

TEST_CASE("adversary clique toggles complete a clique and invert cleanly") {
    Graph g = gen_er(300, 5.0, 21);
    Perturbation h = gen_adversary_clique(g, 12, AdversaryMode::kUniform, 77);
    REQUIRE(h.vertices.size() == 12);
    CHECK(std::is_sorted(h.vertices.begin(), h.vertices.end()));
    for (auto [u, v] : h.toggles) CHECK_FALSE(g.has_edge(u, v));
    Graph gp = apply_perturbation(g, h);
    for (std::size_t i = 0; i < h.vertices.size(); ++i)
        for (std::size_t j = i + 1; j < h.vertices.size(); ++j)
            CHECK(gp.has_edge(h.vertices[i], h.vertices[j]));
    Graph back = apply_perturbation(gp, h);
    CHECK(graph_hash(back) == graph_hash(g));
}

TEST_CASE("targeted adversary picks the highest degrees") {
    Graph g = gen_er(300, 5.0, 22);
    Perturbation h = gen_adversary_clique(g, 10, AdversaryMode::kTargeted, 0);
    std::vector<std::int64_t> degs(static_cast<std::size_t>(g.n));
    for (Vertex v = 0; v < g.n; ++v) degs[static_cast<std::size_t>(v)] = g.degree(v);
    std::vector<std::int64_t> sorted = degs;
    std::sort(sorted.rbegin(), sorted.rend());
    const std::int64_t cutoff = sorted[9];
    for (Vertex v : h.vertices) CHECK(degs[static_cast<std::size_t>(v)] >= cutoff);
}

TEST_CASE("generate dispatches and round-trips model names") {
    for (const char* name : {"er", "sbm", "rr", "rsbm", "rr_c", "rsbm_c"})
        CHECK(model_kind_name(parse_model_kind(name)) == name);
    CHECK_THROWS_AS(parse_model_kind("erdos"), validation_error);

    ModelParams p;
    p.model = ModelKind::kRr;
    p.n = 100;
    p.d = 4;
    p.seed = 3;
    CHECK(graph_hash(generate(p)) == graph_hash(gen_rr(100, 4, 3)));

    p.model = ModelKind::kRsbm;
    p.a = 6;
    p.b = 2;
    CHECK(graph_hash(generate(p)) == graph_hash(gen_rsbm(100, 6, 2, 3)));

    p.model = ModelKind::kRsbm;
    p.a = 6.5;  // fractional degree must be rejected
    CHECK_THROWS_AS(generate(p), validation_error);
}
