#include "powerlab/models.hpp"

#include <algorithm>
#include <deque>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "powerlab/errors.hpp"
#include "powerlab/rng.hpp"

namespace powerlab {

namespace {

constexpr std::uint64_t kTagLabels = 0x6C61626531;
constexpr std::uint64_t kTagEdges = 0x6564676531;
constexpr std::uint64_t kTagPairing = 0x7061697231;
constexpr std::uint64_t kTagAssign = 0x6173676E31;
constexpr std::uint64_t kTagWithin1 = 0x77697468A1;
constexpr std::uint64_t kTagWithin2 = 0x77697468A2;
constexpr std::uint64_t kTagCross = 0x63726F7331;
constexpr std::uint64_t kTagAdversary = 0x6164767231;

constexpr std::int64_t kMaxRestarts = 10000;

std::uint64_t pair_key(Vertex u, Vertex v) {
    if (u > v) std::swap(u, v);
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
           static_cast<std::uint32_t>(v);
}

// Stub-pairing core shared by the regular generators. Pairs the stub list
// `stubs` (already shuffled, even length) into edges among global vertex ids,
// then repairs loops and duplicates with uniform degree-preserving switches.
// `occ` arrives pre-seeded with any edges that are already placed and must
// not be duplicated; on success the repaired pairs are appended to `out`.
// Returns false when the attempt budget runs out (caller restarts).
bool repair_pairing(std::vector<Edge>& pairs, std::unordered_map<std::uint64_t, int>& occ,
                    RngStream& rng, bool bipartite) {
    for (const auto& [u, v] : pairs) occ[pair_key(u, v)]++;
    auto defective = [&](const Edge& e) {
        return (!bipartite && e.first == e.second) || occ[pair_key(e.first, e.second)] > 1;
    };
    std::deque<std::size_t> queue;
    for (std::size_t i = 0; i < pairs.size(); ++i)
        if (defective(pairs[i])) queue.push_back(i);
    std::int64_t budget = 200 * static_cast<std::int64_t>(pairs.size()) + 200;
    while (!queue.empty()) {
        if (budget-- <= 0) return false;
        std::size_t i = queue.front();
        queue.pop_front();
        if (!defective(pairs[i])) continue;
        std::size_t j = static_cast<std::size_t>(rng.next_below(pairs.size()));
        bool flip = bipartite ? false : rng.bit();
        if (j == i) {
            queue.push_back(i);
            continue;
        }
        auto [a, b] = pairs[i];
        auto [c, d] = pairs[j];
        if (flip) std::swap(c, d);
        Edge n1{a, d}, n2{c, b};
        bool ok = (bipartite || (a != d && c != b)) && pair_key(a, d) != pair_key(c, b) &&
                  occ[pair_key(a, d)] == 0 && occ[pair_key(c, b)] == 0;
        if (ok) {
            occ[pair_key(a, b)]--;
            occ[pair_key(pairs[j].first, pairs[j].second)]--;
            occ[pair_key(a, d)]++;
            occ[pair_key(c, b)]++;
            pairs[i] = n1;
            pairs[j] = n2;
        } else {
            queue.push_back(i);
        }
    }
    return true;
}

// Random simple pairing with degs[i] stubs at verts[i]; `taken` edges are
// fixed in place and may not be duplicated. Restarts with fresh derived
// streams until the repair converges.
std::vector<Edge> pair_stubs(const std::vector<Vertex>& verts, const std::vector<std::int64_t>& degs,
                             const std::vector<Edge>& taken, std::uint64_t seed,
                             const std::string& what) {
    std::vector<Vertex> stubs;
    for (std::size_t i = 0; i < verts.size(); ++i)
        for (std::int64_t k = 0; k < degs[i]; ++k) stubs.push_back(verts[i]);
    if (stubs.size() % 2 != 0) throw validation_error(what + ": odd stub count");
    for (std::int64_t t = 0; t < kMaxRestarts; ++t) {
        RngStream rng(derive_seed(seed, kTagPairing, static_cast<std::uint64_t>(t)));
        std::vector<Vertex> s = stubs;
        rng.shuffle(s);
        std::vector<Edge> pairs;
        pairs.reserve(s.size() / 2);
        for (std::size_t i = 0; i + 1 < s.size(); i += 2) pairs.emplace_back(s[i], s[i + 1]);
        std::unordered_map<std::uint64_t, int> occ;
        for (const auto& [u, v] : taken) occ[pair_key(u, v)]++;
        if (repair_pairing(pairs, occ, rng, /*bipartite=*/false)) return pairs;
    }
    throw numerical_error(what + ": no simple pairing found after " +
                          std::to_string(kMaxRestarts) + " restarts");
}

// Bipartite variant: stub i on the left is matched to stub i on the right
// after shuffling the right side, so every pair crosses the cut by
// construction and switches only exchange right endpoints.
std::vector<Edge> pair_stubs_bipartite(const std::vector<Vertex>& left,
                                       const std::vector<std::int64_t>& ldegs,
                                       const std::vector<Vertex>& right,
                                       const std::vector<std::int64_t>& rdegs,
                                       const std::vector<Edge>& taken, std::uint64_t seed,
                                       const std::string& what) {
    std::vector<Vertex> lstubs, rstubs;
    for (std::size_t i = 0; i < left.size(); ++i)
        for (std::int64_t k = 0; k < ldegs[i]; ++k) lstubs.push_back(left[i]);
    for (std::size_t i = 0; i < right.size(); ++i)
        for (std::int64_t k = 0; k < rdegs[i]; ++k) rstubs.push_back(right[i]);
    if (lstubs.size() != rstubs.size()) throw validation_error(what + ": unbalanced stub counts");
    for (std::int64_t t = 0; t < kMaxRestarts; ++t) {
        RngStream rng(derive_seed(seed, kTagPairing, static_cast<std::uint64_t>(t)));
        std::vector<Vertex> r = rstubs;
        rng.shuffle(r);
        std::vector<Edge> pairs;
        pairs.reserve(lstubs.size());
        for (std::size_t i = 0; i < lstubs.size(); ++i) pairs.emplace_back(lstubs[i], r[i]);
        std::unordered_map<std::uint64_t, int> occ;
        for (const auto& [u, v] : taken) occ[pair_key(u, v)]++;
        if (repair_pairing(pairs, occ, rng, /*bipartite=*/true)) return pairs;
    }
    throw numerical_error(what + ": no simple pairing found after " +
                          std::to_string(kMaxRestarts) + " restarts");
}

void check_probability(double x, std::int64_t n, const char* name) {
    if (x < 0 || x > static_cast<double>(n))
        throw validation_error(std::string(name) + " must lie in [0, n]");
}

}  // namespace

Graph gen_sbm(std::int64_t n, double a, double b, std::uint64_t seed) {
    if (n < 1) throw validation_error("gen_sbm: n must be positive");
    check_probability(a, n, "gen_sbm: a");
    check_probability(b, n, "gen_sbm: b");
    RngStream lab_rng(derive_seed(seed, kTagLabels));
    std::vector<std::uint8_t> labels(static_cast<std::size_t>(n));
    for (auto& l : labels) l = lab_rng.bit() ? 1 : 2;
    const double pa = a / static_cast<double>(n);
    const double pb = b / static_cast<double>(n);
    RngStream rng(derive_seed(seed, kTagEdges));
    std::vector<Edge> edges;
    for (Vertex i = 0; i < n; ++i)
        for (Vertex j = i + 1; j < n; ++j)
            if (rng.bernoulli(labels[static_cast<std::size_t>(i)] ==
                                      labels[static_cast<std::size_t>(j)]
                                  ? pa
                                  : pb))
                edges.emplace_back(i, j);
    return with_labels(build_graph(n, edges), std::move(labels));
}

Graph gen_er(std::int64_t n, double d, std::uint64_t seed) {
    if (n < 1) throw validation_error("gen_er: n must be positive");
    check_probability(d, n, "gen_er: d");
    const double p = d / static_cast<double>(n);
    RngStream rng(derive_seed(seed, kTagEdges));
    std::vector<Edge> edges;
    for (Vertex i = 0; i < n; ++i)
        for (Vertex j = i + 1; j < n; ++j)
            if (rng.bernoulli(p)) edges.emplace_back(i, j);
    return build_graph(n, edges);
}

Graph gen_rr(std::int64_t n, std::int64_t d, std::uint64_t seed) {
    return gen_rr_clique(n, d, 0, seed);
}

Graph gen_rr_clique(std::int64_t n, std::int64_t d, std::int64_t c, std::uint64_t seed) {
    if (n < 1) throw validation_error("gen_rr: n must be positive");
    if (d < 0 || d >= n) throw validation_error("gen_rr: need 0 <= d < n");
    if ((n * d) % 2 != 0) throw validation_error("gen_rr: n*d must be even");
    if (c < 0 || c > n) throw validation_error("gen_rr: need 0 <= c <= n");
    if (c > d + 1) throw validation_error("gen_rr: clique size exceeds degree budget (c > d+1)");
    RngStream rng(derive_seed(seed, kTagAssign));
    std::vector<std::int64_t> clique = rng.sample_distinct(n, c);
    std::sort(clique.begin(), clique.end());
    std::vector<Edge> fixed;
    for (std::size_t i = 0; i < clique.size(); ++i)
        for (std::size_t j = i + 1; j < clique.size(); ++j)
            fixed.emplace_back(static_cast<Vertex>(clique[i]), static_cast<Vertex>(clique[j]));
    std::vector<Vertex> verts(static_cast<std::size_t>(n));
    std::vector<std::int64_t> degs(static_cast<std::size_t>(n), d);
    for (Vertex v = 0; v < n; ++v) verts[static_cast<std::size_t>(v)] = v;
    for (std::int64_t v : clique) degs[static_cast<std::size_t>(v)] = d - (c - 1);
    std::vector<Edge> edges = pair_stubs(verts, degs, fixed, seed, "gen_rr");
    edges.insert(edges.end(), fixed.begin(), fixed.end());
    return build_graph(n, edges);
}

Graph gen_rsbm(std::int64_t n, std::int64_t a, std::int64_t b, std::uint64_t seed) {
    return gen_rsbm_clique(n, a, b, 0, seed);
}

Graph gen_rsbm_clique(std::int64_t n, std::int64_t a, std::int64_t b, std::int64_t c,
                      std::uint64_t seed) {
    if (n < 2 || n % 2 != 0) throw validation_error("gen_rsbm: n must be even and >= 2");
    const std::int64_t h = n / 2;
    if (a < 0 || a > h - 1) throw validation_error("gen_rsbm: need 0 <= a <= n/2 - 1");
    if (b < 0 || b > h) throw validation_error("gen_rsbm: need 0 <= b <= n/2");
    if ((h * a) % 2 != 0) throw validation_error("gen_rsbm: (n/2)*a must be even");
    if (c < 0 || c > n) throw validation_error("gen_rsbm: need 0 <= c <= n");
    if (c > a + b + 1)
        throw validation_error("gen_rsbm: clique size exceeds degree budget (c > a+b+1)");

    std::vector<std::uint8_t> labels;
    std::vector<std::int64_t> clique;
    bool placed = false;
    for (std::int64_t t = 0; t < kMaxRestarts && !placed; ++t) {
        RngStream rng(derive_seed(seed, kTagAssign, static_cast<std::uint64_t>(t)));
        std::vector<Vertex> perm(static_cast<std::size_t>(n));
        for (Vertex v = 0; v < n; ++v) perm[static_cast<std::size_t>(v)] = v;
        rng.shuffle(perm);
        labels.assign(static_cast<std::size_t>(n), 2);
        for (std::int64_t i = 0; i < h; ++i) labels[static_cast<std::size_t>(perm[i])] = 1;
        clique = rng.sample_distinct(n, c);
        std::int64_t in1 = 0;
        for (std::int64_t v : clique)
            if (labels[static_cast<std::size_t>(v)] == 1) ++in1;
        placed = true;
        for (std::int64_t v : clique) {
            std::int64_t same = labels[static_cast<std::size_t>(v)] == 1 ? in1 : c - in1;
            if (same - 1 > a || c - same > b) {
                placed = false;
                break;
            }
        }
    }
    if (!placed)
        throw numerical_error("gen_rsbm: no community assignment fits the clique after " +
                              std::to_string(kMaxRestarts) + " restarts");
    std::sort(clique.begin(), clique.end());

    std::vector<Edge> fix1, fix2, fixc;
    for (std::size_t i = 0; i < clique.size(); ++i)
        for (std::size_t j = i + 1; j < clique.size(); ++j) {
            Vertex u = static_cast<Vertex>(clique[i]);
            Vertex v = static_cast<Vertex>(clique[j]);
            std::uint8_t lu = labels[static_cast<std::size_t>(u)];
            std::uint8_t lv = labels[static_cast<std::size_t>(v)];
            (lu != lv ? fixc : lu == 1 ? fix1 : fix2).emplace_back(u, v);
        }

    std::vector<Vertex> comm1, comm2;
    for (Vertex v = 0; v < n; ++v)
        (labels[static_cast<std::size_t>(v)] == 1 ? comm1 : comm2).push_back(v);
    std::vector<std::int64_t> within(static_cast<std::size_t>(n), 0),
        across(static_cast<std::size_t>(n), 0);
    for (const auto& [u, v] : fix1) {
        ++within[static_cast<std::size_t>(u)];
        ++within[static_cast<std::size_t>(v)];
    }
    for (const auto& [u, v] : fix2) {
        ++within[static_cast<std::size_t>(u)];
        ++within[static_cast<std::size_t>(v)];
    }
    for (const auto& [u, v] : fixc) {
        ++across[static_cast<std::size_t>(u)];
        ++across[static_cast<std::size_t>(v)];
    }

    auto degs_for = [&](const std::vector<Vertex>& verts, std::int64_t target,
                        const std::vector<std::int64_t>& used) {
        std::vector<std::int64_t> degs(verts.size());
        for (std::size_t i = 0; i < verts.size(); ++i)
            degs[i] = target - used[static_cast<std::size_t>(verts[i])];
        return degs;
    };
    std::vector<Edge> edges = fix1;
    auto e1 = pair_stubs(comm1, degs_for(comm1, a, within), fix1, derive_seed(seed, kTagWithin1),
                         "gen_rsbm within-community pairing");
    auto e2 = pair_stubs(comm2, degs_for(comm2, a, within), fix2, derive_seed(seed, kTagWithin2),
                         "gen_rsbm within-community pairing");
    auto ec = pair_stubs_bipartite(comm1, degs_for(comm1, b, across), comm2,
                                   degs_for(comm2, b, across), fixc, derive_seed(seed, kTagCross),
                                   "gen_rsbm cross-community pairing");
    edges.insert(edges.end(), fix2.begin(), fix2.end());
    edges.insert(edges.end(), fixc.begin(), fixc.end());
    edges.insert(edges.end(), e1.begin(), e1.end());
    edges.insert(edges.end(), e2.begin(), e2.end());
    edges.insert(edges.end(), ec.begin(), ec.end());
    return with_labels(build_graph(n, edges), std::move(labels));
}

Perturbation gen_adversary_clique(const Graph& g, std::int64_t c, AdversaryMode mode,
                                  std::uint64_t seed) {
    if (g.has_loops)
        throw validation_error("gen_adversary_clique: expects a loop-free base graph");
    if (c < 0 || c > g.n) throw validation_error("gen_adversary_clique: need 0 <= c <= n");
    Perturbation h;
    if (mode == AdversaryMode::kUniform) {
        RngStream rng(derive_seed(seed, kTagAdversary));
        for (std::int64_t v : rng.sample_distinct(g.n, c))
            h.vertices.push_back(static_cast<Vertex>(v));
        std::sort(h.vertices.begin(), h.vertices.end());
    } else {
        std::vector<Vertex> order(static_cast<std::size_t>(g.n));
        for (Vertex v = 0; v < g.n; ++v) order[static_cast<std::size_t>(v)] = v;
        std::stable_sort(order.begin(), order.end(),
                         [&](Vertex x, Vertex y) { return g.degree(x) > g.degree(y); });
        h.vertices.assign(order.begin(), order.begin() + c);
        std::sort(h.vertices.begin(), h.vertices.end());
    }
    for (std::size_t i = 0; i < h.vertices.size(); ++i)
        for (std::size_t j = i + 1; j < h.vertices.size(); ++j)
            if (!g.has_edge(h.vertices[i], h.vertices[j]))
                h.toggles.emplace_back(h.vertices[i], h.vertices[j]);
    return h;
}

Graph apply_perturbation(const Graph& g, const Perturbation& h) {
    std::unordered_set<Vertex> support(h.vertices.begin(), h.vertices.end());
    if (support.size() != h.vertices.size())
        throw validation_error("apply_perturbation: duplicate support vertices");
    for (Vertex v : h.vertices)
        if (v < 0 || v >= g.n) throw validation_error("apply_perturbation: vertex out of range");
    std::unordered_set<std::uint64_t> toggled;
    for (auto [u, v] : h.toggles) {
        if (u == v) throw validation_error("apply_perturbation: toggle is a loop");
        if (!support.count(u) || !support.count(v))
            throw validation_error("apply_perturbation: toggle endpoint outside support");
        if (!toggled.insert(pair_key(u, v)).second)
            throw validation_error("apply_perturbation: duplicate toggle");
    }
    std::vector<Edge> edges;
    for (auto [u, v] : g.edges())
        if (!toggled.count(pair_key(u, v))) edges.emplace_back(u, v);
    for (auto [u, v] : h.toggles)
        if (!g.has_edge(u, v)) edges.emplace_back(u, v);
    Graph out = build_graph(g.n, edges);
    if (!g.labels.empty()) out = with_labels(std::move(out), g.labels);
    return out;
}

std::string model_kind_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::kEr: return "er";
        case ModelKind::kSbm: return "sbm";
        case ModelKind::kRr: return "rr";
        case ModelKind::kRsbm: return "rsbm";
        case ModelKind::kRrClique: return "rr_c";
        case ModelKind::kRsbmClique: return "rsbm_c";
    }
    throw validation_error("model_kind_name: unknown model kind");
}

ModelKind parse_model_kind(const std::string& name) {
    if (name == "er") return ModelKind::kEr;
    if (name == "sbm") return ModelKind::kSbm;
    if (name == "rr") return ModelKind::kRr;
    if (name == "rsbm") return ModelKind::kRsbm;
    if (name == "rr_c") return ModelKind::kRrClique;
    if (name == "rsbm_c") return ModelKind::kRsbmClique;
    throw validation_error("parse_model_kind: unknown model '" + name +
                           "' (expected er, sbm, rr, rsbm, rr_c, rsbm_c)");
}

namespace {

std::int64_t integral_degree(double x, const char* field) {
    const std::int64_t v = static_cast<std::int64_t>(x);
    if (static_cast<double>(v) != x || v < 0)
        throw validation_error(std::string("generate: ") + field +
                               " must be a non-negative integer for regular models");
    return v;
}

}  // namespace

Graph generate(const ModelParams& p) {
    if (p.c < 0 || p.c >= std::max<std::int64_t>(p.n, 1))
        throw validation_error("generate: need 0 <= c < n, got c = " + std::to_string(p.c));
    switch (p.model) {
        case ModelKind::kEr:
            return gen_er(p.n, p.a > 0 ? p.a : static_cast<double>(p.d), p.seed);
        case ModelKind::kSbm:
            return gen_sbm(p.n, p.a, p.b, p.seed);
        case ModelKind::kRr:
            return gen_rr(p.n, p.d, p.seed);
        case ModelKind::kRsbm:
            return gen_rsbm(p.n, integral_degree(p.a, "a"), integral_degree(p.b, "b"),
                            p.seed);
        case ModelKind::kRrClique:
            if (p.c < 1) throw validation_error("generate: rr_c needs c >= 1");
            return gen_rr_clique(p.n, p.d, p.c, p.seed);
        case ModelKind::kRsbmClique:
            if (p.c < 1) throw validation_error("generate: rsbm_c needs c >= 1");
            return gen_rsbm_clique(p.n, integral_degree(p.a, "a"),
                                   integral_degree(p.b, "b"), p.c, p.seed);
    }
    throw validation_error("generate: unknown model kind");
}

}  // namespace powerlab
