#include "powerlab/powering.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "powerlab/errors.hpp"
#include "powerlab/rng.hpp"

namespace powerlab {

namespace {

constexpr std::int64_t kMaxMaterializedEntries = 200'000'000;

// Depth-limited BFS from u; appends the ball (u included) to `out`.
void collect_ball(const Graph& g, Vertex u, std::int64_t r, std::vector<std::int32_t>& dist,
                  std::vector<Vertex>& queue, std::vector<Vertex>& out) {
    queue.clear();
    queue.push_back(u);
    dist[static_cast<std::size_t>(u)] = 0;
    out.push_back(u);
    for (std::size_t head = 0; head < queue.size(); ++head) {
        Vertex v = queue[head];
        std::int32_t dv = dist[static_cast<std::size_t>(v)];
        if (dv == r) break;
        for (Vertex w : g.neighbors(v)) {
            if (dist[static_cast<std::size_t>(w)] >= 0) continue;
            dist[static_cast<std::size_t>(w)] = dv + 1;
            queue.push_back(w);
            out.push_back(w);
        }
    }
    for (Vertex v : queue) dist[static_cast<std::size_t>(v)] = -1;
}

}  // namespace

PoweredGraph power_graph(const Graph& g, std::int64_t r) {
    if (r < 1) throw validation_error("power_graph: r must be >= 1");
    if (g.has_loops) throw validation_error("power_graph: base graph must be loop-free");
    PoweredGraph out;
    out.base_hash = graph_hash(g);
    out.r = r;

    std::vector<std::int32_t> comp = component_ids(g);
    std::vector<std::int64_t> comp_size;
    for (std::int32_t c : comp) {
        if (c >= static_cast<std::int32_t>(comp_size.size())) comp_size.resize(c + 1, 0);
        ++comp_size[static_cast<std::size_t>(c)];
    }

    Graph p;
    p.n = g.n;
    p.has_loops = g.n > 0;
    p.offsets.assign(static_cast<std::size_t>(g.n) + 1, 0);
    std::vector<std::int32_t> dist(static_cast<std::size_t>(g.n), -1);
    std::vector<Vertex> queue, ball;
    out.degenerate = g.n > 0;
    for (Vertex u = 0; u < g.n; ++u) {
        ball.clear();
        collect_ball(g, u, r, dist, queue, ball);
        if (static_cast<std::int64_t>(ball.size()) !=
            comp_size[static_cast<std::size_t>(comp[static_cast<std::size_t>(u)])])
            out.degenerate = false;
        std::sort(ball.begin(), ball.end());
        if (static_cast<std::int64_t>(p.adj.size() + ball.size()) > kMaxMaterializedEntries)
            throw numerical_error(
                "power_graph: materialized power exceeds " +
                std::to_string(kMaxMaterializedEntries) +
                " adjacency entries; use the implicit ball operator instead");
        p.adj.insert(p.adj.end(), ball.begin(), ball.end());
        p.offsets[static_cast<std::size_t>(u) + 1] = static_cast<std::int64_t>(p.adj.size());
    }
    if (!g.labels.empty()) p.labels = g.labels;
    out.graph = std::move(p);
    return out;
}

PoweredBallOperator::PoweredBallOperator(const Graph& g, std::int64_t r) : g_(&g), r_(r) {
    if (r < 1) throw validation_error("ball operator: r must be >= 1");
    if (g.has_loops) throw validation_error("ball operator: base graph must be loop-free");
    seen_.assign(static_cast<std::size_t>(g.n), 0);
    queue_.reserve(64);
}

void PoweredBallOperator::apply(const double* x, double* y) {
    const Graph& g = *g_;
    for (Vertex u = 0; u < g.n; ++u) {
        ++token_;
        queue_.clear();
        depth_.clear();
        queue_.push_back(u);
        depth_.push_back(0);
        seen_[static_cast<std::size_t>(u)] = token_;
        double sum = x[u];
        for (std::size_t head = 0; head < queue_.size(); ++head) {
            Vertex v = queue_[head];
            std::int32_t dv = depth_[head];
            if (dv == r_) break;
            for (Vertex w : g.neighbors(v)) {
                if (seen_[static_cast<std::size_t>(w)] == token_) continue;
                seen_[static_cast<std::size_t>(w)] = token_;
                queue_.push_back(w);
                depth_.push_back(dv + 1);
                sum += x[w];
            }
        }
        y[u] = sum;
    }
}

std::int64_t powered_nnz_estimate(const Graph& g, std::int64_t r, std::int64_t sample,
                                  std::uint64_t seed) {
    if (r < 1) throw validation_error("powered_nnz_estimate: r must be >= 1");
    if (g.n == 0) return 0;
    std::vector<std::int64_t> picks;
    if (sample >= g.n) {
        picks.resize(static_cast<std::size_t>(g.n));
        for (std::int64_t v = 0; v < g.n; ++v) picks[static_cast<std::size_t>(v)] = v;
    } else {
        RngStream rng(derive_seed(seed, 0x6E6E7A65));
        picks = rng.sample_distinct(g.n, sample);
    }
    std::vector<std::int32_t> dist(static_cast<std::size_t>(g.n), -1);
    std::vector<Vertex> queue, ball;
    std::int64_t total = 0;
    for (std::int64_t v : picks) {
        ball.clear();
        collect_ball(g, static_cast<Vertex>(v), r, dist, queue, ball);
        total += static_cast<std::int64_t>(ball.size());
    }
    double mean = static_cast<double>(total) / static_cast<double>(picks.size());
    return static_cast<std::int64_t>(mean * static_cast<double>(g.n));
}

Eigen::MatrixXd power_poly_matrix(const Graph& g, std::int64_t r) {
    if (r < 0) throw validation_error("power polynomial: r must be >= 0");
    if (g.n == 0 || g.n > 4096)
        throw validation_error("power polynomial: dense evaluation supports 1 <= n <= 4096");
    if (g.has_loops) throw validation_error("power polynomial: base graph must be loop-free");
    const std::int64_t d = g.degree(0);
    for (std::int64_t v = 1; v < g.n; ++v)
        if (g.degree(v) != d)
            throw validation_error("power polynomial: requires a d-regular base graph");
    if (auto gi = girth(g); gi && *gi <= 2 * r)
        throw validation_error("power polynomial: requires girth > 2r (girth " +
                               std::to_string(*gi) + ", r " + std::to_string(r) + ")");
    const auto n = static_cast<Eigen::Index>(g.n);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (Vertex v = 0; v < g.n; ++v)
        for (Vertex w : g.neighbors(v)) A(v, w) = 1.0;
    Eigen::MatrixXd prev = Eigen::MatrixXd::Identity(n, n);
    if (r == 0) return prev;
    Eigen::MatrixXd cur = A + Eigen::MatrixXd::Identity(n, n);
    for (std::int64_t k = 2; k <= r; ++k) {
        Eigen::MatrixXd next = A * cur - static_cast<double>(d - 1) * prev;
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

double power_poly_eval(std::int64_t r, std::int64_t d, double x) {
    if (r < 0) throw validation_error("power polynomial: r must be >= 0");
    if (d < 1) throw validation_error("power polynomial: d must be >= 1");
    double prev = 1.0;
    if (r == 0) return prev;
    double cur = x + 1.0;
    for (std::int64_t k = 2; k <= r; ++k) {
        double next = x * cur - static_cast<double>(d - 1) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

double power_poly_sup_bound(std::int64_t r, std::int64_t d) {
    if (r < 0) throw validation_error("power polynomial: r must be >= 0");
    if (d < 2) throw validation_error("power polynomial: sup bound needs d >= 2");
    const double rd = static_cast<double>(r);
    const double s = std::sqrt(static_cast<double>(d - 1));
    return std::pow(static_cast<double>(d - 1), rd / 2.0) * (1.0 + rd / s + rd);
}

}  // namespace powerlab
