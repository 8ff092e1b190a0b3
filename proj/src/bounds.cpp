#include "powerlab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "powerlab/errors.hpp"
#include "powerlab/powering.hpp"

namespace powerlab {

namespace {

constexpr std::int64_t kTdcVertexGuard = 12'000'000;
constexpr std::int64_t kCompositionGuard = 1'000'000;

mpz_class factorial(std::int64_t n) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
    return f;
}

mpq_class mpq_pow(const mpq_class& x, std::int64_t e) {
    mpq_class p;
    mpz_pow_ui(p.get_num_mpz_t(), x.get_num().get_mpz_t(), static_cast<unsigned long>(e));
    mpz_pow_ui(p.get_den_mpz_t(), x.get_den().get_mpz_t(), static_cast<unsigned long>(e));
    p.canonicalize();
    return p;
}

}  // namespace

std::string BoundReport::to_json() const {
    nlohmann::json j;
    j["bound_name"] = bound_name;
    j["inputs"] = inputs;
    j["value"] = value;
    j["witness"] = witness;
    return j.dump();
}

double alon_boppana_bound(const Graph& g, std::int64_t r) {
    if (r < 1) throw validation_error("alon_boppana_bound: r must be >= 1");
    if (g.edge_count() == 0) throw validation_error("alon_boppana_bound: graph has no edge");
    const DeltaProfile profile = delta_profile(g, static_cast<std::int32_t>(r));
    double sum = 0.0;
    for (std::int64_t i = 0; i <= r; ++i)
        sum += std::sqrt(static_cast<double>(profile.delta[i]) *
                         static_cast<double>(profile.delta[r - i]));
    return sum;
}

BoundReport alon_boppana_report(const Graph& g, std::int64_t r) {
    BoundReport rep;
    rep.bound_name = "alon_boppana";
    rep.value = alon_boppana_bound(g, r);
    const DeltaProfile profile = delta_profile(g, static_cast<std::int32_t>(r));
    std::int64_t diam = -1;
    bool connected = true;
    try {
        diam = diameter(g);
    } catch (const validation_error&) {
        connected = false;
    }
    rep.inputs = {{"n", g.n}, {"r", r}};
    rep.witness = {{"delta", profile.delta},
                   {"d_hat", profile.d_hat},
                   {"diameter", diam},
                   {"asymptotic_regime", connected && diam > 2 * r}};
    if (!(connected && diam > 2 * r))
        rep.witness["note"] = "diameter too small for the bound to bind";
    return rep;
}

std::pair<mpq_class, mpq_class> even_partition_bound(const std::vector<mpq_class>& xs,
                                                     std::int64_t two_n) {
    if (two_n < 0 || two_n % 2 != 0)
        throw validation_error("even_partition_bound: need an even two_n >= 0, got " +
                               std::to_string(two_n));
    if (xs.empty()) throw validation_error("even_partition_bound: xs is empty");
    for (const mpq_class& x : xs)
        if (x < 0) throw validation_error("even_partition_bound: xs must be non-negative");
    const std::int64_t k = static_cast<std::int64_t>(xs.size());
    const std::int64_t n = two_n / 2;
    mpz_class shapes;
    mpz_bin_uiui(shapes.get_mpz_t(), static_cast<unsigned long>(n + k - 1),
                 static_cast<unsigned long>(k - 1));
    if (shapes > kCompositionGuard)
        throw validation_error("even_partition_bound: composition count exceeds guard");

    const mpz_class total_fact = factorial(two_n);
    mpq_class lhs = 0;
    std::vector<std::int64_t> m(k, 0);
    std::function<void(std::int64_t, std::int64_t)> rec = [&](std::int64_t at,
                                                              std::int64_t left) {
        if (at == k - 1) {
            m[at] = left;
            mpz_class coeff = total_fact;
            for (std::int64_t i = 0; i < k; ++i) coeff /= factorial(2 * m[i]);
            mpq_class term(coeff);
            for (std::int64_t i = 0; i < k; ++i)
                if (m[i] > 0) term *= mpq_pow(xs[i], 2 * m[i]);
            lhs += term;
            return;
        }
        for (std::int64_t v = 0; v <= left; ++v) {
            m[at] = v;
            rec(at + 1, left - v);
        }
    };
    rec(0, n);

    mpq_class sum = 0;
    for (const mpq_class& x : xs) sum += x;
    mpq_class rhs = mpq_pow(sum, two_n);
    mpz_class denom;
    mpz_ui_pow_ui(denom.get_mpz_t(), 2, static_cast<unsigned long>(k - 1));
    rhs /= mpq_class(denom);
    return {lhs, rhs};
}

double girth_poly_bound(std::int64_t d, std::int64_t r, double x) {
    if (d < 2) throw validation_error("girth_poly_bound: d must be >= 2");
    if (r < 0) throw validation_error("girth_poly_bound: r must be >= 0");
    const double root = std::sqrt(static_cast<double>(d - 1));
    if (!(std::abs(x) < 2.0 * root))
        throw validation_error("girth_poly_bound: |x| must be < 2 sqrt(d-1) = " +
                               std::to_string(2.0 * root) +
                               "; use power_poly_eval outside the window");
    const double theta = std::acos(x / (2.0 * root));
    const double s = std::sin(theta);
    const double rd = static_cast<double>(r);
    // sin(r theta) / sin(theta), with the L'Hopital value r cos(r theta) / cos(theta)
    // at the window edges where sin(theta) vanishes.
    const double ratio = (std::abs(s) > 1e-9) ? std::sin(rd * theta) / s
                                              : rd * std::cos(rd * theta) / std::cos(theta);
    const double value =
        std::cos(rd * theta) + (1.0 / root + std::cos(theta)) * ratio;
    return std::pow(static_cast<double>(d - 1), rd / 2.0) * value;
}

double perturbation_power_bound(const Graph& g, const Perturbation& h, std::int64_t r) {
    if (r < 1) throw validation_error("perturbation_power_bound: r must be >= 1");
    if (h.vertices.empty())
        throw validation_error("perturbation_power_bound: perturbation touches no vertex");
    const std::int64_t c = static_cast<std::int64_t>(h.vertices.size());
    std::vector<double> dpow(r);  // dpow[i] = D^(i), D^(0) = 1
    for (std::int64_t i = 0; i < r; ++i)
        dpow[i] = static_cast<double>(
            max_power_degree(g, h.vertices, static_cast<std::int32_t>(i)));
    double total = 0.0;
    for (std::int64_t q = 0; q < r; ++q) {
        double best = 0.0;
        for (std::int64_t i = 0; i <= q; ++i)
            best = std::max(best, std::sqrt(dpow[i] * dpow[q - i]));
        total += static_cast<double>(c) * best;
    }
    return total;
}

BoundReport perturbation_power_report(const Graph& g, const Perturbation& h,
                                      std::int64_t r) {
    BoundReport rep;
    rep.bound_name = "perturbation_power";
    rep.value = perturbation_power_bound(g, h, r);
    std::vector<std::int64_t> dpow(r);
    for (std::int64_t i = 0; i < r; ++i)
        dpow[i] = max_power_degree(g, h.vertices, static_cast<std::int32_t>(i));
    rep.inputs = {{"n", g.n},
                  {"r", r},
                  {"c", h.vertices.size()},
                  {"toggles", h.toggles.size()}};
    rep.witness = {{"max_power_degree", dpow}};
    return rep;
}

Graph tdc_truncated(std::int64_t d, std::int64_t c, std::int64_t depth) {
    if (d < 2) throw validation_error("tdc_truncated: d must be >= 2");
    if (c < 2) throw validation_error("tdc_truncated: c must be >= 2");
    if (depth < 1) throw validation_error("tdc_truncated: depth must be >= 1");
    const std::int64_t b = d - 1;
    mpz_class count = 0;
    mpz_class level = c;
    for (std::int64_t l = 0; l <= depth; ++l) {
        count += level;
        level *= b;
    }
    if (count > kTdcVertexGuard)
        throw validation_error("tdc_truncated: " + count.get_str() +
                               " vertices exceeds the guard of " +
                               std::to_string(kTdcVertexGuard));
    const std::int64_t n = static_cast<std::int64_t>(count.get_si());

    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(n - c + c * (c - 1) / 2));
    for (Vertex i = 0; i < c; ++i)
        for (Vertex j = i + 1; j < c; ++j) edges.emplace_back(i, j);
    std::int64_t level_start = 0;
    std::int64_t level_size = c;
    for (std::int64_t l = 0; l < depth; ++l) {
        const std::int64_t next_start = level_start + level_size;
        for (std::int64_t v = 0; v < level_size; ++v)
            for (std::int64_t t = 0; t < b; ++t)
                edges.emplace_back(static_cast<Vertex>(level_start + v),
                                   static_cast<Vertex>(next_start + v * b + t));
        level_start = next_start;
        level_size *= b;
    }
    return build_graph(n, edges);
}

std::pair<double, double> tdc_power_band(std::int64_t d, std::int64_t c, std::int64_t r) {
    if (d < 2 || c < 2 || r < 1)
        throw validation_error("tdc_power_band: need d >= 2, c >= 2, r >= 1");
    const double sd = std::sqrt(static_cast<double>(d));
    const double scale = std::pow(sd, static_cast<double>(r - 1));
    const double core = static_cast<double>(r + 1) * sd;
    const double lower = std::max(core, static_cast<double>(c)) * scale / 3.0;
    const double upper = 3.0 * (static_cast<double>(c) + core) * scale;
    return {lower, upper};
}

std::vector<std::vector<double>> tdc_power_quotient(std::int64_t d, std::int64_t c,
                                                    std::int64_t depth, std::int64_t r) {
    if (r < 1) throw validation_error("tdc_power_quotient: r must be >= 1");
    const Graph g = tdc_truncated(d, c, depth);

    // Level of a vertex id, recoverable from the level-ordered layout.
    std::vector<std::int64_t> level_start(depth + 2, 0);
    std::int64_t size = c;
    for (std::int64_t l = 0; l <= depth; ++l) {
        level_start[l + 1] = level_start[l] + size;
        size *= (d - 1);
    }
    auto level_of = [&](Vertex v) {
        const auto it = std::upper_bound(level_start.begin(), level_start.end(),
                                         static_cast<std::int64_t>(v));
        return static_cast<std::int64_t>(it - level_start.begin()) - 1;
    };

    // One representative per level; a depth-limited BFS tallies its powered
    // row by level (self included, matching the powered self-loop).
    std::vector<std::vector<double>> q(depth + 1, std::vector<double>(depth + 1, 0.0));
    std::vector<std::int32_t> dist(g.n, -1);
    std::vector<Vertex> frontier;
    for (std::int64_t l = 0; l <= depth; ++l) {
        const Vertex rep = static_cast<Vertex>(level_start[l]);
        std::vector<Vertex> touched;
        std::queue<Vertex> bfs;
        dist[rep] = 0;
        bfs.push(rep);
        touched.push_back(rep);
        q[l][level_of(rep)] += 1.0;
        while (!bfs.empty()) {
            const Vertex u = bfs.front();
            bfs.pop();
            if (dist[u] == r) continue;
            for (Vertex w : g.neighbors(u)) {
                if (dist[w] >= 0) continue;
                dist[w] = dist[u] + 1;
                bfs.push(w);
                touched.push_back(w);
                q[l][level_of(w)] += 1.0;
            }
        }
        for (Vertex v : touched) dist[v] = -1;
    }
    return q;
}

double tdc_power_lambda1(std::int64_t d, std::int64_t c, std::int64_t depth,
                         std::int64_t r) {
    const auto q = tdc_power_quotient(d, c, depth, r);
    const std::int64_t m = static_cast<std::int64_t>(q.size());
    Eigen::MatrixXd mat(m, m);
    for (std::int64_t i = 0; i < m; ++i)
        for (std::int64_t j = 0; j < m; ++j) mat(i, j) = q[i][j];
    Eigen::EigenSolver<Eigen::MatrixXd> solver(mat);
    if (solver.info() != Eigen::Success)
        throw numerical_error("tdc_power_lambda1: quotient eigensolve failed");
    double best = 0.0;
    for (std::int64_t i = 0; i < m; ++i)
        best = std::max(best, solver.eigenvalues()(i).real());
    return best;
}

}  // namespace powerlab
