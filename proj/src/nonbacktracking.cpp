#include "powerlab/nonbacktracking.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <Eigen/Dense>

#include "json.hpp"
#include "powerlab/errors.hpp"
#include "powerlab/kernels.hpp"
#include "powerlab/rng.hpp"

namespace powerlab {

namespace {

namespace ker = kernels;

constexpr std::uint64_t kNbSeed = 0x6E6273706563ULL;
constexpr double kPerronTol = 1e-10;
constexpr std::int64_t kPerronMaxIter = 20000;
constexpr std::int64_t kArnoldiSteps = 160;

// Peels degree-<=1 vertices until only the 2-core remains.
InducedSubgraph two_core(const Graph& g) {
    std::vector<std::int64_t> deg(g.n);
    std::vector<char> dead(g.n, 0);
    std::vector<Vertex> stack;
    for (std::int64_t v = 0; v < g.n; ++v) {
        deg[v] = g.degree(v);
        if (deg[v] <= 1) stack.push_back(static_cast<Vertex>(v));
    }
    while (!stack.empty()) {
        Vertex v = stack.back();
        stack.pop_back();
        if (dead[v]) continue;
        dead[v] = 1;
        for (Vertex w : g.neighbors(v))
            if (!dead[w] && --deg[w] <= 1) stack.push_back(w);
    }
    InducedSubgraph out;
    std::vector<Vertex> remap(g.n, -1);
    for (std::int64_t v = 0; v < g.n; ++v)
        if (!dead[v]) {
            remap[v] = static_cast<Vertex>(out.original_ids.size());
            out.original_ids.push_back(static_cast<Vertex>(v));
        }
    std::vector<Edge> edges;
    for (std::int64_t v = 0; v < g.n; ++v) {
        if (dead[v]) continue;
        for (Vertex w : g.neighbors(v))
            if (w > v && !dead[w]) edges.emplace_back(remap[v], remap[w]);
    }
    out.graph = build_graph(static_cast<std::int64_t>(out.original_ids.size()), edges);
    return out;
}

// Directed-edge view: orientation ids 2i and 2i+1 per undirected edge i,
// with out_ids aligned to the CSR adjacency (out_ids[p] is the id of
// row_vertex -> adj[p]).
struct DirEdges {
    const Graph* g = nullptr;
    std::int64_t n_dir = 0;
    std::vector<Vertex> head, tail;
    std::vector<std::int32_t> out_ids;
};

DirEdges build_dir(const Graph& g) {
    std::int64_t m = g.edge_count();
    if (2 * m >= (std::int64_t{1} << 31))
        throw validation_error("nonbacktracking: too many edges for 32-bit directed ids");
    DirEdges d;
    d.g = &g;
    d.n_dir = 2 * m;
    d.head.resize(d.n_dir);
    d.tail.resize(d.n_dir);
    d.out_ids.resize(g.adj.size());
    std::int32_t idx = 0;
    for (std::int64_t u = 0; u < g.n; ++u) {
        for (std::int64_t p = g.offsets[u]; p < g.offsets[u + 1]; ++p) {
            Vertex v = g.adj[p];
            if (v <= u) continue;
            std::int32_t e = 2 * idx++;
            d.out_ids[p] = e;
            auto row = g.neighbors(v);
            auto it = std::lower_bound(row.begin(), row.end(), static_cast<Vertex>(u));
            d.out_ids[g.offsets[v] + (it - row.begin())] = e + 1;
            d.head[e] = v;
            d.tail[e] = static_cast<Vertex>(u);
            d.head[e + 1] = static_cast<Vertex>(u);
            d.tail[e + 1] = v;
        }
    }
    return d;
}

// y = B x using per-vertex outflow sums: y[e] = S[head(e)] - x[rev(e)].
void apply_b(const DirEdges& d, const double* x, double* y, std::vector<double>& s) {
    const Graph& g = *d.g;
    for (std::int64_t v = 0; v < g.n; ++v) {
        double acc = 0.0;
        for (std::int64_t p = g.offsets[v]; p < g.offsets[v + 1]; ++p)
            acc += x[d.out_ids[p]];
        s[v] = acc;
    }
    for (std::int64_t e = 0; e < d.n_dir; ++e) y[e] = s[d.head[e]] - x[e ^ 1];
}

// y = B^T x via per-vertex inflow sums: y[f] = T[tail(f)] - x[rev(f)].
void apply_bt(const DirEdges& d, const double* x, double* y, std::vector<double>& s) {
    const Graph& g = *d.g;
    for (std::int64_t v = 0; v < g.n; ++v) {
        double acc = 0.0;
        for (std::int64_t p = g.offsets[v]; p < g.offsets[v + 1]; ++p)
            acc += x[d.out_ids[p] ^ 1];
        s[v] = acc;
    }
    for (std::int64_t e = 0; e < d.n_dir; ++e) y[e] = s[d.tail[e]] - x[e ^ 1];
}

struct PerronPair {
    double lambda = 0.0;
    std::vector<double> vec;
    double residual = 0.0;
};

// Power iteration on B + I (the shift breaks the periodicity of
// bipartite-like edge spaces without moving the Perron direction).
PerronPair perron_vector(const DirEdges& d, bool transpose) {
    const std::int64_t nd = d.n_dir;
    PerronPair out;
    out.vec.assign(nd, 1.0 / std::sqrt(static_cast<double>(nd)));
    std::vector<double> bx(nd), tmp(nd), s(d.g->n);
    for (std::int64_t it = 0; it < kPerronMaxIter; ++it) {
        if (transpose)
            apply_bt(d, out.vec.data(), bx.data(), s);
        else
            apply_b(d, out.vec.data(), bx.data(), s);
        out.lambda = ker::dot(nd, out.vec.data(), bx.data());
        std::copy(bx.begin(), bx.end(), tmp.begin());
        ker::axpy(nd, -out.lambda, out.vec.data(), tmp.data());
        out.residual = ker::nrm2(nd, tmp.data());
        if (out.residual <= kPerronTol * (std::abs(out.lambda) + 1.0)) return out;
        ker::axpy(nd, 1.0, out.vec.data(), bx.data());
        double norm = ker::nrm2(nd, bx.data());
        ker::scal(nd, 1.0 / norm, bx.data());
        out.vec.swap(bx);
    }
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.3e", out.residual);
    throw numerical_error(std::string("nb_top_two: Perron iteration stalled (residual ") +
                          buf + ")");
}

struct SecondModulus {
    double value = 0.0;
    double residual = 0.0;
};

// One Arnoldi sweep on B with the Perron pair deflated through the left
// eigenvector; the largest credible Ritz modulus estimates |lambda_2|.
SecondModulus arnoldi_second(const DirEdges& d, const PerronPair& right,
                             const PerronPair& left, std::int64_t steps,
                             std::uint64_t seed) {
    const std::int64_t nd = d.n_dir;
    const std::int64_t k = std::min(steps, nd);
    double yx = ker::dot(nd, left.vec.data(), right.vec.data());
    if (std::abs(yx) < 1e-12)
        throw numerical_error("nb_top_two: left/right Perron vectors are nearly orthogonal");
    double defl = right.lambda / yx;
    std::vector<double> s(d.g->n);
    auto apply_deflated = [&](const double* in, double* out) {
        apply_b(d, in, out, s);
        double t = defl * ker::dot(nd, left.vec.data(), in);
        ker::axpy(nd, -t, right.vec.data(), out);
    };

    std::vector<double> basis(static_cast<std::size_t>(k + 1) * nd), w(nd);
    auto row = [&](std::int64_t i) { return basis.data() + static_cast<std::size_t>(i) * nd; };
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(k + 1, k);
    RngStream rng(seed);
    auto fresh = [&](double* v, std::int64_t upto) {
        for (int attempt = 0; attempt < 16; ++attempt) {
            for (std::int64_t i = 0; i < nd; ++i) v[i] = rng.next_double() - 0.5;
            for (int pass = 0; pass < 2; ++pass)
                for (std::int64_t i = 0; i < upto; ++i)
                    ker::axpy(nd, -ker::dot(nd, v, row(i)), row(i), v);
            double nv = ker::nrm2(nd, v);
            if (nv > 1e-6) {
                ker::scal(nd, 1.0 / nv, v);
                return;
            }
        }
        throw numerical_error("nb_top_two: could not generate a fresh Arnoldi direction");
    };
    fresh(row(0), 0);

    for (std::int64_t j = 0; j < k; ++j) {
        apply_deflated(row(j), w.data());
        for (int pass = 0; pass < 2; ++pass) {
            for (std::int64_t i = 0; i <= j; ++i) {
                double c = ker::dot(nd, w.data(), row(i));
                ker::axpy(nd, -c, row(i), w.data());
                h(i, j) += c;
            }
        }
        double beta = ker::nrm2(nd, w.data());
        if (beta <= 1e-12 * (std::abs(right.lambda) + 1.0)) {
            h(j + 1, j) = 0.0;
            fresh(row(j + 1), j + 1);
        } else {
            h(j + 1, j) = beta;
            ker::scal(nd, 1.0 / beta, w.data());
            std::copy(w.begin(), w.end(), row(j + 1));
        }
    }

    Eigen::EigenSolver<Eigen::MatrixXd> es(h.topLeftCorner(k, k));
    if (es.info() != Eigen::Success)
        throw numerical_error("nb_top_two: Hessenberg eigensolve failed");
    double hsub = h(k, k - 1);

    // Prefer Ritz pairs whose residual estimate is credible; unconverged
    // values of a nonnormal operator can overshoot into the pseudospectrum.
    SecondModulus best{0.0, 0.0};
    SecondModulus fallback{0.0, 0.0};
    for (std::int64_t i = 0; i < k; ++i) {
        double mod = std::abs(es.eigenvalues()(i));
        double res = std::abs(hsub) * std::abs(es.eigenvectors()(k - 1, i));
        if (res <= 0.3 * (mod + 1.0) && mod > best.value) best = {mod, res};
        if (mod > fallback.value) fallback = {mod, res};
    }
    return best.value > 0.0 ? best : fallback;
}

Eigen::MatrixXd companion_matrix(const Graph& g) {
    const std::int64_t n = g.n;
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (std::int64_t u = 0; u < n; ++u) {
        for (Vertex v : g.neighbors(u)) c(u, v) = 1.0;
        c(u, n + u) = 1.0 - static_cast<double>(g.degree(u));
        c(n + u, u) = 1.0;
    }
    return c;
}

void require_simple(const Graph& g, const char* who) {
    if (g.has_loops)
        throw validation_error(std::string(who) + ": self-loops are not supported");
}

}  // namespace

std::string NbSpectrum::to_json() const {
    nlohmann::json j;
    j["lambda1"] = lambda1;
    j["abs_lambda2"] = abs_lambda2;
    j["method"] = method;
    j["residual"] = residual;
    return j.dump();
}

std::vector<std::complex<double>> nb_companion_eigenvalues(const Graph& g) {
    require_simple(g, "nb_companion_eigenvalues");
    if (g.n < 1 || g.n > 2000)
        throw validation_error("nb_companion_eigenvalues: order must be in [1, 2000], got " +
                               std::to_string(g.n));
    Eigen::EigenSolver<Eigen::MatrixXd> es(companion_matrix(g));
    if (es.info() != Eigen::Success)
        throw numerical_error("nb_companion_eigenvalues: eigensolve failed");
    std::vector<std::complex<double>> out(es.eigenvalues().data(),
                                          es.eigenvalues().data() + 2 * g.n);
    return out;
}

NbSpectrum nb_top_two(const Graph& g, std::int64_t dense_cutoff) {
    require_simple(g, "nb_top_two");
    if (g.edge_count() < 2)
        throw validation_error("nb_top_two: graph needs at least 2 edges");

    InducedSubgraph core = two_core(g);
    const Graph& c = core.graph;
    const std::int64_t m_core = c.edge_count();
    if (c.n == 0) return {0.0, 0.0, "dense_companion", 0.0};

    if (c.n <= dense_cutoff) {
        Eigen::EigenSolver<Eigen::MatrixXd> es(companion_matrix(c));
        if (es.info() != Eigen::Success)
            throw numerical_error("nb_top_two: companion eigensolve failed");
        std::int64_t perron = -1;
        double l1 = -1.0;
        for (std::int64_t i = 0; i < 2 * c.n; ++i) {
            std::complex<double> z = es.eigenvalues()(i);
            if (std::abs(z.imag()) <= 1e-6 * (1.0 + std::abs(z)) && z.real() > l1) {
                l1 = z.real();
                perron = i;
            }
        }
        double l2 = 0.0;
        for (std::int64_t i = 0; i < 2 * c.n; ++i)
            if (i != perron) l2 = std::max(l2, std::abs(es.eigenvalues()(i)));
        if (m_core > c.n) l2 = std::max(l2, 1.0);
        return {l1, l2, "dense_companion", 0.0};
    }

    DirEdges d = build_dir(c);
    PerronPair right = perron_vector(d, false);
    PerronPair left = perron_vector(d, true);
    SecondModulus second =
        arnoldi_second(d, right, left, kArnoldiSteps, derive_seed(kNbSeed, 0xA51));
    double l2 = second.value;
    if (m_core > c.n) l2 = std::max(l2, 1.0);
    double residual = std::max({right.residual, left.residual, second.residual});
    return {right.lambda, l2, "iterative", residual};
}

std::int64_t nb_closed_walks(const Graph& g, std::int64_t m) {
    require_simple(g, "nb_closed_walks");
    if (m < 1) throw validation_error("nb_closed_walks: m must be >= 1, got " + std::to_string(m));
    InducedSubgraph core = two_core(g);
    const Graph& c = core.graph;
    if (c.n == 0) return 0;
    DirEdges d = build_dir(c);
    const std::int64_t nd = d.n_dir;
    const std::int64_t s = m / 2, t = m - s;

    // Stamped sparse integer vectors, reused across starting edges. An edge
    // can sit in two consecutive frontiers at once (walks, not paths), so
    // each step writes into the shared scratch pair and swaps; the frontier
    // being read is never modified.
    std::vector<std::int64_t> val_a(nd), val_b(nd), val_s(nd);
    std::vector<std::uint32_t> stamp_a(nd, 0), stamp_b(nd, 0), stamp_s(nd, 0);
    std::vector<std::int32_t> idx_a, idx_b, idx_next;
    std::uint32_t token = 0;

    // Forward expansion by `steps` nonbacktracking moves; the final frontier
    // lands in (val, stamp, idx).
    auto expand = [&](std::int32_t start, std::int64_t steps, std::vector<std::int64_t>& val,
                      std::vector<std::uint32_t>& stamp, std::vector<std::int32_t>& idx) {
        ++token;
        idx.assign(1, start);
        val[start] = 1;
        stamp[start] = token;
        for (std::int64_t step = 0; step < steps; ++step) {
            ++token;
            idx_next.clear();
            for (std::int32_t f : idx) {
                std::int64_t x = val[f];
                Vertex v = d.head[f];
                for (std::int64_t p = c.offsets[v]; p < c.offsets[v + 1]; ++p) {
                    if (c.adj[p] == d.tail[f]) continue;
                    std::int32_t f2 = d.out_ids[p];
                    if (stamp_s[f2] != token) {
                        stamp_s[f2] = token;
                        val_s[f2] = 0;
                        idx_next.push_back(f2);
                    }
                    if (__builtin_add_overflow(val_s[f2], x, &val_s[f2]))
                        throw numerical_error("nb_closed_walks: walk count overflow");
                }
            }
            idx.swap(idx_next);
            val.swap(val_s);
            stamp.swap(stamp_s);
        }
    };

    __int128 total = 0;
    for (std::int32_t e = 0; e < nd; ++e) {
        expand(e, s, val_a, stamp_a, idx_a);
        std::uint32_t token_a = token;
        // Walk reversal maps (B^t)_{f,e} to the forward count from rev(e)
        // landing on rev(f).
        expand(e ^ 1, t, val_b, stamp_b, idx_b);
        for (std::int32_t f : idx_a) {
            if (stamp_a[f] != token_a) continue;
            std::int32_t rf = f ^ 1;
            if (stamp_b[rf] == token)
                total += static_cast<__int128>(val_a[f]) * static_cast<__int128>(val_b[rf]);
        }
    }
    if (total > std::numeric_limits<std::int64_t>::max())
        throw numerical_error("nb_closed_walks: trace exceeds 64-bit range");
    return static_cast<std::int64_t>(total);
}

double cycle_count_statistic(const Graph& g, std::int64_t m) {
    if (m < 3) throw validation_error("cycle_count_statistic: m must be >= 3, got " +
                                      std::to_string(m));
    return static_cast<double>(nb_closed_walks(g, m)) / static_cast<double>(2 * m);
}

}  // namespace powerlab
