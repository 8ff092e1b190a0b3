#include "powerlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <Eigen/Dense>

#include "json.hpp"
#include "powerlab/errors.hpp"
#include "powerlab/kernels.hpp"
#include "powerlab/powering.hpp"
#include "powerlab/rng.hpp"

namespace powerlab {

namespace {

namespace ker = kernels;

constexpr std::int64_t kDenseCutoff = 512;
// Powered graphs whose adjacency array would exceed this stay implicit.
constexpr std::int64_t kMaterializeNnzCap = 60'000'000;
// Cap on basis storage (doubles) for the Lanczos workspace.
constexpr std::int64_t kBasisDoubleCap = 60'000'000;

constexpr std::uint64_t kTagLanczos = 0x6C616E637A6F73ULL;
constexpr std::uint64_t kTagNnzProbe = 0x6E6E7A70726F62ULL;

std::string format_residuals(const std::vector<double>& rs) {
    std::string s;
    char buf[48];
    for (std::size_t i = 0; i < rs.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%s%.3e", i ? ", " : "", rs[i]);
        s += buf;
    }
    return s;
}

SpectrumResult dense_solve(const LinearOperator& op, std::int64_t k) {
    const std::int64_t n = op.dim;
    Eigen::MatrixXd m(n, n);
    std::vector<double> unit(n, 0.0), col(n);
    for (std::int64_t j = 0; j < n; ++j) {
        unit[j] = 1.0;
        op.apply(unit.data(), col.data());
        unit[j] = 0.0;
        for (std::int64_t i = 0; i < n; ++i) m(i, j) = col[i];
    }
    double scale = n ? m.cwiseAbs().maxCoeff() : 0.0;
    double asym = n ? (m - m.transpose()).cwiseAbs().maxCoeff() : 0.0;
    if (asym > 1e-8 * (scale + 1.0)) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.3e", asym);
        throw validation_error(
            std::string("top_eigs_sym: operator is not symmetric (max asymmetry ") +
            buf + ")");
    }
    Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    if (es.info() != Eigen::Success)
        throw numerical_error("top_eigs_sym: dense eigensolve failed");

    SpectrumResult out;
    out.iterations = n;
    for (std::int64_t i = 0; i < k; ++i) {
        std::int64_t idx = n - 1 - i;
        double lambda = es.eigenvalues()(idx);
        Eigen::VectorXd v = es.eigenvectors().col(idx);
        out.eigenvalues.push_back(lambda);
        out.residuals.push_back((sym * v - lambda * v).norm());
        out.eigenvectors.emplace_back(v.data(), v.data() + n);
    }
    return out;
}

SpectrumResult lanczos_solve(const LinearOperator& op, std::int64_t k, double tol,
                             std::int64_t max_iter, std::uint64_t seed) {
    const std::int64_t n = op.dim;

    std::int64_t m = std::max<std::int64_t>(2 * k + 32, k + 2);
    if (m * n > kBasisDoubleCap) m = std::max<std::int64_t>(k + 2, kBasisDoubleCap / n);
    m = std::min(m, n);

    std::vector<double> basis(static_cast<std::size_t>(m + 1) * n);
    auto row = [&](std::int64_t i) { return basis.data() + static_cast<std::size_t>(i) * n; };
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    std::vector<double> w(n), coeff(m + 1);

    RngStream rng(derive_seed(seed, kTagLanczos));
    // Fills v with a unit vector orthogonal to basis rows [0, upto).
    auto fresh_direction = [&](double* v, std::int64_t upto) {
        for (int attempt = 0; attempt < 16; ++attempt) {
            for (std::int64_t i = 0; i < n; ++i) v[i] = rng.next_double() - 0.5;
            for (int pass = 0; pass < 2; ++pass)
                for (std::int64_t i = 0; i < upto; ++i)
                    ker::axpy(n, -ker::dot(n, v, row(i)), row(i), v);
            double nv = ker::nrm2(n, v);
            if (nv > 1e-6) {
                ker::scal(n, 1.0 / nv, v);
                return;
            }
        }
        throw numerical_error("top_eigs_sym: could not generate a fresh basis direction");
    };

    fresh_direction(row(0), 0);

    std::int64_t retained = 0;
    std::int64_t matvecs = 0;
    std::vector<double> best_residuals;
    const std::int64_t block = 4096;
    std::vector<double> scratch(static_cast<std::size_t>(m) * block);

    for (;;) {
        double beta_last = 0.0;
        for (std::int64_t j = retained; j < m; ++j) {
            op.apply(row(j), w.data());
            ++matvecs;
            std::fill(coeff.begin(), coeff.begin() + j + 1, 0.0);
            for (int pass = 0; pass < 2; ++pass) {
                for (std::int64_t i = 0; i <= j; ++i) {
                    double h = ker::dot(n, w.data(), row(i));
                    ker::axpy(n, -h, row(i), w.data());
                    coeff[i] += h;
                }
            }
            for (std::int64_t i = 0; i < j; ++i) {
                t(i, j) = coeff[i];
                t(j, i) = coeff[i];
            }
            t(j, j) = coeff[j];
            double beta = ker::nrm2(n, w.data());
            if (beta <= 1e-12 * std::max(1.0, std::abs(coeff[j]))) {
                // Invariant subspace: carry on from a random direction. The
                // zero coupling keeps the captured Ritz pairs exact.
                fresh_direction(row(j + 1), j + 1);
                beta_last = 0.0;
                if (j + 1 < m) {
                    t(j + 1, j) = 0.0;
                    t(j, j + 1) = 0.0;
                }
            } else {
                ker::scal(n, 1.0 / beta, w.data());
                std::copy(w.data(), w.data() + n, row(j + 1));
                beta_last = beta;
                if (j + 1 < m) {
                    t(j + 1, j) = beta;
                    t(j, j + 1) = beta;
                }
            }
        }

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
        if (es.info() != Eigen::Success)
            throw numerical_error("top_eigs_sym: projected eigensolve failed");
        const auto& vals = es.eigenvalues();    // ascending
        const auto& vecs = es.eigenvectors();
        double thresh = tol * (std::abs(vals(m - 1)) + 1.0);

        std::vector<double> est(k);
        for (std::int64_t i = 0; i < k; ++i)
            est[i] = std::abs(beta_last * vecs(m - 1, m - 1 - i));
        if (best_residuals.empty()) best_residuals = est;

        bool promising = true;
        for (double e : est) promising = promising && e <= thresh;
        if (promising) {
            SpectrumResult out;
            out.eigenvalues.assign(k, 0.0);
            out.eigenvectors.assign(k, std::vector<double>(n, 0.0));
            out.residuals.assign(k, 0.0);
            bool ok = true;
            for (std::int64_t i = 0; i < k; ++i) {
                out.eigenvalues[i] = vals(m - 1 - i);
                double* x = out.eigenvectors[i].data();
                for (std::int64_t j = 0; j < m; ++j)
                    ker::axpy(n, vecs(j, m - 1 - i), row(j), x);
                op.apply(x, w.data());
                ++matvecs;
                ker::axpy(n, -out.eigenvalues[i], x, w.data());
                out.residuals[i] = ker::nrm2(n, w.data());
                ok = ok && out.residuals[i] <= thresh;
            }
            if (ok) {
                out.iterations = matvecs;
                return out;
            }
            best_residuals = out.residuals;
        }

        if (matvecs >= max_iter)
            throw numerical_error("top_eigs_sym: no convergence after " +
                                  std::to_string(matvecs) + " matvecs (best residuals " +
                                  format_residuals(best_residuals) + ")");

        // Thick restart: keep the top Ritz pairs, rebuilt blockwise in place,
        // and continue from the final residual direction in row m. The
        // couplings between the kept pairs and that direction re-emerge from
        // the reorthogonalization at the first extension step.
        std::int64_t keep = std::min<std::int64_t>(k + 5, m - 2);
        for (std::int64_t c0 = 0; c0 < n; c0 += block) {
            std::int64_t bl = std::min<std::int64_t>(block, n - c0);
            for (std::int64_t j = 0; j < m; ++j)
                std::copy(row(j) + c0, row(j) + c0 + bl,
                          scratch.data() + static_cast<std::size_t>(j) * bl);
            for (std::int64_t i = 0; i < keep; ++i) {
                double* dst = row(i) + c0;
                std::fill(dst, dst + bl, 0.0);
                for (std::int64_t j = 0; j < m; ++j) {
                    double y = vecs(j, m - 1 - i);
                    const double* src = scratch.data() + static_cast<std::size_t>(j) * bl;
                    for (std::int64_t c = 0; c < bl; ++c) dst[c] += y * src[c];
                }
            }
        }
        std::copy(row(m), row(m) + n, row(keep));
        for (int pass = 0; pass < 2; ++pass)
            for (std::int64_t i = 0; i < keep; ++i)
                ker::axpy(n, -ker::dot(n, row(keep), row(i)), row(i), row(keep));
        double nv = ker::nrm2(n, row(keep));
        if (nv > 1e-6)
            ker::scal(n, 1.0 / nv, row(keep));
        else
            fresh_direction(row(keep), keep);
        t.setZero();
        for (std::int64_t i = 0; i < keep; ++i) t(i, i) = vals(m - 1 - i);
        retained = keep;
    }
}

// Largest |eigenvalue| of the signed toggle matrix, solved densely on the
// perturbation support.
double toggle_norm(const Graph& g, const Perturbation& h) {
    const std::int64_t c = static_cast<std::int64_t>(h.vertices.size());
    if (h.toggles.empty()) return 0.0;
    if (c > 4096)
        throw validation_error("weyl_gap: perturbation support too large for a dense norm (" +
                               std::to_string(c) + " vertices)");
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(c, c);
    auto index_of = [&](Vertex v) {
        return std::lower_bound(h.vertices.begin(), h.vertices.end(), v) - h.vertices.begin();
    };
    for (const auto& [u, v] : h.toggles) {
        double sign = g.has_edge(u, v) ? -1.0 : 1.0;
        std::int64_t iu = index_of(u), iv = index_of(v);
        m(iu, iv) = sign;
        m(iv, iu) = sign;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    return std::max(std::abs(es.eigenvalues()(0)), std::abs(es.eigenvalues()(c - 1)));
}

double kth_largest_eigenvalue(const Graph& g, std::int64_t k, std::uint64_t seed) {
    LinearOperator op = csr_operator(g);
    if (g.n <= 2048) {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(g.n, g.n);
        for (std::int64_t u = 0; u < g.n; ++u)
            for (Vertex v : g.neighbors(u)) m(u, v) = 1.0;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
        return es.eigenvalues()(g.n - k);
    }
    return top_eigs_sym(op, k, 1e-8, 5000, seed).eigenvalues[k - 1];
}

}  // namespace

LinearOperator csr_operator(const Graph& g) {
    const Graph* gp = &g;
    return {g.n, [gp](const double* x, double* y) {
                ker::spmv_pattern(gp->n, gp->offsets.data(), gp->adj.data(), x, y);
            }};
}

std::string SpectrumResult::to_json() const {
    nlohmann::json j;
    j["eigenvalues"] = eigenvalues;
    j["residuals"] = residuals;
    j["iterations"] = iterations;
    return j.dump();
}

SpectrumResult top_eigs_sym(const LinearOperator& op, std::int64_t k, double tol,
                            std::int64_t max_iter, std::uint64_t seed) {
    if (k < 1) throw validation_error("top_eigs_sym: k must be >= 1, got " + std::to_string(k));
    if (op.dim < k)
        throw validation_error("top_eigs_sym: operator dimension " + std::to_string(op.dim) +
                               " is smaller than k = " + std::to_string(k));
    if (!(tol > 0.0)) throw validation_error("top_eigs_sym: tol must be positive");
    if (max_iter < 1) throw validation_error("top_eigs_sym: max_iter must be >= 1");
    if (!op.apply) throw validation_error("top_eigs_sym: operator has no apply callback");
    if (op.dim <= kDenseCutoff) return dense_solve(op, k);
    return lanczos_solve(op, k, tol, max_iter, seed);
}

double rayleigh(const LinearOperator& op, const std::vector<double>& f) {
    if (static_cast<std::int64_t>(f.size()) != op.dim)
        throw validation_error("rayleigh: vector length " + std::to_string(f.size()) +
                               " does not match operator dimension " + std::to_string(op.dim));
    double ff = ker::dot(op.dim, f.data(), f.data());
    if (!(ff > 0.0)) throw validation_error("rayleigh: zero vector");
    std::vector<double> y(f.size());
    op.apply(f.data(), y.data());
    return ker::dot(op.dim, f.data(), y.data()) / ff;
}

std::pair<double, double> weyl_gap(const Graph& g, const Perturbation& h, std::int64_t k) {
    if (k < 1 || k > g.n)
        throw validation_error("weyl_gap: k must be in [1, " + std::to_string(g.n) +
                               "], got " + std::to_string(k));
    Graph perturbed = apply_perturbation(g, h);
    double before = kth_largest_eigenvalue(g, k, 0);
    double after = kth_largest_eigenvalue(perturbed, k, 0);
    return {std::abs(after - before), toggle_norm(g, h)};
}

SpectrumResult powered_top_eigs(const Graph& connected_g, std::int64_t r, std::int64_t k,
                                double tol, std::uint64_t seed) {
    if (connected_g.n < k)
        throw validation_error("powered_top_eigs: graph has fewer than k vertices");
    std::int64_t est =
        powered_nnz_estimate(connected_g, r, std::min<std::int64_t>(connected_g.n, 64),
                             derive_seed(seed, kTagNnzProbe));
    if (est <= kMaterializeNnzCap) {
        PoweredGraph p = power_graph(connected_g, r);
        return top_eigs_sym(csr_operator(p.graph), k, tol, 5000, seed);
    }
    PoweredBallOperator ball(connected_g, r);
    LinearOperator op{connected_g.n,
                      [&ball](const double* x, double* y) { ball.apply(x, y); }};
    return top_eigs_sym(op, k, tol, 5000, seed);
}

double lambda2_powered(const Graph& g, std::int64_t r, double tol, std::uint64_t seed) {
    InducedSubgraph sub = largest_component(g);
    if (sub.graph.n < 2)
        throw validation_error("lambda2_powered: largest component has fewer than 2 vertices");
    return powered_top_eigs(sub.graph, r, 2, tol, seed).eigenvalues[1];
}

}  // namespace powerlab
