#pragma once

// Graph powering. The r-th power connects u and v whenever their distance in
// the base graph is at most r, and carries a self-loop at every vertex, so
// the powered adjacency matrix is the 0/1 indicator of (I + A)^r >= 1.
// power_graph materializes this with one depth-limited BFS per vertex; the
// ball operator below applies the same matrix without materializing it, for
// graphs whose power would not fit in memory.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "powerlab/graph.hpp"

namespace powerlab {

struct PoweredGraph {
    std::uint64_t base_hash = 0;
    std::int64_t r = 0;
    // True when every ball of radius r covers its whole component, i.e. the
    // power collapsed into disjoint cliques and carries no geometry.
    bool degenerate = false;
    Graph graph;
};

PoweredGraph power_graph(const Graph& g, std::int64_t r);

// y[u] = sum of x over the radius-r ball around u (self-loop included).
// Matches power_graph(g, r) exactly; apply() is not thread-safe because the
// BFS workspace is reused across calls.
class PoweredBallOperator {
public:
    PoweredBallOperator(const Graph& g, std::int64_t r);
    std::int64_t dim() const { return g_->n; }
    void apply(const double* x, double* y);

private:
    const Graph* g_;
    std::int64_t r_;
    std::vector<std::uint64_t> seen_;
    std::uint64_t token_ = 0;
    std::vector<Vertex> queue_;
    std::vector<std::int32_t> depth_;
};

// Estimated adjacency-array length of power_graph(g, r) from `sample`
// random balls (exact when sample >= n).
std::int64_t powered_nnz_estimate(const Graph& g, std::int64_t r, std::int64_t sample,
                                  std::uint64_t seed);

// When the base graph is d-regular with girth > 2r, the powered adjacency is
// a polynomial in the base adjacency: p_0 = I, p_1 = A + I, and
// p_k = A p_{k-1} - (d-1) p_{k-2}. power_poly_matrix evaluates that
// polynomial densely (and checks the hypothesis); power_poly_eval runs the
// same recurrence on a scalar; power_poly_sup_bound is the closed-form bound
// (d-1)^(r/2) * (1 + r + r/sqrt(d-1)) valid for |x| <= 2 sqrt(d-1).
Eigen::MatrixXd power_poly_matrix(const Graph& g, std::int64_t r);
double power_poly_eval(std::int64_t r, std::int64_t d, double x);
double power_poly_sup_bound(std::int64_t r, std::int64_t d);

}  // namespace powerlab
