#pragma once

// Spectral lower and upper bounds for powered graphs: the delta-profile
// lower bound on lambda_2, the trig closed form of the regular-girth
// polynomial, the even-composition inequality behind the walk count, the
// perturbation bound for toggles on c vertices, and truncations of the
// clique-joined tree family with their spectral bands.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "json.hpp"

#include "powerlab/graph.hpp"
#include "powerlab/models.hpp"

namespace powerlab {

// CSV-flattener-friendly record shared by the bound subcommands.
struct BoundReport {
    std::string bound_name;
    nlohmann::json inputs;
    double value = 0.0;
    nlohmann::json witness;
    std::string to_json() const;
};

// sum_i sqrt(delta[i] * delta[r-i]) = (r+1) * d_hat^(r/2). The report flags
// whether diam(g) > 2r, the weakest regime in which the walk argument can
// bind; below that the powered graph may be complete and the bound vacuous.
double alon_boppana_bound(const Graph& g, std::int64_t r);
BoundReport alon_boppana_report(const Graph& g, std::int64_t r);

// Even-composition inequality: lhs = sum over even (2m_1..2m_k) summing to
// two_n of multinomial(two_n; 2m_1..2m_k) * prod x_i^(2m_i), rhs =
// (sum x_i)^two_n / 2^(k-1); lhs >= rhs, exact rationals.
std::pair<mpq_class, mpq_class> even_partition_bound(const std::vector<mpq_class>& xs,
                                                     std::int64_t two_n);

// Trig closed form of power_poly_eval for d-regular graphs of girth > 2r:
// with theta = arccos(x / (2 sqrt(d-1))),
// p(x) = (d-1)^(r/2) (cos r.theta + (1/sqrt(d-1) + cos theta) sin r.theta / sin theta),
// finite at sin theta -> 0 by continuity. Requires |x| < 2 sqrt(d-1); for
// arguments outside the oscillatory window use power_poly_eval.
double girth_poly_bound(std::int64_t d, std::int64_t r, double x);

// Eigenvalue displacement bound for a perturbation touching c vertices:
// sum_{q=0}^{r-1} c * max_{0<=i<=q} sqrt(D^(i) D^(q-i)) with D^(i) the
// radius-i punctured ball maximum over h.vertices in the base graph.
double perturbation_power_bound(const Graph& g, const Perturbation& h, std::int64_t r);
BoundReport perturbation_power_report(const Graph& g, const Perturbation& h,
                                      std::int64_t r);

// c copies of the (d-1)-branching tree truncated at `depth`, roots joined by
// a c-clique. Roots have degree (c-1) + (d-1); internal vertices degree d.
// Vertex ids are level-ordered: roots first, then each level left to right.
Graph tdc_truncated(std::int64_t d, std::int64_t c, std::int64_t depth);

// Constant-slack band for lambda_1 of the r-th power of a deep truncation:
// [max((r+1) sqrt(d), c) * sqrt(d)^(r-1) / 3, 3 (c + (r+1) sqrt(d)) * sqrt(d)^(r-1)].
std::pair<double, double> tdc_power_band(std::int64_t d, std::int64_t c, std::int64_t r);

// Orbit-quotient route to lambda_1 of tdc_truncated(d, c, depth)^(r): depth
// levels are an equitable partition for every power (same-depth vertices are
// swapped by automorphisms), so the (depth+1)-dimensional quotient carries
// the Perron eigenvalue exactly. quotient[l][j] counts level-j vertices
// within distance r of a level-l representative.
std::vector<std::vector<double>> tdc_power_quotient(std::int64_t d, std::int64_t c,
                                                    std::int64_t depth, std::int64_t r);
double tdc_power_lambda1(std::int64_t d, std::int64_t c, std::int64_t depth,
                         std::int64_t r);

}  // namespace powerlab
