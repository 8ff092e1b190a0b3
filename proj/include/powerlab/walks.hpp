#pragma once

// Closed-walk counting in powered graphs: exact per-vertex walk tables, the
// restricted family of length-change sequences with its multinomial-Catalan
// count, and a brute-force oracle that simulates canonically constructed
// walk sequences on tiny graphs.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "powerlab/graph.hpp"

namespace powerlab {

struct WalkCountTable {
    std::int64_t r = 0;
    std::int64_t k_max = 0;
    std::vector<mpz_class> t;     // t[k] = min over vertices of closed 2k-walks, t[0] = 1
    std::vector<Vertex> argmin;   // witness vertex per k (argmin[0] = 0)
    std::string to_json() const;  // counts as decimal strings
};

// Exact diagonal minima of (A^(r))^(2k) for k = 1..k_max. include_loops
// keeps the powered unit diagonal (the t_{2k}^{(r)} convention); with it
// off, the table describes the loop-free powered adjacency, which for r = 1
// is the plain adjacency matrix. Guards: n <= 2000, k_max <= 8.
WalkCountTable closed_walk_counts(const Graph& g, std::int64_t r, std::int64_t k_max,
                                  bool include_loops = true);

// Single diagonal entry ((A^(r))^(2k))_{xx}, same conventions as the table.
mpz_class closed_walks_at(const Graph& g, std::int64_t r, std::int64_t k, Vertex x,
                          bool include_loops = true);

// (t_{2k}^{(r)})^(1/2k), valid as a lower bound on lambda_2(G^(r)) when
// 2k < ceil(diam(g)/r); violating that raises validation_error naming the
// constraint. The overload without k picks the largest legal k.
double lambda2_walk_lower_bound(const Graph& g, std::int64_t r, std::int64_t k);
double lambda2_walk_lower_bound(const Graph& g, std::int64_t r);

struct LengthChangeSequence {
    std::vector<std::int32_t> p;           // p_i = 2 m_i - r, i = 1..2k
    std::vector<std::int32_t> move_types;  // m_i = (p_i + r) / 2
};

// The restricted family: p_1 = r, p_2k = -r, the +-j subsequence of every
// j > 0 is a Dyck word (for +-r after dropping the boundary entries), and
// p_i = 0 moves of type r/2 appear only for even r. Count must match
// restricted_sequence_count; enumeration beyond 10^6 sequences raises
// validation_error.
std::vector<LengthChangeSequence> enumerate_restricted_sequences(std::int64_t r,
                                                                 std::int64_t k);

// Multinomial-Catalan count of the restricted family (exact).
mpz_class restricted_sequence_count(std::int64_t r, std::int64_t k);

// Lower bound on t_{2k}^{(r)} from the delta profile: the restricted-family
// sum with each interior +-j pair weighted by delta^((r+j)/2) *
// delta^((r-j)/2) and each zero move by delta^(r/2); the boundary +-r pair
// carries no factor. k = 1 degenerates to the single sequence (r, -r),
// worth delta^(r). Valid only when delta^(r) >= 1; with delta^(r) = 0 no
// tree-like walk exists and the formula can exceed the true count.
mpz_class tree_like_lower_bound_exact(const DeltaProfile& profile, std::int64_t r,
                                      std::int64_t k);
double tree_like_lower_bound(const DeltaProfile& profile, std::int64_t r, std::int64_t k);

enum class CanonicalRule { kLexMin, kLexMax };

struct TreeLikeOracle {
    std::int64_t total = 0;  // sequences of r-canonically constructed walks
    bool injective = true;   // endpoint map collision-free on the enumerated set
    std::map<std::vector<std::int32_t>, std::int64_t> by_move_types;
};

// Direct simulation of every sequence of r-canonically constructed walks
// rooted at x, under a deterministic canonical-path rule (greedy
// lexicographic). Tiny instances only (n <= 40); enumeration work beyond an
// internal guard raises validation_error.
TreeLikeOracle tree_like_walk_oracle(const Graph& g, Vertex x, std::int64_t r,
                                     std::int64_t k,
                                     CanonicalRule rule = CanonicalRule::kLexMin);

}  // namespace powerlab
