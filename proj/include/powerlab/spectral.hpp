#pragma once

// Symmetric eigenvalue machinery: a matrix-free operator type, a top-k
// eigensolver (dense below 512, thick-restart Lanczos with full
// reorthogonalization above), Rayleigh quotients, the Weyl perturbation
// check, and the powered second-eigenvalue statistic.

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "powerlab/graph.hpp"
#include "powerlab/models.hpp"

namespace powerlab {

// apply writes y = M x for a symmetric M of order dim. The callable borrows
// whatever state it closes over; keep the owner alive for the solve.
struct LinearOperator {
    std::int64_t dim = 0;
    std::function<void(const double*, double*)> apply;
};

// Adjacency matvec over the CSR rows. A stored self-loop contributes x_u
// once, matching the unit diagonal of powered graphs. Borrows g.
LinearOperator csr_operator(const Graph& g);

struct SpectrumResult {
    std::vector<double> eigenvalues;                // descending
    std::vector<std::vector<double>> eigenvectors;  // orthonormal, length dim
    std::vector<double> residuals;                  // ||M v - lambda v||_2
    std::int64_t iterations = 0;                    // matvec count
    std::string to_json() const;
};

// Top-k eigenpairs by algebraic value. Residuals satisfy
// residual_i <= tol * (|lambda_1| + 1); if that cannot be reached within
// max_iter matvecs, throws numerical_error carrying the best residuals.
SpectrumResult top_eigs_sym(const LinearOperator& op, std::int64_t k,
                            double tol = 1e-8, std::int64_t max_iter = 5000,
                            std::uint64_t seed = 0);

// <op f, f> / <f, f>; rejects the zero vector.
double rayleigh(const LinearOperator& op, const std::vector<double>& f);

// lhs = |lambda_k(A(G+H)) - lambda_k(A(G))| with lambda_k the k-th largest
// (1-based), rhs = ||A_H|| for the signed toggle matrix (+1 added, -1
// removed edges). Weyl's inequality guarantees lhs <= rhs.
std::pair<double, double> weyl_gap(const Graph& g, const Perturbation& h,
                                   std::int64_t k);

// Top-k spectrum of the powered adjacency (unit diagonal included) of an
// already-connected graph, materializing the power only when its adjacency
// array stays small enough; beyond that the ball operator is applied
// implicitly.
SpectrumResult powered_top_eigs(const Graph& connected_g, std::int64_t r, std::int64_t k,
                                double tol = 1e-8, std::uint64_t seed = 0);

// lambda_2 of the powered adjacency on the largest component of g.
double lambda2_powered(const Graph& g, std::int64_t r, double tol = 1e-8,
                       std::uint64_t seed = 0);

}  // namespace powerlab
