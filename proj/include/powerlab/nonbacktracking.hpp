#pragma once

// Nonbacktracking operator B on directed edges: B_{e,f} = 1 when f continues
// e (head(e) = tail(f)) without immediate reversal (tail(e) != head(f)).
// Directed ids pair the two orientations of undirected edge i as 2i and
// 2i+1, so reversal is id ^ 1. The nonzero spectrum of B lives on the
// 2-core, which nb_top_two strips first; the dense route solves the
// 2n-dimensional companion [[A, I - D], [I, 0]], the iterative route runs
// power iteration for the Perron pair and a deflated Arnoldi sweep for the
// second modulus.

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "powerlab/graph.hpp"

namespace powerlab {

struct NbSpectrum {
    double lambda1 = 0.0;
    double abs_lambda2 = 0.0;
    std::string method;  // "dense_companion" or "iterative"
    // Dense solves report 0; the iterative path reports the larger of the
    // Perron residual and the Arnoldi residual estimate for the pair behind
    // abs_lambda2. Bulk-edge moduli of nonnormal B converge slowly, so this
    // is an estimate, not a strict backward-error certificate.
    double residual = 0.0;
    std::string to_json() const;
};

// lambda1(B) and |lambda2(B)|. Requires a loop-free graph with >= 2 edges.
// dense_cutoff is the largest 2-core order sent to the companion eigensolve;
// tests lower it to force the iterative path onto small graphs.
NbSpectrum nb_top_two(const Graph& g, std::int64_t dense_cutoff = 2000);

// Eigenvalue multiset of the companion linearization of the given graph
// (n <= 2000, loop-free). Together with +/-1 of multiplicity m - n this is
// the spectrum of B when every component has a cycle; tree components leak
// spurious +/-1 pairs, so callers pass 2-core-closed graphs.
std::vector<std::complex<double>> nb_companion_eigenvalues(const Graph& g);

// Exact tr(B^m): closed nonbacktracking m-walks counted once per starting
// directed edge. Overflow past int64 raises numerical_error.
std::int64_t nb_closed_walks(const Graph& g, std::int64_t m);

// tr(B^m) / (2m), the cycle-count proxy statistic.
double cycle_count_statistic(const Graph& g, std::int64_t m);

}  // namespace powerlab
