#pragma once

// Data-parallel inner loops used by the eigensolvers: pattern-only CSR
// matvec (all stored values are 1, so SpMV reduces to a gather-sum) and the
// BLAS-1 vector operations that dominate reorthogonalization.  Each kernel
// has a scalar reference implementation and an AVX2 variant; the active set
// is picked once at startup from CPUID and can be forced with the
// POWERLAB_SIMD environment variable ("scalar" or "avx2").  The two paths
// are equivalence-tested against each other.

#include <cstdint>
#include <string>

namespace powerlab::kernels {

struct KernelTable {
    // y[i] = sum_{p in [offs[i], offs[i+1])} x[cols[p]]
    void (*spmv_pattern)(std::int64_t n_rows, const std::int64_t* offs,
                         const std::int32_t* cols, const double* x, double* y);
    double (*dot)(std::int64_t n, const double* x, const double* y);
    void (*axpy)(std::int64_t n, double a, const double* x, double* y);
    void (*scal)(std::int64_t n, double a, double* x);
    double (*nrm2)(std::int64_t n, const double* x);
    const char* name;
};

extern const KernelTable scalar_table;
extern const KernelTable avx2_table;

bool cpu_has_avx2();

// Table selected from CPUID / POWERLAB_SIMD at first use.
const KernelTable& active();

// Test hook: returns the table for a named path ("scalar"/"avx2"), throws
// validation_error for unknown names or if the CPU lacks the instructions.
const KernelTable& table_for(const std::string& name);

inline void spmv_pattern(std::int64_t n_rows, const std::int64_t* offs,
                         const std::int32_t* cols, const double* x, double* y) {
    active().spmv_pattern(n_rows, offs, cols, x, y);
}
inline double dot(std::int64_t n, const double* x, const double* y) {
    return active().dot(n, x, y);
}
inline void axpy(std::int64_t n, double a, const double* x, double* y) {
    active().axpy(n, a, x, y);
}
inline void scal(std::int64_t n, double a, double* x) { active().scal(n, a, x); }
inline double nrm2(std::int64_t n, const double* x) { return active().nrm2(n, x); }

}  // namespace powerlab::kernels
