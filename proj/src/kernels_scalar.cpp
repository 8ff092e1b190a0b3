#include "powerlab/kernels.hpp"

#include <cmath>

namespace powerlab::kernels {

namespace {

void spmv_pattern_scalar(std::int64_t n_rows, const std::int64_t* offs,
                         const std::int32_t* cols, const double* x, double* y) {
    for (std::int64_t i = 0; i < n_rows; ++i) {
        double acc = 0.0;
        for (std::int64_t p = offs[i]; p < offs[i + 1]; ++p) acc += x[cols[p]];
        y[i] = acc;
    }
}

double dot_scalar(std::int64_t n, const double* x, const double* y) {
    double acc = 0.0;
    for (std::int64_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

void axpy_scalar(std::int64_t n, double a, const double* x, double* y) {
    for (std::int64_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scal_scalar(std::int64_t n, double a, double* x) {
    for (std::int64_t i = 0; i < n; ++i) x[i] *= a;
}

double nrm2_scalar(std::int64_t n, const double* x) {
    double acc = 0.0;
    for (std::int64_t i = 0; i < n; ++i) acc += x[i] * x[i];
    return std::sqrt(acc);
}

}  // namespace

const KernelTable scalar_table = {spmv_pattern_scalar, dot_scalar, axpy_scalar,
                                  scal_scalar, nrm2_scalar, "scalar"};

}  // namespace powerlab::kernels
