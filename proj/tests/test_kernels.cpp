#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "powerlab/errors.hpp"
#include "powerlab/kernels.hpp"
#include "powerlab/rng.hpp"

using namespace powerlab;
namespace ker = powerlab::kernels;

namespace {

struct Csr {
    std::vector<std::int64_t> offs;
    std::vector<std::int32_t> cols;
    std::int64_t n = 0;
};

Csr random_pattern(std::int64_t n, double density, std::uint64_t seed) {
    RngStream rng(seed);
    Csr m;
    m.n = n;
    m.offs.assign(1, 0);
    for (std::int64_t i = 0; i < n; ++i) {
        for (std::int64_t j = 0; j < n; ++j)
            if (rng.bernoulli(density)) m.cols.push_back(static_cast<std::int32_t>(j));
        m.offs.push_back(static_cast<std::int64_t>(m.cols.size()));
    }
    return m;
}

std::vector<double> random_vec(std::int64_t n, std::uint64_t seed) {
    RngStream rng(seed);
    std::vector<double> v(n);
    for (auto& x : v) x = rng.next_double() * 2.0 - 1.0;
    return v;
}

}  // namespace

TEST_CASE("scalar spmv matches a dense reference") {
    const std::int64_t n = 37;
    Csr m = random_pattern(n, 0.2, 11);
    auto x = random_vec(n, 12);
    std::vector<double> y(n), want(n, 0.0);
    for (std::int64_t i = 0; i < n; ++i)
        for (std::int64_t p = m.offs[i]; p < m.offs[i + 1]; ++p) want[i] += x[m.cols[p]];
    ker::scalar_table.spmv_pattern(n, m.offs.data(), m.cols.data(), x.data(), y.data());
    for (std::int64_t i = 0; i < n; ++i) CHECK(y[i] == doctest::Approx(want[i]).epsilon(1e-14));
}

TEST_CASE("scalar blas1 kernels match std computations") {
    const std::int64_t n = 1001;
    auto x = random_vec(n, 21);
    auto y = random_vec(n, 22);

    double want_dot = 0.0, want_nrm = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
        want_dot += x[i] * y[i];
        want_nrm += x[i] * x[i];
    }
    CHECK(ker::scalar_table.dot(n, x.data(), y.data()) == doctest::Approx(want_dot).epsilon(1e-12));
    CHECK(ker::scalar_table.nrm2(n, x.data()) ==
          doctest::Approx(std::sqrt(want_nrm)).epsilon(1e-12));

    auto y2 = y;
    ker::scalar_table.axpy(n, 0.75, x.data(), y2.data());
    for (std::int64_t i = 0; i < n; ++i)
        CHECK(y2[i] == doctest::Approx(y[i] + 0.75 * x[i]).epsilon(1e-13));

    auto x2 = x;
    ker::scalar_table.scal(n, -1.5, x2.data());
    for (std::int64_t i = 0; i < n; ++i)
        CHECK(x2[i] == doctest::Approx(-1.5 * x[i]).epsilon(1e-13));
}

TEST_CASE("avx2 kernels agree with scalar on awkward lengths") {
    if (!ker::cpu_has_avx2()) return;  // nothing to compare on this host
    const ker::KernelTable& simd = ker::table_for("avx2");
    const ker::KernelTable& ref = ker::table_for("scalar");

    for (std::int64_t n : {1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 32, 33, 255, 1024, 1023}) {
        auto x = random_vec(n, 100 + static_cast<std::uint64_t>(n));
        auto y = random_vec(n, 200 + static_cast<std::uint64_t>(n));

        CHECK(simd.dot(n, x.data(), y.data()) ==
              doctest::Approx(ref.dot(n, x.data(), y.data())).epsilon(1e-12));
        CHECK(simd.nrm2(n, x.data()) ==
              doctest::Approx(ref.nrm2(n, x.data())).epsilon(1e-12));

        auto ys = y, yr = y;
        simd.axpy(n, 1.25, x.data(), ys.data());
        ref.axpy(n, 1.25, x.data(), yr.data());
        for (std::int64_t i = 0; i < n; ++i) CHECK(ys[i] == doctest::Approx(yr[i]).epsilon(1e-13));

        auto xs = x, xr = x;
        simd.scal(n, 0.3, xs.data());
        ref.scal(n, 0.3, xr.data());
        for (std::int64_t i = 0; i < n; ++i) CHECK(xs[i] == doctest::Approx(xr[i]).epsilon(1e-13));
    }
}

TEST_CASE("avx2 spmv agrees with scalar on random patterns") {
    if (!ker::cpu_has_avx2()) return;
    const ker::KernelTable& simd = ker::table_for("avx2");
    const ker::KernelTable& ref = ker::table_for("scalar");
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const std::int64_t n = 64 + static_cast<std::int64_t>(seed) * 37;
        Csr m = random_pattern(n, 0.15, 500 + seed);
        auto x = random_vec(n, 600 + seed);
        std::vector<double> ys(n), yr(n);
        simd.spmv_pattern(n, m.offs.data(), m.cols.data(), x.data(), ys.data());
        ref.spmv_pattern(n, m.offs.data(), m.cols.data(), x.data(), yr.data());
        for (std::int64_t i = 0; i < n; ++i) CHECK(ys[i] == doctest::Approx(yr[i]).epsilon(1e-12));
    }
}

TEST_CASE("table_for rejects unknown kernel names") {
    CHECK_THROWS_AS(ker::table_for("sse9"), validation_error);
}

TEST_CASE("active table is one of the named tables") {
    const std::string name = ker::active().name;
    CHECK((name == "scalar" || name == "avx2"));
}
