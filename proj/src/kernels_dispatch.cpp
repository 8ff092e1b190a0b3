#include "powerlab/kernels.hpp"

#include <cstdlib>

#include "powerlab/errors.hpp"

namespace powerlab::kernels {

bool cpu_has_avx2() {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

namespace {

const KernelTable& select() {
    const char* forced = std::getenv("POWERLAB_SIMD");
    if (forced != nullptr) {
        const std::string name(forced);
        if (name == "scalar") return scalar_table;
        if (name == "avx2") {
            if (!cpu_has_avx2())
                throw validation_error("POWERLAB_SIMD=avx2 but the CPU lacks AVX2/FMA");
            return avx2_table;
        }
        if (name != "auto" && !name.empty())
            throw validation_error("POWERLAB_SIMD must be scalar, avx2 or auto, got '" + name + "'");
    }
    return cpu_has_avx2() ? avx2_table : scalar_table;
}

}  // namespace

const KernelTable& active() {
    static const KernelTable& chosen = select();
    return chosen;
}

const KernelTable& table_for(const std::string& name) {
    if (name == "scalar") return scalar_table;
    if (name == "avx2") {
        if (!cpu_has_avx2())
            throw validation_error("CPU lacks AVX2/FMA; the avx2 kernel table is unavailable");
        return avx2_table;
    }
    throw validation_error("unknown kernel table '" + name + "'");
}

}  // namespace powerlab::kernels
