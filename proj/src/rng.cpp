#include "powerlab/rng.hpp"

#include <numeric>

namespace powerlab {

std::vector<std::int64_t> RngStream::sample_distinct(std::int64_t n, std::int64_t c) {
    // Partial Fisher-Yates; consumes exactly c draws.
    std::vector<std::int64_t> pool(static_cast<std::size_t>(n));
    std::iota(pool.begin(), pool.end(), 0);
    for (std::int64_t i = 0; i < c; ++i) {
        std::int64_t j = i + static_cast<std::int64_t>(next_below(static_cast<std::uint64_t>(n - i)));
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
    }
    pool.resize(static_cast<std::size_t>(c));
    return pool;
}

}  // namespace powerlab
