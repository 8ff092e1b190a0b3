#pragma once

// Seeding discipline: every randomized routine takes an explicit 64-bit seed
// and derives any sub-streams it needs with derive_seed(master, tag, index).
// Draws go through RngStream, which implements its own bounded-integer and
// uniform-double sampling so that a (params, seed) pair reproduces the same
// object on any standard library.  std::uniform_int_distribution is
// deliberately avoided: its output is implementation-defined.

#include <cstdint>
#include <random>
#include <vector>

namespace powerlab {

constexpr std::uint64_t kSplitmixGamma = 0x9E3779B97F4A7C15ULL;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += kSplitmixGamma;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag, std::uint64_t index = 0) {
    std::uint64_t h = splitmix64(master ^ splitmix64(tag));
    return splitmix64(h ^ splitmix64(index * kSplitmixGamma + 1));
}

class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Unbiased integer in [0, n) by rejection.
    std::uint64_t next_below(std::uint64_t n) {
        if (n == 0) return 0;
        const std::uint64_t limit = n * ((~std::uint64_t{0}) / n);
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return next_double() < p; }

    bool bit() { return (engine_() >> 63) != 0; }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(next_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // First c entries of a random permutation of {0, .., n-1}.
    std::vector<std::int64_t> sample_distinct(std::int64_t n, std::int64_t c);

private:
    std::mt19937_64 engine_;
};

}  // namespace powerlab
