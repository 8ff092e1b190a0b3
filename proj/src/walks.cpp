#include "powerlab/walks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <string>
#include <utility>

#include "json.hpp"

#include "powerlab/errors.hpp"
#include "powerlab/powering.hpp"

namespace powerlab {

namespace {

constexpr std::int64_t kWalkTableMaxN = 2000;
constexpr std::int64_t kWalkTableMaxK = 8;
constexpr std::int64_t kSequenceGuard = 1'000'000;
constexpr std::int64_t kOracleGuard = 20'000'000;
constexpr std::int64_t kOracleMaxN = 40;

mpz_class factorial(std::int64_t n) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
    return f;
}

mpz_class catalan(std::int64_t n) {
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(2 * n),
                 static_cast<unsigned long>(n));
    return b / (n + 1);
}

mpz_class multinomial(std::int64_t total, const std::vector<std::int64_t>& parts) {
    mpz_class m = factorial(total);
    for (std::int64_t p : parts) m /= factorial(p);
    return m;
}

mpz_class int_pow(std::int64_t base, std::int64_t e) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(base),
                  static_cast<unsigned long>(e));
    return p;
}

// ||A^k e_x||^2 for k = 1..k_max on the (symmetric) graph p, exact. The
// int64 scatter path covers almost every input; on overflow the whole
// vertex is redone with big integers.
bool diag_walks_int64(const Graph& p, Vertex x, std::int64_t k_max,
                      std::vector<mpz_class>& out) {
    const std::int64_t n = p.n;
    std::vector<std::int64_t> cur(n, 0), nxt(n, 0);
    std::vector<Vertex> cur_supp, nxt_supp;
    std::vector<std::uint8_t> in_nxt(n, 0);
    cur[x] = 1;
    cur_supp.push_back(x);
    mpz_class acc, tmp;
    for (std::int64_t k = 1; k <= k_max; ++k) {
        for (Vertex u : cur_supp) {
            const std::int64_t val = cur[u];
            for (Vertex w : p.neighbors(u)) {
                if (!in_nxt[w]) {
                    in_nxt[w] = 1;
                    nxt_supp.push_back(w);
                }
                if (__builtin_add_overflow(nxt[w], val, &nxt[w])) return false;
            }
        }
        acc = 0;
        for (Vertex w : nxt_supp) {
            tmp = static_cast<long>(nxt[w]);
            mpz_addmul(acc.get_mpz_t(), tmp.get_mpz_t(), tmp.get_mpz_t());
        }
        out[k - 1] = acc;
        for (Vertex u : cur_supp) cur[u] = 0;
        cur.swap(nxt);
        cur_supp.swap(nxt_supp);
        for (Vertex w : cur_supp) in_nxt[w] = 0;
        nxt_supp.clear();
    }
    return true;
}

void diag_walks_mpz(const Graph& p, Vertex x, std::int64_t k_max,
                    std::vector<mpz_class>& out) {
    const std::int64_t n = p.n;
    std::vector<mpz_class> cur(n), nxt(n);
    cur[x] = 1;
    mpz_class acc;
    for (std::int64_t k = 1; k <= k_max; ++k) {
        for (std::int64_t u = 0; u < n; ++u) {
            if (cur[u] == 0) continue;
            for (Vertex w : p.neighbors(u)) nxt[w] += cur[u];
        }
        acc = 0;
        for (std::int64_t w = 0; w < n; ++w) {
            if (nxt[w] != 0) mpz_addmul(acc.get_mpz_t(), nxt[w].get_mpz_t(), nxt[w].get_mpz_t());
        }
        out[k - 1] = acc;
        cur.swap(nxt);
        for (std::int64_t w = 0; w < n; ++w) nxt[w] = 0;
    }
}

WalkCountTable diag_min_table(const Graph& p, std::int64_t r, std::int64_t k_max) {
    WalkCountTable table;
    table.r = r;
    table.k_max = k_max;
    table.t.assign(k_max + 1, mpz_class(0));
    table.t[0] = 1;
    table.argmin.assign(k_max + 1, 0);
    std::vector<mpz_class> diag(k_max);
    bool first = true;
    for (Vertex x = 0; x < p.n; ++x) {
        if (!diag_walks_int64(p, x, k_max, diag)) diag_walks_mpz(p, x, k_max, diag);
        for (std::int64_t k = 1; k <= k_max; ++k) {
            if (first || diag[k - 1] < table.t[k]) {
                table.t[k] = diag[k - 1];
                table.argmin[k] = x;
            }
        }
        first = false;
    }
    return table;
}

}  // namespace

std::string WalkCountTable::to_json() const {
    nlohmann::json j;
    j["r"] = r;
    j["k_max"] = k_max;
    nlohmann::json counts = nlohmann::json::array();
    for (const mpz_class& v : t) counts.push_back(v.get_str());
    j["t"] = counts;
    j["argmin"] = argmin;
    return j.dump();
}

WalkCountTable closed_walk_counts(const Graph& g, std::int64_t r, std::int64_t k_max,
                                  bool include_loops) {
    if (g.n < 1 || g.n > kWalkTableMaxN)
        throw validation_error("closed_walk_counts: n must be in [1, " +
                               std::to_string(kWalkTableMaxN) + "], got " +
                               std::to_string(g.n));
    if (k_max < 1 || k_max > kWalkTableMaxK)
        throw validation_error("closed_walk_counts: k_max must be in [1, " +
                               std::to_string(kWalkTableMaxK) + "], got " +
                               std::to_string(k_max));
    if (r < 1) throw validation_error("closed_walk_counts: r must be >= 1");
    Graph p = power_graph(g, r).graph;
    if (!include_loops) p = without_loops(p);
    return diag_min_table(p, r, k_max);
}

mpz_class closed_walks_at(const Graph& g, std::int64_t r, std::int64_t k, Vertex x,
                          bool include_loops) {
    if (x < 0 || x >= g.n)
        throw validation_error("closed_walks_at: vertex " + std::to_string(x) +
                               " out of range");
    if (k < 1 || k > kWalkTableMaxK)
        throw validation_error("closed_walks_at: k must be in [1, " +
                               std::to_string(kWalkTableMaxK) + "]");
    if (r < 1) throw validation_error("closed_walks_at: r must be >= 1");
    Graph p = power_graph(g, r).graph;
    if (!include_loops) p = without_loops(p);
    std::vector<mpz_class> diag(k);
    if (!diag_walks_int64(p, x, k, diag)) diag_walks_mpz(p, x, k, diag);
    return diag[k - 1];
}

double lambda2_walk_lower_bound(const Graph& g, std::int64_t r, std::int64_t k) {
    if (r < 1) throw validation_error("lambda2_walk_lower_bound: r must be >= 1");
    if (k < 1) throw validation_error("lambda2_walk_lower_bound: k must be >= 1");
    const std::int64_t diam = diameter(g);
    const std::int64_t shells = (diam + r - 1) / r;  // ceil(diam / r)
    if (2 * k >= shells)
        throw validation_error(
            "lambda2_walk_lower_bound: needs 2k < ceil(diam/r); got 2k = " +
            std::to_string(2 * k) + ", ceil(diam/r) = " + std::to_string(shells));
    Graph p = power_graph(g, r).graph;
    WalkCountTable table = diag_min_table(p, r, k);
    long exp2 = 0;
    const double mant = mpz_get_d_2exp(&exp2, table.t[k].get_mpz_t());
    const double kk = 2.0 * static_cast<double>(k);
    return std::pow(mant, 1.0 / kk) * std::exp2(static_cast<double>(exp2) / kk);
}

double lambda2_walk_lower_bound(const Graph& g, std::int64_t r) {
    if (r < 1) throw validation_error("lambda2_walk_lower_bound: r must be >= 1");
    const std::int64_t diam = diameter(g);
    const std::int64_t shells = (diam + r - 1) / r;
    const std::int64_t k = std::max<std::int64_t>(1, (shells - 1) / 2);
    return lambda2_walk_lower_bound(g, r, k);
}

std::vector<LengthChangeSequence> enumerate_restricted_sequences(std::int64_t r,
                                                                 std::int64_t k) {
    if (r < 1) throw validation_error("enumerate_restricted_sequences: r must be >= 1");
    if (k < 1) throw validation_error("enumerate_restricted_sequences: k must be >= 1");
    std::vector<LengthChangeSequence> out;
    const std::int64_t interior = 2 * k - 2;
    std::vector<std::int32_t> p(interior, 0);
    std::vector<std::int64_t> open(r + 1, 0);  // open[j]: unmatched +j so far
    std::int64_t total_open = 0;
    std::function<void(std::int64_t)> rec = [&](std::int64_t pos) {
        if (total_open > interior - pos) return;  // each +j still needs a -j
        if (pos == interior) {
            if (total_open != 0) return;
            if (static_cast<std::int64_t>(out.size()) >= kSequenceGuard)
                throw validation_error(
                    "enumerate_restricted_sequences: more than " +
                    std::to_string(kSequenceGuard) + " sequences; use the closed-form count");
            LengthChangeSequence seq;
            seq.p.reserve(2 * k);
            seq.p.push_back(static_cast<std::int32_t>(r));
            seq.p.insert(seq.p.end(), p.begin(), p.end());
            seq.p.push_back(static_cast<std::int32_t>(-r));
            seq.move_types.reserve(2 * k);
            for (std::int32_t pi : seq.p)
                seq.move_types.push_back(static_cast<std::int32_t>((pi + r) / 2));
            out.push_back(std::move(seq));
            return;
        }
        const std::int64_t step = 2;  // entries keep the parity of r
        for (std::int64_t j = (r % 2 == 0) ? 0 : 1; j <= r; j += step) {
            if (j == 0) {
                p[pos] = 0;
                rec(pos + 1);
                continue;
            }
            p[pos] = static_cast<std::int32_t>(j);
            ++open[j];
            ++total_open;
            rec(pos + 1);
            --open[j];
            --total_open;
            if (open[j] > 0) {
                p[pos] = static_cast<std::int32_t>(-j);
                --open[j];
                --total_open;
                rec(pos + 1);
                ++open[j];
                ++total_open;
            }
        }
    };
    rec(0);
    std::sort(out.begin(), out.end(),
              [](const LengthChangeSequence& a, const LengthChangeSequence& b) {
                  return a.p < b.p;
              });
    return out;
}

namespace {

// Shared shape of the odd- and even-r sums: iterate compositions of `total`
// into `slots` parts and hand each composition to `term`.
void for_each_composition(std::int64_t total, std::int64_t slots,
                          std::vector<std::int64_t>& parts,
                          const std::function<void()>& term, std::int64_t at = 0) {
    if (at == slots - 1) {
        parts[at] = total;
        term();
        return;
    }
    for (std::int64_t v = 0; v <= total; ++v) {
        parts[at] = v;
        for_each_composition(total - v, slots, parts, term, at + 1);
    }
}

mpz_class restricted_family_sum(std::int64_t r, std::int64_t k,
                                const std::vector<std::int64_t>* delta) {
    const std::int64_t interior = 2 * k - 2;
    mpz_class sum = 0;
    if (r % 2 == 1) {
        const std::int64_t slots = (r + 1) / 2;  // j = 1, 3, ..., r
        std::vector<std::int64_t> n(slots, 0);
        std::vector<std::int64_t> parts(slots, 0);
        for_each_composition(k - 1, slots, n, [&] {
            for (std::int64_t s = 0; s < slots; ++s) parts[s] = 2 * n[s];
            mpz_class term = multinomial(interior, parts);
            for (std::int64_t s = 0; s < slots; ++s) {
                const std::int64_t j = 2 * s + 1;
                term *= catalan(n[s]);
                if (delta != nullptr && n[s] > 0)
                    term *= int_pow((*delta)[(r + j) / 2] * (*delta)[(r - j) / 2], n[s]);
            }
            sum += term;
        });
    } else {
        const std::int64_t slots = r / 2;  // j = 2, 4, ..., r
        std::vector<std::int64_t> n(slots, 0);
        std::vector<std::int64_t> parts(slots + 1, 0);
        for (std::int64_t n0 = 0; n0 <= interior; n0 += 2) {
            const std::int64_t rest = k - 1 - n0 / 2;
            if (rest < 0) break;
            for_each_composition(rest, slots, n, [&] {
                parts[0] = n0;
                for (std::int64_t s = 0; s < slots; ++s) parts[s + 1] = 2 * n[s];
                mpz_class term = multinomial(interior, parts);
                for (std::int64_t s = 0; s < slots; ++s) {
                    const std::int64_t j = 2 * (s + 1);
                    term *= catalan(n[s]);
                    if (delta != nullptr && n[s] > 0)
                        term *= int_pow((*delta)[(r + j) / 2] * (*delta)[(r - j) / 2], n[s]);
                }
                if (delta != nullptr && n0 > 0) term *= int_pow((*delta)[r / 2], n0);
                sum += term;
            });
        }
    }
    return sum;
}

}  // namespace

mpz_class restricted_sequence_count(std::int64_t r, std::int64_t k) {
    if (r < 1) throw validation_error("restricted_sequence_count: r must be >= 1");
    if (k < 1) throw validation_error("restricted_sequence_count: k must be >= 1");
    return restricted_family_sum(r, k, nullptr);
}

mpz_class tree_like_lower_bound_exact(const DeltaProfile& profile, std::int64_t r,
                                      std::int64_t k) {
    if (r < 1) throw validation_error("tree_like_lower_bound: r must be >= 1");
    if (k < 1) throw validation_error("tree_like_lower_bound: k must be >= 1");
    if (profile.r != r || static_cast<std::int64_t>(profile.delta.size()) != r + 1)
        throw validation_error("tree_like_lower_bound: profile has r = " +
                               std::to_string(profile.r) + ", expected " +
                               std::to_string(r));
    if (k == 1) return mpz_class(static_cast<long>(profile.delta[r]));
    return restricted_family_sum(r, k, &profile.delta);
}

double tree_like_lower_bound(const DeltaProfile& profile, std::int64_t r,
                             std::int64_t k) {
    const mpz_class exact = tree_like_lower_bound_exact(profile, r, k);
    return mpz_get_d(exact.get_mpz_t());
}

namespace {

// Candidate endpoints of an interior move of type m >= 1 whose frame ends
// (..., w, u): y with dist(u, y) = m and dist(w, y) >= m (unreachable
// counts as >= m).
struct MoveCandidateCache {
    const std::vector<std::vector<std::int32_t>>& dist;
    std::int64_t n;
    std::int64_t r;
    std::vector<std::vector<Vertex>> lists;
    std::vector<std::uint8_t> built;

    MoveCandidateCache(const std::vector<std::vector<std::int32_t>>& d, std::int64_t n_,
                       std::int64_t r_)
        : dist(d), n(n_), r(r_), lists(n_ * n_ * (r_ + 1)), built(n_ * n_ * (r_ + 1), 0) {}

    const std::vector<Vertex>& get(std::int64_t m, Vertex u, Vertex w) {
        const std::size_t key = static_cast<std::size_t>((u * n + w) * (r + 1) + m);
        if (!built[key]) {
            std::vector<Vertex>& list = lists[key];
            for (Vertex y = 0; y < n; ++y) {
                if (dist[u][y] != m) continue;
                const std::int32_t dw = dist[w][y];
                if (dw >= 0 && dw < m) continue;
                list.push_back(y);
            }
            built[key] = 1;
        }
        return lists[key];
    }
};

}  // namespace

TreeLikeOracle tree_like_walk_oracle(const Graph& g, Vertex x, std::int64_t r,
                                     std::int64_t k, CanonicalRule rule) {
    if (g.n < 1 || g.n > kOracleMaxN)
        throw validation_error("tree_like_walk_oracle: n must be in [1, " +
                               std::to_string(kOracleMaxN) + "], got " +
                               std::to_string(g.n));
    if (x < 0 || x >= g.n)
        throw validation_error("tree_like_walk_oracle: root " + std::to_string(x) +
                               " out of range");
    if (r < 1) throw validation_error("tree_like_walk_oracle: r must be >= 1");
    if (k < 1) throw validation_error("tree_like_walk_oracle: k must be >= 1");
    if (g.has_loops)
        throw validation_error("tree_like_walk_oracle: base graph must be loop-free");

    const std::int64_t n = g.n;
    std::vector<std::vector<std::int32_t>> dist(n);
    for (Vertex v = 0; v < n; ++v) dist[v] = bfs_distances(g, v);
    MoveCandidateCache cache(dist, n, r);

    // Greedy geodesic step: among neighbors one step closer to y, the rule
    // picks the smallest or largest id (rows are sorted, so first or last).
    auto canonical_step = [&](Vertex u, Vertex y, std::int32_t remaining) -> Vertex {
        auto row = g.neighbors(u);
        if (rule == CanonicalRule::kLexMin) {
            for (Vertex z : row)
                if (dist[z][y] == remaining - 1) return z;
        } else {
            for (auto it = row.rbegin(); it != row.rend(); ++it)
                if (dist[*it][y] == remaining - 1) return *it;
        }
        throw numerical_error("tree_like_walk_oracle: broken geodesic");
    };

    std::vector<Vertex> walk{x};
    std::vector<std::int32_t> types;
    std::vector<Vertex> endpoints{x};
    TreeLikeOracle result;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> hashes;
    std::int64_t ops = 0;

    auto mix = [](std::uint64_t h, std::uint64_t v) {
        h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    };
    auto record = [&] {
        ++result.total;
        ++result.by_move_types[types];
        std::uint64_t h1 = 0x243f6a8885a308d3ULL, h2 = 0x13198a2e03707344ULL;
        for (Vertex v : endpoints) {
            h1 = mix(h1, static_cast<std::uint64_t>(v) + 1);
            h2 = mix(h2, static_cast<std::uint64_t>(v) * 0x100000001b3ULL + 7);
        }
        hashes.emplace_back(h1, h2);
    };

    // Applies a move of type m ending at y; the walk currently ends with the
    // frame (v_0, ..., v_r) except before the first move, where it is just x.
    std::function<void(std::int64_t)> rec = [&](std::int64_t i) {
        if (++ops > kOracleGuard)
            throw validation_error("tree_like_walk_oracle: enumeration guard exceeded (" +
                                   std::to_string(kOracleGuard) + " moves)");
        if (i > 2 * k) {
            record();
            return;
        }
        const std::int64_t len = static_cast<std::int64_t>(walk.size()) - 1;
        auto apply_and_recurse = [&](std::int64_t m, Vertex y) {
            const std::int64_t drop = r - m;
            std::vector<Vertex> removed(walk.end() - drop, walk.end());
            walk.resize(walk.size() - drop);
            std::int64_t appended = 0;
            Vertex u = walk.back();
            std::int32_t remaining = static_cast<std::int32_t>(m);
            while (remaining > 0) {
                u = canonical_step(u, y, remaining);
                walk.push_back(u);
                ++appended;
                --remaining;
            }
            types.push_back(static_cast<std::int32_t>(m));
            endpoints.push_back(walk.back());
            rec(i + 1);
            endpoints.pop_back();
            types.pop_back();
            walk.resize(walk.size() - appended);
            walk.insert(walk.end(), removed.begin(), removed.end());
        };
        if (i == 1) {
            // First move: type r from the bare root, only dist(x, y) = r.
            for (Vertex y = 0; y < n; ++y) {
                if (dist[x][y] != r) continue;
                Vertex u = x;
                std::int32_t remaining = static_cast<std::int32_t>(r);
                std::int64_t appended = 0;
                while (remaining > 0) {
                    u = canonical_step(u, y, remaining);
                    walk.push_back(u);
                    ++appended;
                    --remaining;
                }
                types.push_back(static_cast<std::int32_t>(r));
                endpoints.push_back(y);
                rec(2);
                endpoints.pop_back();
                types.pop_back();
                walk.resize(walk.size() - appended);
            }
            return;
        }
        if (i == 2 * k) {
            if (len == r) apply_and_recurse(0, walk[0]);
            return;
        }
        for (std::int64_t m = 0; m <= r; ++m) {
            if (len + 2 * m - r < r) continue;
            if (m == 0) {
                apply_and_recurse(0, walk[len - r]);
                continue;
            }
            const Vertex vm = walk[len - r + m];
            const Vertex vm1 = walk[len - r + m - 1];
            for (Vertex y : cache.get(m, vm, vm1)) apply_and_recurse(m, y);
        }
    };
    rec(1);

    std::sort(hashes.begin(), hashes.end());
    result.injective =
        std::adjacent_find(hashes.begin(), hashes.end()) == hashes.end();
    return result;
}

}  // namespace powerlab
