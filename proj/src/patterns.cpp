#include "prio/patterns.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <random>
#include <stdexcept>

namespace prio {

namespace {

long long binom(int a, int b) {
    if (b < 0 || b > a) return 0;
    long long r = 1;
    for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
    return r;
}

int ceil_half(int n) { return (n + 1) / 2; }

// Published best-known counts, n = 4..15 rows, u = 1..7 columns (0 = no entry).
constexpr int kTableRowFirst = 4;
constexpr int kTableRowLast = 15;
constexpr std::array<std::array<int, 7>, 12> kCountTable = {{
    {4, 1, 0, 0, 0, 0, 0},      // n = 4
    {5, 2, 1, 0, 0, 0, 0},      // n = 5
    {6, 4, 1, 0, 0, 0, 0},      // n = 6
    {7, 7, 1, 1, 0, 0, 0},      // n = 7
    {8, 8, 2, 1, 0, 0, 0},      // n = 8
    {9, 12, 3, 1, 1, 0, 0},     // n = 9
    {10, 13, 6, 1, 1, 0, 0},    // n = 10
    {11, 17, 11, 2, 1, 1, 0},   // n = 11
    {12, 20, 12, 3, 1, 1, 0},   // n = 12
    {13, 26, 18, 4, 1, 1, 1},   // n = 13
    {14, 28, 28, 8, 2, 1, 1},   // n = 14
    {15, 35, 42, 15, 3, 1, 1},  // n = 15
}};

// Published pattern families, u = 2.
const std::vector<std::vector<std::vector<int>>> kFamiliesU2 = {
    /* n=5 */ {{0, 2, 3}, {1, 3, 4}},
    /* n=6 */ {{0, 1, 2}, {0, 3, 4}, {1, 3, 5}, {2, 4, 5}},
    /* n=7 */
    {{0, 1, 2}, {0, 3, 4}, {0, 5, 6}, {1, 3, 5}, {1, 4, 6}, {2, 3, 6}, {2, 4, 5}},
    /* n=8 */
    {{0, 1, 2}, {5, 6, 7}, {0, 3, 5}, {1, 3, 6}, {2, 3, 7}, {0, 4, 6}, {1, 4, 7}, {2, 4, 5}},
    /* n=9 */
    {{0, 1, 2}, {3, 4, 5}, {6, 7, 8}, {0, 3, 6}, {1, 4, 7}, {2, 5, 8},
     {0, 4, 8}, {1, 5, 6}, {2, 3, 7}, {0, 5, 7}, {1, 3, 8}, {2, 4, 6}},
};

// Published (2,15) listing; evidently partial (16 of 35), completed by search.
const std::vector<std::vector<int>> kFamilyU2N15 = {
    {3, 7, 11}, {3, 8, 12}, {3, 9, 13}, {3, 10, 14},
    {4, 7, 12}, {4, 8, 13}, {4, 9, 14}, {4, 10, 11},
    {5, 7, 13}, {5, 8, 14}, {5, 9, 11}, {5, 10, 12},
    {6, 7, 14}, {6, 8, 11}, {6, 9, 12}, {6, 10, 13},
};

// Published pattern families, u = 3 (n = 7..10).
const std::vector<std::vector<std::vector<int>>> kFamiliesU3 = {
    {{0, 1, 2, 3, 4}},
    {{0, 1, 2, 3, 4}, {0, 1, 5, 6, 7}},
    {{0, 1, 2, 3, 4}, {3, 4, 5, 6, 7}, {0, 1, 6, 7, 8}},
    {{0, 1, 2, 3, 4}, {0, 1, 5, 6, 7}, {1, 2, 5, 8, 9},
     {2, 3, 6, 7, 8}, {3, 4, 5, 6, 9}, {0, 4, 7, 8, 9}},
};

PermutationPattern make_pattern(int u, int n, std::vector<int> positions) {
    PermutationPattern p{n, u, std::move(positions)};
    validate_pattern(p);
    return p;
}

PatternFamily make_family(int u, int n, const std::vector<std::vector<int>>& positions,
                          Provenance prov) {
    PatternFamily f;
    f.n = n;
    f.u = u;
    f.provenance = prov;
    for (const auto& pos : positions) f.patterns.push_back(make_pattern(u, n, pos));
    f.builtin_count = prov == Provenance::builtin_table ? f.size() : 0;
    return f;
}

std::vector<int> iota_positions(int count, int start = 0) {
    std::vector<int> v(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) v[static_cast<std::size_t>(i)] = start + i;
    return v;
}

// ---------------------------------------------------------------------------
// Search machinery
// ---------------------------------------------------------------------------

struct DynBitset {
    std::vector<std::uint64_t> w;

    explicit DynBitset(int bits = 0) : w(static_cast<std::size_t>((bits + 63) / 64), 0) {}
    void set(int i) { w[static_cast<std::size_t>(i >> 6)] |= std::uint64_t(1) << (i & 63); }
    void reset(int i) { w[static_cast<std::size_t>(i >> 6)] &= ~(std::uint64_t(1) << (i & 63)); }
    bool test(int i) const { return (w[static_cast<std::size_t>(i >> 6)] >> (i & 63)) & 1; }
    void fill_first(int bits) {
        for (auto& x : w) x = ~std::uint64_t(0);
        if (bits & 63) w.back() = (std::uint64_t(1) << (bits & 63)) - 1;
    }
    void and_with(const DynBitset& o) {
        for (std::size_t k = 0; k < w.size(); ++k) w[k] &= o.w[k];
    }
    int count() const {
        int c = 0;
        for (auto x : w) c += std::popcount(x);
        return c;
    }
    int count_and(const DynBitset& o) const {
        int c = 0;
        for (std::size_t k = 0; k < w.size(); ++k) c += std::popcount(w[k] & o.w[k]);
        return c;
    }
    template <typename Fn>
    void for_each(Fn&& fn) const {
        for (std::size_t k = 0; k < w.size(); ++k)
            for (std::uint64_t x = w[k]; x; x &= x - 1)
                fn(static_cast<int>(k * 64) + std::countr_zero(x));
    }
};

// Recursive Johnson-style cap on how many compatible supports can pass
// through a fixed position.
int johnson_bound(int n, int m, int u) {
    if (u <= 1) return n / m;
    return static_cast<int>((static_cast<long long>(n) * johnson_bound(n - 1, m - 1, u - 1)) / m);
}

// Lexicographic combination scan; fn(mask) for every m-subset of [0, n).
template <typename Fn>
void for_each_support(int n, int m, Fn&& fn) {
    std::vector<int> idx = iota_positions(m);
    while (true) {
        std::uint32_t mask = 0;
        for (int p : idx) mask |= 1u << p;
        fn(mask);
        int i = m - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - m + i) --i;
        if (i < 0) break;
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < m; ++j)
            idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
}

std::vector<int> mask_positions(std::uint32_t mask) {
    std::vector<int> out;
    for (; mask; mask &= mask - 1) out.push_back(std::countr_zero(mask));
    return out;
}

struct Packing {
    int u, n, m, N;
    int per_block;
    long long total_usub;
    int point_cap;
    std::vector<std::uint32_t> cand;
    std::vector<DynBitset> compat;
    std::vector<DynBitset> through;

    Packing(int u_, int n_) : u(u_), n(n_), m(2 * u_ - 1) {
        cand.reserve(static_cast<std::size_t>(binom(n, m)));
        for_each_support(n, m, [&](std::uint32_t mask) { cand.push_back(mask); });
        N = static_cast<int>(cand.size());
        per_block = static_cast<int>(binom(m, u));
        total_usub = binom(n, u);
        point_cap = johnson_bound(n - 1, m - 1, u - 1);
        compat.assign(static_cast<std::size_t>(N), DynBitset(N));
        for (int i = 0; i < N; ++i)
            for (int j = i + 1; j < N; ++j)
                if (std::popcount(cand[static_cast<std::size_t>(i)] &
                                  cand[static_cast<std::size_t>(j)]) <= u - 1) {
                    compat[static_cast<std::size_t>(i)].set(j);
                    compat[static_cast<std::size_t>(j)].set(i);
                }
        through.assign(static_cast<std::size_t>(n), DynBitset(N));
        for (int i = 0; i < N; ++i)
            for (int p = 0; p < n; ++p)
                if (cand[static_cast<std::size_t>(i)] >> p & 1)
                    through[static_cast<std::size_t>(p)].set(i);
    }
};

// Deterministic cross-platform bounded draw (mt19937 is bit-exact; the
// library distributions are not).
std::uint32_t draw(std::mt19937& rng, std::uint32_t bound) {
    const std::uint32_t limit = UINT32_MAX - UINT32_MAX % bound;
    std::uint32_t x;
    do { x = rng(); } while (x >= limit);
    return x % bound;
}

constexpr std::uint32_t kPrimalSeed = 0x9e3779b9u;

// Seeded restart greedy with (1,2)-swap hill climbing. Pure incumbent
// provider: finds large families fast, proves nothing.
std::vector<int> primal_stage(const Packing& pk, int target, int restart_budget, int* restarts) {
    std::mt19937 rng(kPrimalSeed);
    std::vector<int> best;
    std::vector<int> order(static_cast<std::size_t>(pk.N));
    int r = 0;
    for (; r < restart_budget && static_cast<int>(best.size()) < target; ++r) {
        for (int i = 0; i < pk.N; ++i) order[static_cast<std::size_t>(i)] = i;
        for (int i = pk.N - 1; i > 0; --i)
            std::swap(order[static_cast<std::size_t>(i)],
                      order[static_cast<std::size_t>(draw(rng, static_cast<std::uint32_t>(i) + 1))]);
        DynBitset pool(pk.N);
        pool.fill_first(pk.N);
        std::vector<int> fam;
        for (int i : order)
            if (pool.test(i)) {
                fam.push_back(i);
                pool.and_with(pk.compat[static_cast<std::size_t>(i)]);
            }
        bool improved = true;
        while (improved && static_cast<int>(fam.size()) < target) {
            improved = false;
            for (std::size_t rm = 0; rm < fam.size() && !improved; ++rm) {
                DynBitset open(pk.N);
                open.fill_first(pk.N);
                for (std::size_t k = 0; k < fam.size(); ++k)
                    if (k != rm) open.and_with(pk.compat[static_cast<std::size_t>(fam[k])]);
                std::vector<int> adds;
                open.for_each([&](int i) { adds.push_back(i); });
                for (std::size_t a = 0; a < adds.size() && !improved; ++a)
                    for (std::size_t b = a + 1; b < adds.size() && !improved; ++b)
                        if (pk.compat[static_cast<std::size_t>(adds[a])].test(adds[b])) {
                            fam.erase(fam.begin() + static_cast<std::ptrdiff_t>(rm));
                            fam.push_back(adds[a]);
                            fam.push_back(adds[b]);
                            improved = true;
                        }
            }
        }
        if (fam.size() > best.size()) best = fam;
    }
    if (restarts) *restarts = r;
    std::sort(best.begin(), best.end());
    return best;
}

// Lexicographic branch-and-bound. Bounds: u-subset capacity and
// per-point Johnson degree caps. target = 0 means prove a maximum.
struct BranchAndBound {
    const Packing& pk;
    long long budget;
    int target;
    long long nodes = 0;
    bool budget_hit = false;
    bool target_hit = false;
    std::vector<int> chosen;
    std::vector<int> best;
    std::vector<int> deg;

    BranchAndBound(const Packing& pk_, long long budget_, int target_)
        : pk(pk_), budget(budget_), target(target_), deg(static_cast<std::size_t>(pk_.n), 0) {}

    int goal() const { return target ? target : static_cast<int>(best.size()) + 1; }

    bool dfs(DynBitset pool, int lo) {
        if (++nodes > budget) { budget_hit = true; return false; }
        if (chosen.size() > best.size()) {
            best = chosen;
            if (target && static_cast<int>(best.size()) >= target) {
                target_hit = true;
                return false;
            }
        }
        int need = goal() - static_cast<int>(chosen.size());
        if ((pk.total_usub - static_cast<long long>(chosen.size()) * pk.per_block) / pk.per_block <
            need)
            return true;
        int pool_count = pool.count();
        if (pool_count < need) return true;
        long long slots = 0;
        for (int p = 0; p < pk.n; ++p) {
            int r = pk.point_cap - deg[static_cast<std::size_t>(p)];
            if (r > 0) {
                int a = pool.count_and(pk.through[static_cast<std::size_t>(p)]);
                slots += std::min(r, a);
            }
        }
        if (slots / pk.m < need) return true;
        for (int wi = lo >> 6; wi < static_cast<int>(pool.w.size()); ++wi) {
            std::uint64_t word = pool.w[static_cast<std::size_t>(wi)];
            if (wi == (lo >> 6)) word &= ~((std::uint64_t(1) << (lo & 63)) - 1);
            while (word) {
                const int i = wi * 64 + std::countr_zero(word);
                word &= word - 1;
                need = goal() - static_cast<int>(chosen.size());
                if (pool_count < need) return true;
                bool fits = true;
                for (int p : mask_positions(pk.cand[static_cast<std::size_t>(i)]))
                    if (deg[static_cast<std::size_t>(p)] + 1 > pk.point_cap) { fits = false; break; }
                if (fits) {
                    DynBitset next = pool;
                    next.and_with(pk.compat[static_cast<std::size_t>(i)]);
                    for (int p : mask_positions(pk.cand[static_cast<std::size_t>(i)]))
                        ++deg[static_cast<std::size_t>(p)];
                    chosen.push_back(i);
                    const bool keep = dfs(std::move(next), i + 1);
                    chosen.pop_back();
                    for (int p : mask_positions(pk.cand[static_cast<std::size_t>(i)]))
                        --deg[static_cast<std::size_t>(p)];
                    if (!keep) return false;
                }
                pool.reset(i);
                --pool_count;
            }
        }
        return true;
    }

    void run(const std::vector<int>& seed, const std::vector<int>& incumbent) {
        best = incumbent;
        DynBitset pool(pk.N);
        pool.fill_first(pk.N);
        for (int i : seed) {
            chosen.push_back(i);
            pool.and_with(pk.compat[static_cast<std::size_t>(i)]);
            for (int p : mask_positions(pk.cand[static_cast<std::size_t>(i)]))
                ++deg[static_cast<std::size_t>(p)];
        }
        if (static_cast<int>(chosen.size()) > static_cast<int>(best.size())) best = chosen;
        dfs(std::move(pool), 0);
    }
};

constexpr long long kMaxExactSupports = 100000;

void check_search_args(int u, int n) {
    if (n < 2 || n > kMaxLength)
        throw std::invalid_argument("pattern search: n out of range");
    if (u < 1 || u > ceil_half(n))
        throw std::invalid_argument("pattern search: u out of range [1, ceil(n/2)]");
}

PatternFamily family_from_indices(const Packing& pk, const std::vector<int>& idx,
                                  Provenance prov, bool complete, int builtin_count) {
    PatternFamily f;
    f.n = pk.n;
    f.u = pk.u;
    f.provenance = prov;
    f.complete = complete;
    f.builtin_count = builtin_count;
    std::vector<int> sorted = idx;
    std::sort(sorted.begin(), sorted.end());
    for (int i : sorted)
        f.patterns.push_back(
            make_pattern(pk.u, pk.n, mask_positions(pk.cand[static_cast<std::size_t>(i)])));
    return f;
}

PatternFamily exact_impl(int u, int n, const std::vector<PermutationPattern>& seed,
                         const SearchLimits& limits, SearchStats* stats) {
    check_search_args(u, n);
    const int m = 2 * u - 1;
    if (binom(n, m) > kMaxExactSupports)
        throw std::invalid_argument("search_exact: more than 100000 candidate supports");
    Packing pk(u, n);

    std::vector<int> seed_idx;
    for (const auto& p : seed) {
        validate_pattern(p);
        if (p.n != n || p.u != u)
            throw std::invalid_argument("search_exact: seed pattern for wrong (u,n)");
        const std::uint32_t mask = p.mask();
        int found = -1;
        for (int i = 0; i < pk.N; ++i)
            if (pk.cand[static_cast<std::size_t>(i)] == mask) { found = i; break; }
        if (found < 0) throw std::invalid_argument("search_exact: seed not a support");
        seed_idx.push_back(found);
    }

    int restarts = 0;
    std::vector<int> incumbent;
    if (limits.target && seed.empty()) {
        // cheap deterministic lower bound first; heuristic only when needed
        DynBitset pool(pk.N);
        pool.fill_first(pk.N);
        for (int i = 0; i < pk.N; ++i)
            if (pool.test(i)) {
                incumbent.push_back(i);
                pool.and_with(pk.compat[static_cast<std::size_t>(i)]);
            }
        if (static_cast<int>(incumbent.size()) < *limits.target) {
            auto climbed = primal_stage(pk, *limits.target, limits.restart_budget, &restarts);
            if (climbed.size() > incumbent.size()) incumbent = std::move(climbed);
        }
    }

    const int target = limits.target.value_or(0);
    bool complete = false;
    std::vector<int> result;
    if (target && static_cast<int>(incumbent.size()) >= target) {
        result = incumbent;
    } else {
        BranchAndBound bb(pk, limits.node_budget, target);
        bb.run(seed_idx, incumbent);
        result = bb.best;
        complete = !bb.budget_hit && !bb.target_hit && !target;
        if (stats) stats->nodes = bb.nodes;
    }
    if (stats) stats->restarts = restarts;
    return family_from_indices(pk, result, Provenance::exact, complete, 0);
}

}  // namespace

void validate_pattern(const PermutationPattern& p) {
    if (p.n < 2 || p.n > kMaxLength)
        throw std::invalid_argument("PermutationPattern: n out of range");
    if (p.u < 0 || p.u > ceil_half(p.n))
        throw std::invalid_argument("PermutationPattern: u out of range");
    const std::size_t expect = p.u == 0 ? 0u : static_cast<std::size_t>(2 * p.u - 1);
    if (p.positions.size() != expect)
        throw std::invalid_argument("PermutationPattern: wrong position count");
    for (std::size_t i = 0; i < p.positions.size(); ++i) {
        if (p.positions[i] < 0 || p.positions[i] >= p.n)
            throw std::invalid_argument("PermutationPattern: position out of range");
        if (i > 0 && p.positions[i] <= p.positions[i - 1])
            throw std::invalid_argument("PermutationPattern: positions not strictly ascending");
    }
}

std::string to_string(Provenance p) {
    switch (p) {
        case Provenance::builtin_table: return "builtin-table";
        case Provenance::greedy: return "greedy";
        case Provenance::exact: return "exact";
    }
    return "unknown";
}

bool verify_family(const PatternFamily& family, FamilyViolation* violation) {
    for (std::size_t i = 0; i < family.patterns.size(); ++i) {
        const auto& p = family.patterns[i];
        try {
            validate_pattern(p);
            if (p.n != family.n || p.u != family.u) throw std::invalid_argument("mismatched (u,n)");
        } catch (const std::invalid_argument&) {
            if (violation) *violation = {static_cast<int>(i), -1, true};
            return false;
        }
    }
    for (std::size_t i = 0; i < family.patterns.size(); ++i)
        for (std::size_t j = i + 1; j < family.patterns.size(); ++j) {
            const int shared = std::popcount(family.patterns[i].mask() & family.patterns[j].mask());
            if (shared > family.u - 1 || family.patterns[i] == family.patterns[j]) {
                if (violation)
                    *violation = {static_cast<int>(i), static_cast<int>(j), false};
                return false;
            }
        }
    return true;
}

bool has_table_M(int u, int n) {
    if (n < 2 || n > kMaxLength || u < 0 || u > ceil_half(n)) return false;
    if (u == 0 || u == 1 || u == ceil_half(n)) return true;
    return n >= kTableRowFirst && n <= kTableRowLast && u <= 7 &&
           kCountTable[static_cast<std::size_t>(n - kTableRowFirst)]
                      [static_cast<std::size_t>(u - 1)] != 0;
}

int table_M(int u, int n) {
    if (!has_table_M(u, n)) throw std::out_of_range("table_M: no entry for (u,n)");
    if (u == 0) return 1;
    if (u == ceil_half(n)) return 1;
    if (u == 1) return n;
    return kCountTable[static_cast<std::size_t>(n - kTableRowFirst)]
                      [static_cast<std::size_t>(u - 1)];
}

bool has_builtin_family(int u, int n) {
    if (n < 2 || n > kMaxLength || u < 0 || u > ceil_half(n)) return false;
    if (u == 0 || u == ceil_half(n) || u == 1) return true;
    if (u == 2) return (n >= 5 && n <= 9) || n == 15;
    if (u == 3) return n >= 7 && n <= 10;
    return false;
}

PatternFamily builtin_family(int u, int n) {
    if (!has_builtin_family(u, n))
        throw std::out_of_range("builtin_family: no shipped family for (u,n)");
    if (u == 0) {
        PatternFamily f;
        f.n = n;
        f.u = 0;
        f.patterns.push_back(make_pattern(0, n, {}));
        f.builtin_count = 1;
        return f;
    }
    if (u == ceil_half(n))
        return make_family(u, n, {iota_positions(2 * u - 1)}, Provenance::builtin_table);
    if (u == 1) {
        std::vector<std::vector<int>> singles;
        for (int p = n - 1; p >= 0; --p) singles.push_back({p});
        return make_family(1, n, singles, Provenance::builtin_table);
    }
    if (u == 2 && n == 15) {
        std::vector<PermutationPattern> seed;
        for (const auto& pos : kFamilyU2N15) seed.push_back(make_pattern(2, 15, pos));
        SearchLimits limits;
        limits.target = table_M(2, 15);
        PatternFamily f = search_exact_seeded(2, 15, seed, limits);
        f.provenance = Provenance::builtin_table;
        f.builtin_count = static_cast<int>(seed.size());
        f.complete = true;
        // keep the verbatim prefix first
        std::stable_partition(f.patterns.begin(), f.patterns.end(), [&](const auto& p) {
            return std::find(seed.begin(), seed.end(), p) != seed.end();
        });
        return f;
    }
    if (u == 2) return make_family(2, n, kFamiliesU2[static_cast<std::size_t>(n - 5)],
                                   Provenance::builtin_table);
    return make_family(3, n, kFamiliesU3[static_cast<std::size_t>(n - 7)],
                       Provenance::builtin_table);
}

PatternFamily search_greedy(int u, int n) {
    check_search_args(u, n);
    const int m = 2 * u - 1;
    PatternFamily f;
    f.n = n;
    f.u = u;
    f.provenance = Provenance::greedy;
    std::vector<std::uint32_t> accepted;
    for_each_support(n, m, [&](std::uint32_t mask) {
        for (std::uint32_t a : accepted)
            if (std::popcount(a & mask) > u - 1) return;
        accepted.push_back(mask);
    });
    for (std::uint32_t mask : accepted)
        f.patterns.push_back(make_pattern(u, n, mask_positions(mask)));
    return f;
}

PatternFamily search_exact(int u, int n, const SearchLimits& limits, SearchStats* stats) {
    return exact_impl(u, n, {}, limits, stats);
}

PatternFamily search_exact_seeded(int u, int n, const std::vector<PermutationPattern>& seed,
                                  const SearchLimits& limits, SearchStats* stats) {
    return exact_impl(u, n, seed, limits, stats);
}

}  // namespace prio
