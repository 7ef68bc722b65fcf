#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "prio/bits.hpp"

namespace prio {

/// The 2u-1 non-zero column positions carried by one first-page
/// constituent code. Empty for u = 0.
struct PermutationPattern {
    int n = 0;
    int u = 0;
    std::vector<int> positions;  // sorted, distinct, each in [0, n)

    std::uint32_t mask() const {
        std::uint32_t m = 0;
        for (int p : positions) m |= 1u << p;
        return m;
    }

    friend bool operator==(const PermutationPattern&, const PermutationPattern&) = default;
};

/// Throws std::invalid_argument unless positions form a valid pattern
/// for (u, n): |positions| = 2u-1 (empty for u = 0), sorted, in range.
void validate_pattern(const PermutationPattern& p);

enum class Provenance { builtin_table, greedy, exact };

std::string to_string(Provenance p);

/// Family of patterns intended to be pairwise compatible
/// (|intersection| <= u-1).
struct PatternFamily {
    int n = 0;
    int u = 0;
    std::vector<PermutationPattern> patterns;
    Provenance provenance = Provenance::builtin_table;
    /// True when the family is a transcription or a proven maximum;
    /// false for budget- or target-limited search output.
    bool complete = true;
    /// Leading patterns transcribed verbatim from the published tables;
    /// the remainder (if any) is search-completed.
    int builtin_count = 0;

    int size() const { return static_cast<int>(patterns.size()); }
};

struct FamilyViolation {
    int first = -1;
    int second = -1;  // -1,-1 with malformed=true means a bad pattern
    bool malformed = false;
};

/// True iff every pattern is well-formed, no duplicates, and every
/// unordered pair shares at most u-1 positions.
bool verify_family(const PatternFamily& family, FamilyViolation* violation = nullptr);

/// Best-known family size, answered from shipped data only.
/// Covers u=0, u=1, u=ceil(n/2) for any n, and the published table for
/// 4 <= n <= 15, u <= 7. Throws std::out_of_range otherwise.
int table_M(int u, int n);
bool has_table_M(int u, int n);

/// Families shipped with the toolkit: u=0, u=1, u=ceil(n/2), the
/// published u=2 (n in {5..9,15}) and u=3 (n in {7..10}) tables.
/// The (2,15) family is the published 16 patterns completed to 35 by
/// search; builtin_count distinguishes the verbatim prefix.
/// Throws std::out_of_range when (u, n) is not shipped.
PatternFamily builtin_family(int u, int n);
bool has_builtin_family(int u, int n);

/// Deterministic scan of all supports in lexicographic order, accepting
/// each one compatible with everything accepted before.
PatternFamily search_greedy(int u, int n);

struct SearchLimits {
    long long node_budget = 50'000'000;
    int restart_budget = 4096;
    /// Stop as soon as a family of this size is found (best-known count
    /// from table_M, typically). Without a target the search proves a
    /// maximum by exhaustion, budget permitting.
    std::optional<int> target;
};

struct SearchStats {
    long long nodes = 0;
    int restarts = 0;
};

/// Branch-and-bound over the support compatibility graph, primed by a
/// deterministic seeded improvement heuristic. Candidate supports and
/// branch order are lexicographic; repeated runs give identical output.
/// Requires C(n, 2u-1) <= 100000.
PatternFamily search_exact(int u, int n, const SearchLimits& limits = {},
                           SearchStats* stats = nullptr);

/// search_exact continuing from fixed seed patterns (all retained in the
/// result). Used to complete the published partial (2,15) family.
PatternFamily search_exact_seeded(int u, int n, const std::vector<PermutationPattern>& seed,
                                  const SearchLimits& limits = {}, SearchStats* stats = nullptr);

}  // namespace prio
