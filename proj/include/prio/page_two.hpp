#pragma once

#include <utility>
#include <vector>

#include "prio/bits.hpp"

namespace prio {

/// Second-page code: 2^(n-1) complementary pairs. Code j pairs the vector
/// whose leading coordinate is 0 and whose remaining n-1 coordinates spell
/// j (most significant first) with its complement.
struct PageTwoCode {
    int n = 0;
    std::vector<ConstituentCode> codes;

    int message_count() const { return static_cast<int>(codes.size()); }
};

PageTwoCode build_page_two(int n);

/// Message index of the pair containing v, without scanning the code.
int page_two_index(const BitVector& v);

/// Split into the codes whose two members both have weight n/2 and the
/// rest. Only meaningful for even n.
struct HalfWeightPartition {
    std::vector<ConstituentCode> half_weight;
    std::vector<ConstituentCode> rest;
};

HalfWeightPartition partition_by_half_weight(const PageTwoCode& page);

}  // namespace prio
