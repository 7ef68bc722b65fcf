#include "prio/page_two.hpp"

#include <stdexcept>

namespace prio {

PageTwoCode build_page_two(int n) {
    if (n < 2 || n > kMaxLength)
        throw std::invalid_argument("build_page_two: n out of range [2," +
                                    std::to_string(kMaxLength) + "]");
    PageTwoCode page;
    page.n = n;
    const std::uint32_t count = 1u << (n - 1);
    page.codes.reserve(count);
    for (std::uint32_t j = 0; j < count; ++j) {
        BitVector b(n, j);  // leading coordinate 0, tail spells j
        page.codes.emplace_back(std::vector<BitVector>{b, b.complement()});
    }
    return page;
}

int page_two_index(const BitVector& v) {
    const std::uint32_t half = 1u << (v.length() - 1);
    if (v.value() < half) return static_cast<int>(v.value());
    return static_cast<int>(v.complement().value());
}

HalfWeightPartition partition_by_half_weight(const PageTwoCode& page) {
    if (page.n % 2 != 0)
        throw std::invalid_argument("partition_by_half_weight: n must be even");
    HalfWeightPartition out;
    for (const auto& code : page.codes) {
        bool all_half = true;
        for (const auto& v : code.vectors())
            if (v.weight() != page.n / 2) { all_half = false; break; }
        (all_half ? out.half_weight : out.rest).push_back(code);
    }
    return out;
}

}  // namespace prio
