#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace prio {

/// Longest supported vector; everything fits one 32-bit word.
inline constexpr int kMaxLength = 24;

/// Number of cell levels (two pages).
inline constexpr int kLevels = 3;

/// Fixed-length binary word. Position 0 is the leftmost printed
/// character and the most significant bit of value().
class BitVector {
  public:
    BitVector(int length, std::uint32_t value) : n_(length), bits_(value) {
        if (length < 1 || length > kMaxLength)
            throw std::invalid_argument("BitVector: length out of range [1," +
                                        std::to_string(kMaxLength) + "]");
        if (length < 32 && (value >> length) != 0)
            throw std::invalid_argument("BitVector: value wider than length");
    }

    /// Parses exactly length() characters '0'/'1'.
    static BitVector parse(std::string_view text) {
        if (text.empty() || text.size() > static_cast<std::size_t>(kMaxLength))
            throw std::invalid_argument("BitVector: bad textual length");
        std::uint32_t v = 0;
        for (char c : text) {
            if (c != '0' && c != '1')
                throw std::invalid_argument("BitVector: invalid character");
            v = (v << 1) | static_cast<std::uint32_t>(c - '0');
        }
        return BitVector(static_cast<int>(text.size()), v);
    }

    int length() const { return n_; }
    std::uint32_t value() const { return bits_; }

    /// Coordinate at printed position pos (0 = leftmost).
    bool get(int pos) const {
        if (pos < 0 || pos >= n_) throw std::out_of_range("BitVector: position");
        return (bits_ >> (n_ - 1 - pos)) & 1u;
    }

    int weight() const { return std::popcount(bits_); }

    BitVector complement() const {
        return BitVector(n_, ~bits_ & mask());
    }

    std::string str() const {
        std::string s(static_cast<std::size_t>(n_), '0');
        for (int i = 0; i < n_; ++i)
            if (get(i)) s[static_cast<std::size_t>(i)] = '1';
        return s;
    }

    friend bool operator==(const BitVector&, const BitVector&) = default;
    friend std::strong_ordering operator<=>(const BitVector& a, const BitVector& b) {
        if (auto c = a.n_ <=> b.n_; c != 0) return c;
        return a.bits_ <=> b.bits_;
    }

  private:
    std::uint32_t mask() const { return n_ == 32 ? ~0u : (1u << n_) - 1; }

    int n_;
    std::uint32_t bits_;
};

/// a <= b coordinatewise. Lengths must agree.
inline bool includes(const BitVector& a, const BitVector& b) {
    if (a.length() != b.length())
        throw std::invalid_argument("includes: length mismatch");
    return (a.value() & ~b.value()) == 0;
}

/// Programmed cell configuration: n levels, each in {0,1,2}.
class CellState {
  public:
    explicit CellState(std::vector<std::uint8_t> levels) : levels_(std::move(levels)) {
        if (levels_.empty() || levels_.size() > static_cast<std::size_t>(kMaxLength))
            throw std::invalid_argument("CellState: length out of range");
        for (auto lv : levels_)
            if (lv >= kLevels) throw std::invalid_argument("CellState: level out of range");
    }

    static CellState parse(std::string_view text) {
        std::vector<std::uint8_t> lv;
        lv.reserve(text.size());
        for (char c : text) {
            if (c < '0' || c > '2') throw std::invalid_argument("CellState: invalid character");
            lv.push_back(static_cast<std::uint8_t>(c - '0'));
        }
        return CellState(std::move(lv));
    }

    int length() const { return static_cast<int>(levels_.size()); }
    std::uint8_t level(int pos) const { return levels_.at(static_cast<std::size_t>(pos)); }
    std::span<const std::uint8_t> levels() const { return levels_; }

    std::string str() const {
        std::string s;
        s.reserve(levels_.size());
        for (auto lv : levels_) s.push_back(static_cast<char>('0' + lv));
        return s;
    }

    friend bool operator==(const CellState&, const CellState&) = default;

  private:
    std::vector<std::uint8_t> levels_;
};

/// Binary sense at threshold r: coordinate i is 1 iff level i >= r.
inline BitVector threshold_read(const CellState& x, int r) {
    if (r < 1 || r > kLevels - 1)
        throw std::out_of_range("threshold_read: r must be 1 or 2");
    std::uint32_t v = 0;
    const int n = x.length();
    for (int i = 0; i < n; ++i)
        v |= static_cast<std::uint32_t>(x.level(i) >= r) << (n - 1 - i);
    return BitVector(n, v);
}

/// Non-empty set of equal-length BitVectors, stored sorted by value.
class ConstituentCode {
  public:
    explicit ConstituentCode(std::vector<BitVector> vectors) : vectors_(std::move(vectors)) {
        if (vectors_.empty())
            throw std::invalid_argument("ConstituentCode: empty");
        const int n = vectors_.front().length();
        for (const auto& v : vectors_)
            if (v.length() != n)
                throw std::invalid_argument("ConstituentCode: mixed lengths");
        std::sort(vectors_.begin(), vectors_.end());
        auto dup = std::unique(vectors_.begin(), vectors_.end());
        if (dup != vectors_.end())
            throw std::invalid_argument("ConstituentCode: duplicate vector");
    }

    int length() const { return vectors_.front().length(); }
    std::size_t size() const { return vectors_.size(); }
    std::span<const BitVector> vectors() const { return vectors_; }
    const BitVector& operator[](std::size_t i) const { return vectors_[i]; }

    bool contains(const BitVector& v) const {
        return std::binary_search(vectors_.begin(), vectors_.end(), v);
    }

    friend bool operator==(const ConstituentCode&, const ConstituentCode&) = default;

  private:
    std::vector<BitVector> vectors_;
};

/// Set inclusion A <= B: some a in A is dominated by some b in B.
inline bool set_includes(const ConstituentCode& a, const ConstituentCode& b) {
    if (a.length() != b.length())
        throw std::invalid_argument("set_includes: length mismatch");
    for (const auto& va : a.vectors())
        for (const auto& vb : b.vectors())
            if (includes(va, vb)) return true;
    return false;
}

}  // namespace prio
