#pragma once

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <vector>

#include "number.hpp"

namespace epsnet {

/// Fixed-capacity bitset over point indices. Traces, pockets, nets and
/// below-sets of arrangement vertices are all IndexSets.
class IndexSet {
  public:
    static constexpr std::size_t kWords = 6;
    static constexpr std::size_t kCapacity = kWords * 64;

    IndexSet() = default;
    IndexSet(std::initializer_list<std::size_t> items) {
        for (auto i : items) insert(i);
    }

    static IndexSet from(const std::vector<int>& items) {
        IndexSet s;
        for (int i : items) s.insert(static_cast<std::size_t>(i));
        return s;
    }

    /// {0, ..., n-1}
    static IndexSet prefix(std::size_t n) {
        check(n == 0 ? 0 : n - 1);
        IndexSet s;
        for (std::size_t w = 0; w < kWords; ++w) {
            if (n >= (w + 1) * 64) {
                s.words_[w] = ~std::uint64_t{0};
            } else if (n > w * 64) {
                s.words_[w] = (std::uint64_t{1} << (n - w * 64)) - 1;
            }
        }
        return s;
    }

    void insert(std::size_t i) {
        check(i);
        words_[i >> 6] |= std::uint64_t{1} << (i & 63);
    }
    void erase(std::size_t i) {
        check(i);
        words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
    }
    bool contains(std::size_t i) const { return i < kCapacity && ((words_[i >> 6] >> (i & 63)) & 1U); }

    std::size_t size() const {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }
    bool empty() const {
        for (auto w : words_)
            if (w) return false;
        return true;
    }
    bool intersects(const IndexSet& o) const {
        for (std::size_t w = 0; w < kWords; ++w)
            if (words_[w] & o.words_[w]) return true;
        return false;
    }
    std::size_t intersection_size(const IndexSet& o) const {
        std::size_t c = 0;
        for (std::size_t w = 0; w < kWords; ++w) c += static_cast<std::size_t>(std::popcount(words_[w] & o.words_[w]));
        return c;
    }
    bool is_subset_of(const IndexSet& o) const {
        for (std::size_t w = 0; w < kWords; ++w)
            if (words_[w] & ~o.words_[w]) return false;
        return true;
    }

    IndexSet& operator|=(const IndexSet& o) {
        for (std::size_t w = 0; w < kWords; ++w) words_[w] |= o.words_[w];
        return *this;
    }
    IndexSet& operator&=(const IndexSet& o) {
        for (std::size_t w = 0; w < kWords; ++w) words_[w] &= o.words_[w];
        return *this;
    }
    IndexSet& operator^=(const IndexSet& o) {
        for (std::size_t w = 0; w < kWords; ++w) words_[w] ^= o.words_[w];
        return *this;
    }
    /// Set difference.
    IndexSet& operator-=(const IndexSet& o) {
        for (std::size_t w = 0; w < kWords; ++w) words_[w] &= ~o.words_[w];
        return *this;
    }
    friend IndexSet operator|(IndexSet a, const IndexSet& b) { return a |= b; }
    friend IndexSet operator&(IndexSet a, const IndexSet& b) { return a &= b; }
    friend IndexSet operator^(IndexSet a, const IndexSet& b) { return a ^= b; }
    friend IndexSet operator-(IndexSet a, const IndexSet& b) { return a -= b; }

    friend bool operator==(const IndexSet&, const IndexSet&) = default;

    /// Lexicographic order of the sorted index lists, valid for sets of equal
    /// size: the smaller set owns the lowest differing index.
    bool lex_less_same_size(const IndexSet& o) const {
        for (std::size_t w = 0; w < kWords; ++w) {
            if (auto diff = words_[w] ^ o.words_[w]) {
                return (words_[w] & (diff & (~diff + 1))) != 0;
            }
        }
        return false;
    }

    template <typename F>
    void for_each(F&& f) const {
        for (std::size_t w = 0; w < kWords; ++w) {
            std::uint64_t bits = words_[w];
            while (bits) {
                int b = std::countr_zero(bits);
                f(static_cast<int>(w * 64 + static_cast<std::size_t>(b)));
                bits &= bits - 1;
            }
        }
    }

    std::vector<int> to_vector() const {
        std::vector<int> out;
        out.reserve(size());
        for_each([&](int i) { out.push_back(i); });
        return out;
    }

    int first() const {
        for (std::size_t w = 0; w < kWords; ++w)
            if (words_[w]) return static_cast<int>(w * 64 + static_cast<std::size_t>(std::countr_zero(words_[w])));
        return -1;
    }

    std::size_t hash() const {
        std::uint64_t h = 0x9e3779b97f4a7c15ULL;
        for (auto w : words_) {
            std::uint64_t z = w + h + 0x9e3779b97f4a7c15ULL;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            h = z ^ (z >> 31);
        }
        return static_cast<std::size_t>(h);
    }

  private:
    static void check(std::size_t i) {
        if (i >= kCapacity) throw InvalidArgument("point index exceeds IndexSet capacity (384)");
    }

    std::array<std::uint64_t, kWords> words_{};
};

struct IndexSetHash {
    std::size_t operator()(const IndexSet& s) const { return s.hash(); }
};

}  // namespace epsnet
