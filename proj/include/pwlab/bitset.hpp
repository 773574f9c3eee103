#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace pwlab {

/// Fixed-size bit set sized at runtime; just enough for membership and
/// intersection counting on vertex sets.
class VertexSet {
public:
    VertexSet() = default;
    explicit VertexSet(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

    std::size_t size() const { return size_; }

    void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
    bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }

    std::size_t count() const
    {
        std::size_t c = 0;
        for (auto w : words_)
            c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    std::size_t intersection_count(const VertexSet& other) const
    {
        std::size_t c = 0;
        for (std::size_t i = 0; i < words_.size(); ++i)
            c += static_cast<std::size_t>(std::popcount(words_[i] & other.words_[i]));
        return c;
    }

    bool intersects(const VertexSet& other) const
    {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & other.words_[i])
                return true;
        return false;
    }

    /// |a & b & c|
    static std::size_t intersection_count(const VertexSet& a, const VertexSet& b, const VertexSet& c)
    {
        std::size_t n = 0;
        for (std::size_t i = 0; i < a.words_.size(); ++i)
            n += static_cast<std::size_t>(std::popcount(a.words_[i] & b.words_[i] & c.words_[i]));
        return n;
    }

    bool any() const
    {
        for (auto w : words_)
            if (w)
                return true;
        return false;
    }

    VertexSet& operator&=(const VertexSet& other)
    {
        for (std::size_t i = 0; i < words_.size(); ++i)
            words_[i] &= other.words_[i];
        return *this;
    }

    VertexSet& operator|=(const VertexSet& other)
    {
        for (std::size_t i = 0; i < words_.size(); ++i)
            words_[i] |= other.words_[i];
        return *this;
    }

    std::vector<int> members() const
    {
        std::vector<int> out;
        for (std::size_t i = 0; i < words_.size(); ++i) {
            std::uint64_t w = words_[i];
            while (w) {
                out.push_back(static_cast<int>(i * 64 + static_cast<std::size_t>(std::countr_zero(w))));
                w &= w - 1;
            }
        }
        return out;
    }

    bool operator==(const VertexSet& other) const = default;
    auto operator<=>(const VertexSet& other) const = default;

private:
    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace pwlab
