#pragma once

#include <boost/dynamic_bitset.hpp>

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace csp {

/// Membership bit-set over the vertices 0..n-1 of one instance.
class VertexSet {
public:
    using Bits = boost::dynamic_bitset<std::uint64_t>;

    VertexSet() = default;
    explicit VertexSet(int n) : bits_(static_cast<std::size_t>(n)) {}

    static VertexSet of(int n, std::initializer_list<int> members);
    static VertexSet of(int n, const std::vector<int> &members);
    static VertexSet full(int n);

    int capacity() const { return static_cast<int>(bits_.size()); }
    int size() const { return static_cast<int>(bits_.count()); }
    bool empty() const { return bits_.none(); }
    bool is_full() const { return bits_.all(); }

    bool contains(int v) const { return bits_.test(static_cast<std::size_t>(v)); }
    void insert(int v) { bits_.set(static_cast<std::size_t>(v)); }
    void erase(int v) { bits_.reset(static_cast<std::size_t>(v)); }

    bool is_subset_of(const VertexSet &other) const { return bits_.is_subset_of(other.bits_); }
    bool intersects(const VertexSet &other) const { return bits_.intersects(other.bits_); }

    VertexSet complement() const;
    std::vector<int> members() const;

    /// Smallest member, or -1 when empty.
    int first() const;

    template <class F>
    void for_each(F &&f) const
    {
        for (auto i = bits_.find_first(); i != Bits::npos; i = bits_.find_next(i))
            f(static_cast<int>(i));
    }

    VertexSet &operator|=(const VertexSet &o) { bits_ |= o.bits_; return *this; }
    VertexSet &operator&=(const VertexSet &o) { bits_ &= o.bits_; return *this; }
    VertexSet &operator-=(const VertexSet &o) { bits_ -= o.bits_; return *this; }

    friend VertexSet operator|(VertexSet a, const VertexSet &b) { return a |= b; }
    friend VertexSet operator&(VertexSet a, const VertexSet &b) { return a &= b; }
    friend VertexSet operator-(VertexSet a, const VertexSet &b) { return a -= b; }
    friend bool operator==(const VertexSet &a, const VertexSet &b) { return a.bits_ == b.bits_; }
    friend bool operator<(const VertexSet &a, const VertexSet &b) { return a.bits_ < b.bits_; }

    std::size_t hash() const;
    const Bits &bits() const { return bits_; }

private:
    Bits bits_;
};

struct VertexSetHash {
    std::size_t operator()(const VertexSet &s) const { return s.hash(); }
};

}  // namespace csp
