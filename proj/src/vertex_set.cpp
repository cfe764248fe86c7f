#include "csp/vertex_set.hpp"

#include <boost/container_hash/hash.hpp>

namespace csp {

VertexSet VertexSet::of(int n, std::initializer_list<int> members)
{
    VertexSet s(n);
    for (int v : members)
        s.insert(v);
    return s;
}

VertexSet VertexSet::of(int n, const std::vector<int> &members)
{
    VertexSet s(n);
    for (int v : members)
        s.insert(v);
    return s;
}

VertexSet VertexSet::full(int n)
{
    VertexSet s(n);
    s.bits_.set();
    return s;
}

VertexSet VertexSet::complement() const
{
    VertexSet s = *this;
    s.bits_.flip();
    return s;
}

std::vector<int> VertexSet::members() const
{
    std::vector<int> out;
    out.reserve(bits_.count());
    for_each([&](int v) { out.push_back(v); });
    return out;
}

int VertexSet::first() const
{
    auto i = bits_.find_first();
    return i == Bits::npos ? -1 : static_cast<int>(i);
}

std::size_t VertexSet::hash() const
{
    std::size_t seed = bits_.size();
    for (auto i = bits_.find_first(); i != Bits::npos; i = bits_.find_next(i))
        boost::hash_combine(seed, i);
    return seed;
}

}  // namespace csp
