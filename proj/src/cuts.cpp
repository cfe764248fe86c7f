#include "csp/cuts.hpp"

#include <boost/container_hash/hash.hpp>

#include <algorithm>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace csp {

const char *to_string(CutKind kind)
{
    switch (kind) {
    case CutKind::Subtour: return "subtour";
    case CutKind::Gamma: return "gamma";
    case CutKind::Vertex: return "vertex";
    case CutKind::Link: return "link";
    case CutKind::CoverIntersection: return "ci";
    }
    return "?";
}

CutKind parse_cut_kind(const std::string &text)
{
    for (auto k : {CutKind::Subtour, CutKind::Gamma, CutKind::Vertex, CutKind::Link,
                   CutKind::CoverIntersection})
        if (text == to_string(k))
            return k;
    throw std::invalid_argument("unknown cut kind '" + text + "'");
}

std::size_t CutKeyHash::operator()(const CutKey &k) const
{
    std::size_t h = k.set.hash();
    boost::hash_combine(h, static_cast<int>(k.kind));
    boost::hash_combine(h, k.anchors[0]);
    boost::hash_combine(h, k.anchors[1]);
    return h;
}

namespace {

void require_proper(const VertexSet &s)
{
    if (s.empty() || s.is_full())
        throw std::invalid_argument("cut set must be a proper non-empty subset");
}

void require_vertex(const VertexSet &s, int v)
{
    if (v < 0 || v >= s.capacity())
        throw std::invalid_argument("anchor out of range");
}

}  // namespace

Cut Cut::gamma(const VertexSet &s, const CoverageModel &cov)
{
    require_proper(s);
    if (!in_gamma(s, cov))
        throw std::invalid_argument("gamma cut needs S in gamma(V)");
    if (covers_all(s, cov))
        throw std::invalid_argument("gamma cut needs D(S) != V");
    return Cut(CutKind::Gamma, s, -1, -1);
}

Cut Cut::vertex(const VertexSet &s, int i, const CoverageModel &cov)
{
    require_proper(s);
    require_vertex(s, i);
    if (!s.contains(i))
        throw std::invalid_argument("vertex cut anchor must lie in S");
    if (in_gamma(s, cov))
        throw std::invalid_argument("vertex cut needs S not in gamma(V)");
    if (covers_all(s, cov))
        throw std::invalid_argument("vertex cut needs D(S) != V");
    return Cut(CutKind::Vertex, s, i, -1);
}

Cut Cut::link(const VertexSet &s, int i, int j)
{
    require_proper(s);
    require_vertex(s, i);
    require_vertex(s, j);
    if (!s.contains(i) || s.contains(j))
        throw std::invalid_argument("link cut needs i in S and j outside S");
    const int n = s.capacity();
    const int size = s.size();
    if (size * 2 > n || (size * 2 == n && !s.contains(0)))
        return Cut(CutKind::Link, s.complement(), j, i);
    return Cut(CutKind::Link, s, i, j);
}

Cut Cut::subtour(const VertexSet &s, int i, int j)
{
    Cut c = link(s, i, j);
    c.kind_ = CutKind::Subtour;
    return c;
}

bool Cut::cover_intersection_valid(const VertexSet &s, int v, const CoverageModel &cov)
{
    if (s.empty() || s.is_full() || v < 0 || v >= s.capacity())
        return false;
    if (!in_gamma(s, cov))
        return false;
    // a tour lying inside S n C(v) would satisfy every cover constraint yet have lhs 0
    const VertexSet sv = s & cov.cover_of(v);
    return sv.size() <= 2 || !covers_all(sv, cov);
}

Cut Cut::cover_intersection(const VertexSet &s, int v, const CoverageModel &cov)
{
    require_proper(s);
    require_vertex(s, v);
    if (!in_gamma(s, cov))
        throw std::invalid_argument("CI cut needs S in gamma(V)");
    if (!cover_intersection_valid(s, v, cov))
        throw std::invalid_argument("CI cut needs S n C(v) to admit no covering tour");
    Cut c(CutKind::CoverIntersection, s, v, -1);
    c.sv_ = s & cov.cover_of(v);
    return c;
}

bool Cut::in_support(int u, int v) const
{
    if (s_.contains(u) != s_.contains(v))
        return true;
    return kind_ == CutKind::CoverIntersection && sv_.contains(u) != sv_.contains(v);
}

double Cut::lhs(const Instance &inst, const Eigen::VectorXd &x) const
{
    double total = 0.0;
    for (int e = 0; e < inst.edge_count(); ++e) {
        const Edge &ed = inst.edge(e);
        if (in_support(ed.u, ed.v))
            total += x[e];
    }
    return total;
}

double Cut::lhs(const SupportGraph &g) const
{
    double total = 0.0;
    for (const auto &e : g.edges())
        if (in_support(e.u, e.v))
            total += g.x()[e.edge];
    return total;
}

double Cut::rhs(const Eigen::VectorXd &y) const
{
    switch (kind_) {
    case CutKind::Gamma:
    case CutKind::CoverIntersection:
        return 2.0;
    case CutKind::Vertex:
        return 2.0 * y[a_];
    case CutKind::Link:
    case CutKind::Subtour:
        return 2.0 * (y[a_] + y[b_] - 1.0);
    }
    return 0.0;
}

double Cut::violation(const Instance &inst, const Eigen::VectorXd &x, const Eigen::VectorXd &y) const
{
    return rhs(y) - lhs(inst, x);
}

double Cut::violation(const SupportGraph &g) const
{
    return rhs(g.y()) - lhs(g);
}

SparseRow Cut::to_lp_row(const Instance &inst, const std::vector<bool> *skip, bool compact) const
{
    const VariableLayout lay(inst);
    const int n = inst.size();
    SparseRow row;
    row.sense = RowSense::Greater;
    auto skipped = [&](int e) { return skip && (*skip)[static_cast<std::size_t>(e)]; };

    std::vector<double> ycoef(static_cast<std::size_t>(n), 0.0);
    switch (kind_) {
    case CutKind::Gamma:
    case CutKind::CoverIntersection:
        row.rhs = 2.0;
        break;
    case CutKind::Vertex:
        ycoef[a_] -= 2.0;
        row.rhs = 0.0;
        break;
    case CutKind::Link:
    case CutKind::Subtour:
        ycoef[a_] -= 2.0;
        ycoef[b_] -= 2.0;
        row.rhs = -2.0;
        break;
    }

    // x(delta S) = 2 y(W) - 2 x(E(W)) for W = S or V \ S under the degree rows;
    // pick whichever of the three forms has the fewest nonzeros.
    const long ns = s_.size();
    const long nt = n - ns;
    const long cost_cut = ns * nt;
    const long cost_s = ns * (ns - 1) / 2 + ns;
    const long cost_t = nt * (nt - 1) / 2 + nt;
    if (!compact || kind_ == CutKind::CoverIntersection || cost_cut <= std::min(cost_s, cost_t)) {
        for (int e = 0; e < inst.edge_count(); ++e) {
            if (skipped(e))
                continue;
            const Edge &ed = inst.edge(e);
            if (in_support(ed.u, ed.v)) {
                row.index.push_back(lay.x(e));
                row.value.push_back(1.0);
            }
        }
    } else {
        const std::vector<int> side = cost_s <= cost_t ? s_.members() : s_.complement().members();
        std::vector<int> edges;
        for (std::size_t a = 0; a < side.size(); ++a)
            for (std::size_t b = a + 1; b < side.size(); ++b) {
                const int e = inst.edge_index(side[a], side[b]);
                if (!skipped(e))
                    edges.push_back(e);
            }
        std::sort(edges.begin(), edges.end());
        for (int e : edges) {
            row.index.push_back(lay.x(e));
            row.value.push_back(-2.0);
        }
        for (int v : side)
            ycoef[v] += 2.0;
    }
    for (int v = 0; v < n; ++v)
        if (ycoef[v] != 0.0) {
            row.index.push_back(lay.y(v));
            row.value.push_back(ycoef[v]);
        }
    return row;
}

std::string Cut::to_text() const
{
    std::ostringstream out;
    out << to_string(kind_) << " " << s_.capacity() << " |";
    s_.for_each([&](int v) { out << ' ' << v; });
    out << " |";
    if (a_ >= 0)
        out << ' ' << a_;
    if (b_ >= 0)
        out << ' ' << b_;
    return out.str();
}

Cut Cut::from_text(const std::string &line, const CoverageModel &cov)
{
    std::istringstream in(line);
    std::string kind_text, bar;
    int n = 0;
    if (!(in >> kind_text >> n >> bar) || bar != "|")
        throw std::invalid_argument("malformed cut line: " + line);
    VertexSet s(n);
    std::string tok;
    while (in >> tok && tok != "|")
        s.insert(std::stoi(tok));
    std::vector<int> anchors;
    while (in >> tok)
        anchors.push_back(std::stoi(tok));
    const CutKind kind = parse_cut_kind(kind_text);
    auto anchor = [&](std::size_t i) {
        if (anchors.size() <= i)
            throw std::invalid_argument("missing anchor in cut line: " + line);
        return anchors[i];
    };
    switch (kind) {
    case CutKind::Gamma: return gamma(s, cov);
    case CutKind::Vertex: return vertex(s, anchor(0), cov);
    case CutKind::Link: return link(s, anchor(0), anchor(1));
    case CutKind::Subtour: return subtour(s, anchor(0), anchor(1));
    case CutKind::CoverIntersection: return cover_intersection(s, anchor(0), cov);
    }
    throw std::invalid_argument("malformed cut line: " + line);
}

int CutPool::add(const Cut &cut)
{
    if (!keys_.emplace(cut.key(), size()).second)
        return -1;
    cuts_.push_back(cut);
    return static_cast<int>(cuts_.size()) - 1;
}

int CutPool::find(const Cut &cut) const
{
    const auto it = keys_.find(cut.key());
    return it == keys_.end() ? -1 : it->second;
}

void CutPool::write(std::ostream &out) const
{
    for (const auto &c : cuts_)
        out << c.to_text() << '\n';
}

}  // namespace csp
