#include "csp/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

namespace csp {

int euc2d_cost(const Point &a, const Point &b)
{
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return static_cast<int>(std::sqrt(dx * dx + dy * dy) + 0.5);
}

Instance::Instance(std::string name, std::vector<Point> points)
    : name_(std::move(name)), points_(std::move(points))
{
    const int n = size();
    if (n < 1)
        throw std::invalid_argument("instance needs at least one vertex");
    for (const auto &p : points_)
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw std::invalid_argument("non-finite coordinate for vertex " + std::to_string(p.id));
    cost_.resize(n, n);
    for (int i = 0; i < n; ++i) {
        cost_(i, i) = 0;
        for (int j = i + 1; j < n; ++j)
            cost_(i, j) = cost_(j, i) = euc2d_cost(points_[i], points_[j]);
    }
    build_edges();
}

Instance::Instance(std::string name, std::vector<Point> points, CostMatrix cost)
    : name_(std::move(name)), points_(std::move(points)), cost_(std::move(cost))
{
    const int n = static_cast<int>(cost_.rows());
    if (n < 1 || cost_.cols() != n)
        throw std::invalid_argument("cost matrix must be square and non-empty");
    if (points_.empty()) {
        has_coordinates_ = false;
        for (int i = 0; i < n; ++i)
            points_.push_back({i, 0.0, 0.0});
    }
    if (size() != n)
        throw std::invalid_argument("point count does not match cost matrix");
    for (int i = 0; i < n; ++i) {
        if (cost_(i, i) != 0)
            throw std::invalid_argument("cost matrix diagonal must be zero");
        for (int j = 0; j < n; ++j) {
            if (cost_(i, j) != cost_(j, i))
                throw std::invalid_argument("cost matrix must be symmetric");
            if (cost_(i, j) < 0)
                throw std::invalid_argument("costs must be non-negative");
        }
    }
    build_edges();
}

void Instance::build_edges()
{
    const int n = size();
    edges_.clear();
    edges_.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            edges_.push_back({i, j});
}

double Instance::distance(int u, int v) const
{
    if (!has_coordinates_)
        return cost_(u, v);
    return std::hypot(points_[u].x - points_[v].x, points_[u].y - points_[v].y);
}

int Instance::edge_index(int u, int v) const
{
    if (u > v)
        std::swap(u, v);
    const int n = size();
    return u * (2 * n - u - 1) / 2 + (v - u - 1);
}

namespace {

std::string trim(const std::string &s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

Instance parse_tsplib(std::istream &in)
{
    std::map<std::string, std::string> header;
    std::string line;
    bool in_coords = false;

    while (std::getline(in, line)) {
        const std::string t = trim(line);
        if (t.empty())
            continue;
        if (t == "NODE_COORD_SECTION" || t.rfind("NODE_COORD_SECTION", 0) == 0) {
            in_coords = true;
            break;
        }
        if (t == "EOF")
            break;
        const auto colon = t.find(':');
        std::string key = trim(colon == std::string::npos ? t : t.substr(0, colon));
        std::string value = colon == std::string::npos ? std::string{} : trim(t.substr(colon + 1));
        if (colon == std::string::npos) {
            // "KEY value" without a colon
            std::istringstream ss(t);
            ss >> key;
            std::getline(ss, value);
            value = trim(value);
        }
        if (header.count(key))
            throw ParseError("duplicate header field " + key);
        header[key] = value;
    }

    for (const char *required : {"NAME", "DIMENSION", "EDGE_WEIGHT_TYPE"})
        if (!header.count(required))
            throw ParseError(std::string("missing header field ") + required);
    if (header["EDGE_WEIGHT_TYPE"] != "EUC_2D")
        throw UnsupportedFormatError("unsupported EDGE_WEIGHT_TYPE " + header["EDGE_WEIGHT_TYPE"]);
    if (auto it = header.find("TYPE"); it != header.end() && it->second != "TSP")
        throw UnsupportedFormatError("unsupported TYPE " + it->second);
    if (!in_coords)
        throw ParseError("missing header field NODE_COORD_SECTION");

    int n = 0;
    try {
        std::size_t used = 0;
        n = std::stoi(header["DIMENSION"], &used);
        if (used != header["DIMENSION"].size())
            throw std::invalid_argument("trailing characters");
    } catch (const std::exception &) {
        throw ParseError("malformed header field DIMENSION: " + header["DIMENSION"]);
    }
    if (n < 1)
        throw ParseError("header field DIMENSION must be positive");

    std::vector<Point> points(static_cast<std::size_t>(n));
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (int read = 0; read < n; ++read) {
        std::string id_tok;
        double x = 0.0, y = 0.0;
        if (!(in >> id_tok) || id_tok == "EOF")
            throw TruncationError("NODE_COORD_SECTION has " + std::to_string(read) +
                                  " records, DIMENSION is " + std::to_string(n));
        if (!(in >> x >> y))
            throw TruncationError("truncated coordinate record for node " + id_tok);
        int id = 0;
        try {
            id = std::stoi(id_tok);
        } catch (const std::exception &) {
            throw ParseError("malformed node id " + id_tok);
        }
        if (id < 1 || id > n)
            throw ParseError("node id " + id_tok + " outside 1.." + std::to_string(n));
        if (seen[id - 1])
            throw ParseError("duplicate node id " + id_tok);
        if (!std::isfinite(x) || !std::isfinite(y))
            throw ParseError("non-finite coordinate for node " + id_tok);
        seen[id - 1] = true;
        points[id - 1] = {id - 1, x, y};
    }

    std::string rest;
    while (in >> rest) {
        if (rest == "EOF")
            break;
        throw ParseError("unexpected token after NODE_COORD_SECTION: " + rest);
    }
    return Instance(header["NAME"], std::move(points));
}

Instance parse_tsplib_file(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open " + path.string());
    return parse_tsplib(in);
}

CoverageModel CoverageModel::from_cover_sets(std::vector<VertexSet> cover_of, int k)
{
    const int n = static_cast<int>(cover_of.size());
    CoverageModel m;
    m.k_ = k;
    m.covers_.assign(static_cast<std::size_t>(n), VertexSet(n));
    for (int v = 0; v < n; ++v) {
        if (cover_of[v].capacity() != n)
            throw std::invalid_argument("covering set capacity mismatch");
        if (!cover_of[v].contains(v))
            throw std::invalid_argument("C(v) must contain v for v = " + std::to_string(v));
        cover_of[v].for_each([&](int u) { m.covers_[u].insert(v); });
    }
    m.cover_of_ = std::move(cover_of);
    return m;
}

CoverageModel build_coverage(const Instance &inst, int k)
{
    const int n = inst.size();
    if (k < 1 || k > n - 1)
        throw std::invalid_argument("k out of range: " + std::to_string(k) + " not in [1, " +
                                    std::to_string(n - 1) + "]");
    std::vector<VertexSet> cover(static_cast<std::size_t>(n), VertexSet(n));
    std::vector<int> order;
    for (int v = 0; v < n; ++v) {
        order.resize(static_cast<std::size_t>(n));
        std::iota(order.begin(), order.end(), 0);
        order.erase(order.begin() + v);
        std::partial_sort(order.begin(), order.begin() + k, order.end(), [&](int a, int b) {
            const double da = inst.distance(v, a), db = inst.distance(v, b);
            return da < db || (da == db && a < b);
        });
        cover[v].insert(v);
        for (int i = 0; i < k; ++i)
            cover[v].insert(order[i]);
    }
    return CoverageModel::from_cover_sets(std::move(cover), k);
}

bool in_gamma(const VertexSet &s, const CoverageModel &cov)
{
    bool found = false;
    s.for_each([&](int v) {
        if (!found && cov.cover_of(v).is_subset_of(s))
            found = true;
    });
    return found;
}

VertexSet covered_union(const VertexSet &s, const CoverageModel &cov)
{
    VertexSet out(cov.size());
    s.for_each([&](int v) { out |= cov.covers(v); });
    return out;
}

bool covers_all(const VertexSet &s, const CoverageModel &cov)
{
    return covered_union(s, cov).is_full();
}

std::vector<int> cut_edge_set(const VertexSet &s, const Instance &inst)
{
    if (s.empty() || s.is_full())
        throw std::invalid_argument("cut undefined for empty S or S = V");
    std::vector<int> out;
    for (int e = 0; e < inst.edge_count(); ++e) {
        const Edge &ed = inst.edge(e);
        if (s.contains(ed.u) != s.contains(ed.v))
            out.push_back(e);
    }
    return out;
}

std::vector<int> interior_edge_set(const VertexSet &s, const Instance &inst)
{
    std::vector<int> out;
    for (int e = 0; e < inst.edge_count(); ++e) {
        const Edge &ed = inst.edge(e);
        if (s.contains(ed.u) && s.contains(ed.v))
            out.push_back(e);
    }
    return out;
}

}  // namespace csp
