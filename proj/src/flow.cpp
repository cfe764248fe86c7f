#include "csp/flow.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <span>
#include <stdexcept>

namespace csp {

Capacity scale_capacity(double x)
{
    return x <= 0.0 ? 0 : static_cast<Capacity>(std::llround(x * kCapacityScale));
}

FlowNetwork::FlowNetwork(int real_count, int node_count)
    : real_count_(real_count), node_count_(node_count)
{
    if (real_count < 0 || node_count < real_count)
        throw std::invalid_argument("invalid network size");
}

int FlowNetwork::add_node() { return node_count_++; }

void FlowNetwork::add_arc(int from, int to, Capacity cap)
{
    if (cap < 0)
        throw std::invalid_argument("negative capacity");
    arcs_.push_back({from, to, cap, false, false});
}

void FlowNetwork::add_edge(int u, int v, Capacity cap)
{
    if (cap < 0)
        throw std::invalid_argument("negative capacity");
    arcs_.push_back({u, v, cap, false, true});
}

void FlowNetwork::add_infinite_arc(int from, int to)
{
    arcs_.push_back({from, to, 0, true, false});
}

void FlowNetwork::set_terminals(int source, int sink)
{
    if (source == sink)
        throw std::invalid_argument("source and sink coincide");
    if (source < 0 || sink < 0 || source >= node_count_ || sink >= node_count_)
        throw std::invalid_argument("terminal out of range");
    source_ = source;
    sink_ = sink;
}

Capacity FlowNetwork::finite_total() const
{
    Capacity total = 0;
    for (const auto &a : arcs_)
        if (!a.infinite)
            total += a.undirected ? 2 * a.capacity : a.capacity;
    return total;
}

Capacity FlowNetwork::cut_capacity(const std::vector<bool> &source_side) const
{
    const Capacity inf = infinity_value();
    Capacity total = 0;
    for (const auto &a : arcs_) {
        const Capacity c = a.infinite ? inf : a.capacity;
        if (source_side[a.from] && !source_side[a.to])
            total += c;
        else if (a.undirected && source_side[a.to] && !source_side[a.from])
            total += c;
    }
    return total;
}

namespace {

class PushRelabel {
public:
    explicit PushRelabel(const FlowNetwork &net)
        : n_(net.node_count()), s_(net.source()), t_(net.sink())
    {
        const Capacity inf = net.infinity_value();
        const std::size_t m = net.arcs().size() * 2;
        to_.reserve(m);
        res_.reserve(m);
        start_.assign(static_cast<std::size_t>(n_) + 1, 0);
        for (const auto &a : net.arcs()) {
            ++start_[a.from + 1];
            ++start_[a.to + 1];
        }
        for (int v = 0; v < n_; ++v)
            start_[v + 1] += start_[v];
        adj_.resize(m);
        std::vector<int> fill(start_.begin(), start_.end() - 1);
        for (const auto &a : net.arcs()) {
            const Capacity c = a.infinite ? inf : a.capacity;
            adj_[fill[a.from]++] = static_cast<int>(to_.size());
            to_.push_back(a.to);
            res_.push_back(c);
            adj_[fill[a.to]++] = static_cast<int>(to_.size());
            to_.push_back(a.from);
            res_.push_back(a.undirected ? c : 0);
        }
        initial_ = res_;
    }

    Capacity run()
    {
        excess_.assign(n_, 0);
        height_.assign(n_, 0);
        current_.assign(n_, 0);
        in_queue_.assign(n_, false);

        for (int a : arcs(s_)) {
            const Capacity c = res_[a];
            if (c > 0)
                push(a, c);
        }
        global_relabel();
        int relabels = 0;
        while (!queue_.empty()) {
            const int u = queue_.front();
            queue_.pop_front();
            in_queue_[u] = false;
            relabels += discharge(u);
            if (relabels > n_) {
                global_relabel();
                relabels = 0;
            }
        }
        return excess_[t_];
    }

    std::vector<bool> residual_reachable() const
    {
        std::vector<bool> seen(n_, false);
        std::vector<int> stack{s_};
        seen[s_] = true;
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            for (int a : arcs(u))
                if (res_[a] > 0 && !seen[to_[a]]) {
                    seen[to_[a]] = true;
                    stack.push_back(to_[a]);
                }
        }
        return seen;
    }

    Capacity arc_flow(std::size_t k) const { return initial_[2 * k] - res_[2 * k]; }

private:
    void push(int a, Capacity amount)
    {
        const int v = to_[a];
        const int u = to_[a ^ 1];
        res_[a] -= amount;
        res_[a ^ 1] += amount;
        excess_[u] -= amount;
        excess_[v] += amount;
        if (v != s_ && v != t_ && !in_queue_[v] && excess_[v] > 0) {
            in_queue_[v] = true;
            queue_.push_back(v);
        }
    }

    int discharge(int u)
    {
        int relabels = 0;
        while (excess_[u] > 0) {
            if (current_[u] == arcs(u).size()) {
                int best = 2 * n_;
                for (int a : arcs(u))
                    if (res_[a] > 0)
                        best = std::min(best, height_[to_[a]]);
                height_[u] = best + 1;
                current_[u] = 0;
                ++relabels;
                if (height_[u] > 2 * n_)
                    break;
                continue;
            }
            const int a = arcs(u)[current_[u]];
            const int v = to_[a];
            if (res_[a] > 0 && height_[u] == height_[v] + 1)
                push(a, std::min(excess_[u], res_[a]));
            else
                ++current_[u];
        }
        return relabels;
    }

    // exact distance labels: to the sink where reachable, else n + distance to the source
    void global_relabel()
    {
        const int unset = -1;
        std::vector<int> h(n_, unset);
        std::vector<int> q;
        q.reserve(static_cast<std::size_t>(n_));
        auto bfs = [&](int root, int base) {
            q.assign(1, root);
            h[root] = base;
            for (std::size_t head = 0; head < q.size(); ++head) {
                const int v = q[head];
                for (int a : arcs(v)) {
                    const int u = to_[a];
                    if (h[u] == unset && res_[a ^ 1] > 0) {
                        h[u] = h[v] + 1;
                        q.push_back(u);
                    }
                }
            }
        };
        bfs(t_, 0);
        h[s_] = unset;
        bfs(s_, n_);
        for (int v = 0; v < n_; ++v) {
            height_[v] = h[v] == unset ? 2 * n_ : h[v];
            current_[v] = 0;
        }
        height_[s_] = n_;
        height_[t_] = 0;
    }

    int n_, s_, t_;
    std::span<const int> arcs(int u) const
    {
        return {adj_.data() + start_[u], adj_.data() + start_[u + 1]};
    }

    std::vector<int> start_, adj_;
    std::vector<int> to_;
    std::vector<Capacity> res_, initial_;
    std::vector<Capacity> excess_;
    std::vector<int> height_;
    std::vector<std::size_t> current_;
    std::vector<bool> in_queue_;
    std::deque<int> queue_;
};

}  // namespace

MinCutResult max_flow_min_cut(const FlowNetwork &net)
{
    if (net.source() < 0 || net.sink() < 0)
        throw std::invalid_argument("network terminals not set");
    PushRelabel pr(net);
    MinCutResult out;
    out.value = pr.run();
    out.infinite = out.value >= net.infinity_value();
    out.source_nodes = pr.residual_reachable();
    out.source_side = VertexSet(net.real_count());
    for (int v = 0; v < net.real_count(); ++v)
        if (out.source_nodes[v])
            out.source_side.insert(v);
    out.arc_flow.resize(net.arcs().size());
    for (std::size_t k = 0; k < net.arcs().size(); ++k)
        out.arc_flow[k] = pr.arc_flow(k);
    return out;
}

namespace {

int attach_side(FlowNetwork &net, const VertexSet &side, bool is_source)
{
    if (side.size() == 1)
        return side.first();
    const int node = net.add_node();
    side.for_each([&](int v) {
        if (is_source)
            net.add_infinite_arc(node, v);
        else
            net.add_infinite_arc(v, node);
    });
    return node;
}

}  // namespace

FlowNetwork build_cut_network(const SupportGraph &gf, const VertexSet &side_a, const VertexSet &side_b)
{
    if (side_a.empty() || side_b.empty())
        throw std::invalid_argument("cut sides must be non-empty");
    if (side_a.intersects(side_b))
        throw std::invalid_argument("cut sides overlap");
    const int n = gf.size();
    FlowNetwork net(n, n);
    for (const auto &e : gf.edges())
        net.add_edge(e.u, e.v, scale_capacity(e.x));
    const int s = attach_side(net, side_a, true);
    const int t = attach_side(net, side_b, false);
    net.set_terminals(s, t);
    return net;
}

FlowNetwork augment_for_ci(const SupportGraph &gf, const VertexSet &cv, const VertexSet &cu)
{
    const VertexSet overlap = cv & cu;
    if (overlap.empty())
        return build_cut_network(gf, cv, cu);

    const int n = gf.size();
    FlowNetwork net(n, n);
    std::vector<Capacity> transferred(static_cast<std::size_t>(n), 0);
    for (const auto &e : gf.edges()) {
        const Capacity c = scale_capacity(e.x);
        if (overlap.contains(e.u) && !overlap.contains(e.v))
            transferred[e.u] += c;
        else if (overlap.contains(e.v) && !overlap.contains(e.u))
            transferred[e.v] += c;
        else
            net.add_edge(e.u, e.v, c);
    }

    std::vector<int> sink_side;
    (cu - cv).for_each([&](int v) { sink_side.push_back(v); });
    overlap.for_each([&](int w) {
        const int w_art = net.add_node();
        net.add_edge(w, w_art, transferred[w]);
        sink_side.push_back(w_art);
    });

    const int s = attach_side(net, cv, true);
    int t = -1;
    if (sink_side.size() == 1) {
        t = sink_side.front();
    } else {
        t = net.add_node();
        for (int v : sink_side)
            net.add_infinite_arc(v, t);
    }
    net.set_terminals(s, t);
    return net;
}

}  // namespace csp
