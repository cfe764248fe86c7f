#include "csp/flow.hpp"
#include "csp/oracle.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace csp;
using csp::testing::random_instance;

namespace {

FlowNetwork random_network(std::mt19937_64 &rng, int nodes)
{
    FlowNetwork net(nodes, nodes);
    std::uniform_int_distribution<int> cap(0, 20);
    std::bernoulli_distribution present(0.45), undirected(0.5);
    for (int u = 0; u < nodes; ++u)
        for (int v = 0; v < nodes; ++v)
            if (u != v && present(rng)) {
                if (undirected(rng) && u < v)
                    net.add_edge(u, v, cap(rng));
                else
                    net.add_arc(u, v, cap(rng));
            }
    std::uniform_int_distribution<int> pick(0, nodes - 1);
    const int s = pick(rng);
    int t = pick(rng);
    while (t == s)
        t = pick(rng);
    net.set_terminals(s, t);
    return net;
}

SupportGraph random_support(const Instance &inst, std::mt19937_64 &rng, double density = 0.35)
{
    std::bernoulli_distribution present(density);
    std::uniform_real_distribution<double> w(0.05, 1.0);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(inst.edge_count());
    for (int e = 0; e < inst.edge_count(); ++e)
        if (present(rng))
            x[e] = w(rng);
    Eigen::VectorXd y = Eigen::VectorXd::Ones(inst.size());
    return SupportGraph(inst, x, y);
}

void expect_valid_flow(const FlowNetwork &net, const MinCutResult &r)
{
    const Capacity inf = net.infinity_value();
    std::vector<Capacity> balance(static_cast<std::size_t>(net.node_count()), 0);
    for (std::size_t k = 0; k < net.arcs().size(); ++k) {
        const Arc &a = net.arcs()[k];
        const Capacity f = r.arc_flow[k];
        const Capacity cap = a.infinite ? inf : a.capacity;
        EXPECT_LE(f, cap);
        EXPECT_GE(f, a.undirected ? -cap : 0);
        balance[a.from] -= f;
        balance[a.to] += f;
    }
    for (int v = 0; v < net.node_count(); ++v)
        if (v != net.source() && v != net.sink())
            EXPECT_EQ(balance[v], 0) << "node " << v;
    if (!r.infinite) {
        EXPECT_EQ(balance[net.sink()], r.value);
        EXPECT_EQ(-balance[net.source()], r.value);
    }
}

}  // namespace

TEST(MaxFlow, SingleArc)
{
    FlowNetwork net(2, 2);
    net.add_arc(0, 1, 1);
    net.set_terminals(0, 1);
    const MinCutResult r = max_flow_min_cut(net);
    EXPECT_EQ(r.value, 1);
    EXPECT_FALSE(r.infinite);
    EXPECT_EQ(r.source_side, VertexSet::of(2, {0}));
}

TEST(MaxFlow, Diamond)
{
    // s = 0, a = 1, b = 2, t = 3
    FlowNetwork net(4, 4);
    net.add_arc(0, 1, 2);
    net.add_arc(0, 2, 1);
    net.add_arc(1, 3, 1);
    net.add_arc(2, 3, 2);
    net.set_terminals(0, 3);
    const MinCutResult r = max_flow_min_cut(net);
    EXPECT_EQ(r.value, 2);
    expect_valid_flow(net, r);
}

TEST(MaxFlow, InfinitePathIsSignalled)
{
    FlowNetwork net(3, 3);
    net.add_infinite_arc(0, 1);
    net.add_infinite_arc(1, 2);
    net.add_arc(0, 2, 5);
    net.set_terminals(0, 2);
    const MinCutResult r = max_flow_min_cut(net);
    EXPECT_TRUE(r.infinite);
}

TEST(MaxFlow, DisconnectedTerminalsGiveZero)
{
    FlowNetwork net(4, 4);
    net.add_edge(0, 1, 3);
    net.add_edge(2, 3, 3);
    net.set_terminals(0, 3);
    const MinCutResult r = max_flow_min_cut(net);
    EXPECT_EQ(r.value, 0);
    EXPECT_EQ(r.source_side, VertexSet::of(4, {0, 1}));
}

TEST(MaxFlow, RejectsBadConstruction)
{
    FlowNetwork net(2, 2);
    EXPECT_THROW(net.set_terminals(1, 1), std::invalid_argument);
    EXPECT_THROW(net.set_terminals(0, 5), std::invalid_argument);
    EXPECT_THROW(net.add_arc(0, 1, -1), std::invalid_argument);
    EXPECT_THROW(max_flow_min_cut(net), std::invalid_argument);
}

TEST(MaxFlow, ScalingRoundsToMicroUnits)
{
    EXPECT_EQ(scale_capacity(0.5), 500000);
    EXPECT_EQ(scale_capacity(1.0 / 3.0), 333333);
    EXPECT_EQ(scale_capacity(-0.1), 0);
}

TEST(MaxFlow, MatchesExhaustiveCutsWithConservation)
{
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 300; ++trial) {
        const int nodes = 2 + trial % 11;
        const FlowNetwork net = random_network(rng, nodes);
        const MinCutResult fast = max_flow_min_cut(net);
        const MinCutResult slow = brute_force_min_cut(net);
        ASSERT_EQ(fast.value, slow.value) << "trial " << trial;
        EXPECT_EQ(net.cut_capacity(fast.source_nodes), fast.value);
        EXPECT_TRUE(fast.source_nodes[net.source()]);
        EXPECT_FALSE(fast.source_nodes[net.sink()]);
        expect_valid_flow(net, fast);
    }
}

TEST(MaxFlow, InfinityExceedsAllFiniteCapacity)
{
    FlowNetwork net(3, 3);
    net.add_edge(0, 1, 4);
    net.add_arc(1, 2, 3);
    net.add_infinite_arc(0, 2);
    EXPECT_EQ(net.finite_total(), 11);
    EXPECT_EQ(net.infinity_value(), 12);
}

TEST(CutNetwork, SingletonSidesUseVerticesAsTerminals)
{
    const Instance inst = random_instance(6, 1);
    std::mt19937_64 rng(1);
    const SupportGraph g = random_support(inst, rng);
    const FlowNetwork net = build_cut_network(g, VertexSet::of(6, {1}), VertexSet::of(6, {4}));
    EXPECT_EQ(net.node_count(), 6);
    EXPECT_EQ(net.source(), 1);
    EXPECT_EQ(net.sink(), 4);
}

TEST(CutNetwork, CoverSideGetsArtificialSink)
{
    const Instance inst = random_instance(6, 1);
    std::mt19937_64 rng(2);
    const SupportGraph g = random_support(inst, rng);
    const VertexSet cu = VertexSet::of(6, {2, 3, 5});
    const FlowNetwork net = build_cut_network(g, VertexSet::of(6, {0}), cu);
    EXPECT_EQ(net.node_count(), 7);
    EXPECT_EQ(net.source(), 0);
    EXPECT_EQ(net.sink(), 6);
    int inf_arcs = 0;
    for (const Arc &a : net.arcs())
        if (a.infinite) {
            ++inf_arcs;
            EXPECT_EQ(a.to, 6);
            EXPECT_TRUE(cu.contains(a.from));
        }
    EXPECT_EQ(inf_arcs, 3);
}

TEST(CutNetwork, TwoCoverSidesGetBothArtificialTerminals)
{
    const Instance inst = random_instance(7, 1);
    std::mt19937_64 rng(3);
    const SupportGraph g = random_support(inst, rng);
    const FlowNetwork net = build_cut_network(g, VertexSet::of(7, {0, 1}), VertexSet::of(7, {4, 5}));
    EXPECT_EQ(net.node_count(), 9);
    EXPECT_GE(net.source(), 7);
    EXPECT_GE(net.sink(), 7);
}

TEST(CutNetwork, OverlappingSidesAreRejected)
{
    const Instance inst = random_instance(5, 1);
    std::mt19937_64 rng(4);
    const SupportGraph g = random_support(inst, rng);
    EXPECT_THROW(build_cut_network(g, VertexSet::of(5, {0, 1}), VertexSet::of(5, {1, 2})),
                 std::invalid_argument);
    EXPECT_THROW(build_cut_network(g, VertexSet(5), VertexSet::of(5, {1})), std::invalid_argument);
}

TEST(CutNetwork, MinCutIsMinimumSeparatingBoundary)
{
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 150; ++trial) {
        const int n = 4 + trial % 7;
        const Instance inst = random_instance(n, 900 + trial);
        const SupportGraph g = random_support(inst, rng, 0.2 + 0.1 * (trial % 5));
        VertexSet a(n), b(n);
        for (int v = 0; v < n; ++v) {
            const int r = static_cast<int>(rng() % 4);
            if (r == 0)
                a.insert(v);
            else if (r == 1)
                b.insert(v);
        }
        if (a.empty()) {
            b.erase(0);
            a.insert(0);
        }
        if (b.empty()) {
            if (a.contains(n - 1))
                continue;
            b.insert(n - 1);
        }
        const MinCutResult r = max_flow_min_cut(build_cut_network(g, a, b));
        ASSERT_FALSE(r.infinite);
        double best = 1e18;
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
            VertexSet s(n);
            for (int v = 0; v < n; ++v)
                if (mask & (1u << v))
                    s.insert(v);
            if (a.is_subset_of(s) && !s.intersects(b))
                best = std::min(best, g.cut_weight(s));
        }
        EXPECT_NEAR(r.weight(), best, 1e-6 * inst.edge_count()) << "trial " << trial;
        EXPECT_TRUE(a.is_subset_of(r.source_side));
        EXPECT_FALSE(r.source_side.intersects(b));
        EXPECT_NEAR(g.cut_weight(r.source_side), r.weight(), 1e-6 * inst.edge_count());
    }
}

TEST(CiNetwork, OverlapEdgesMoveOntoArtificialArc)
{
    // support: triangle 0-1-2 plus edge 3-4; C(v) = {0,1,2}, C(u) = {2,3}, overlap {2}
    const Instance inst = random_instance(5, 1);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(inst.edge_count());
    x[inst.edge_index(0, 1)] = 1;
    x[inst.edge_index(1, 2)] = 1;
    x[inst.edge_index(0, 2)] = 1;
    x[inst.edge_index(3, 4)] = 1;
    const SupportGraph g(inst, x, Eigen::VectorXd::Ones(5));
    const FlowNetwork net = augment_for_ci(g, VertexSet::of(5, {0, 1, 2}), VertexSet::of(5, {2, 3}));
    bool found = false;
    for (const Arc &a : net.arcs())
        if (a.from == 2 && a.to >= 5 && !a.infinite) {
            found = true;
            EXPECT_EQ(a.capacity, 2 * scale_capacity(1.0));
        }
    EXPECT_TRUE(found);

    // an overlap vertex with no support edges at all carries a zero arc
    Eigen::VectorXd x2 = Eigen::VectorXd::Zero(inst.edge_count());
    x2[inst.edge_index(0, 1)] = 1;
    const SupportGraph g2(inst, x2, Eigen::VectorXd::Ones(5));
    const FlowNetwork net2 = augment_for_ci(g2, VertexSet::of(5, {0, 1, 2}), VertexSet::of(5, {2, 3}));
    found = false;
    for (const Arc &a : net2.arcs())
        if (a.from == 2 && a.to >= 5 && !a.infinite) {
            found = true;
            EXPECT_EQ(a.capacity, 0);
        }
    EXPECT_TRUE(found);
}

TEST(CiNetwork, AugmentationMakesInfiniteCutFinite)
{
    // C(v) = {0,1,2}, C(u) = {2,3,4}, overlap {2}; plain attachment of both sides is infinite
    const Instance inst = random_instance(6, 4);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(inst.edge_count());
    for (auto [u, v] : std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}})
        x[inst.edge_index(u, v)] = 1;
    const SupportGraph g(inst, x, Eigen::VectorXd::Ones(6));
    const VertexSet cv = VertexSet::of(6, {0, 1, 2}), cu = VertexSet::of(6, {2, 3, 4});

    FlowNetwork plain(6, 6);
    for (const auto &e : g.edges())
        plain.add_edge(e.u, e.v, scale_capacity(e.x));
    const int s = plain.add_node(), t = plain.add_node();
    cv.for_each([&](int v) { plain.add_infinite_arc(s, v); });
    cu.for_each([&](int v) { plain.add_infinite_arc(v, t); });
    plain.set_terminals(s, t);
    EXPECT_TRUE(max_flow_min_cut(plain).infinite);

    const MinCutResult r = max_flow_min_cut(augment_for_ci(g, cv, cu));
    EXPECT_FALSE(r.infinite);
    EXPECT_TRUE(cv.is_subset_of(r.source_side));
}

TEST(CiNetwork, WeightIsConserved)
{
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 6 + trial % 5;
        const Instance inst = random_instance(n, 40 + trial);
        const SupportGraph g = random_support(inst, rng, 0.4);
        const VertexSet cv = csp::testing::random_subset(n, rng, 0.4) | VertexSet::of(n, {0});
        const VertexSet cu = csp::testing::random_subset(n, rng, 0.4) | VertexSet::of(n, {0, n - 1});
        const FlowNetwork net = augment_for_ci(g, cv, cu);
        Capacity support = 0, network = 0;
        for (const auto &e : g.edges())
            support += scale_capacity(e.x);
        for (const Arc &a : net.arcs())
            if (!a.infinite)
                network += a.capacity;
        EXPECT_EQ(support, network);
    }
}

TEST(CiNetwork, MinCutIsMinimumUnionBoundary)
{
    std::mt19937_64 rng(99);
    int checked = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 5 + trial % 6;
        const Instance inst = random_instance(n, 700 + trial);
        const SupportGraph g = random_support(inst, rng, 0.3 + 0.1 * (trial % 4));
        const VertexSet cv = csp::testing::random_subset(n, rng, 0.35) | VertexSet::of(n, {0});
        const VertexSet cu = csp::testing::random_subset(n, rng, 0.35) | VertexSet::of(n, {0});
        const MinCutResult r = max_flow_min_cut(augment_for_ci(g, cv, cu));
        ASSERT_FALSE(r.infinite);
        double best = 1e18;
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
            VertexSet s(n);
            for (int v = 0; v < n; ++v)
                if (mask & (1u << v))
                    s.insert(v);
            if (!cv.is_subset_of(s) || s.intersects(cu - cv))
                continue;
            best = std::min(best, g.union_cut_weight(s, s & cu));
        }
        EXPECT_NEAR(r.weight(), best, 1e-6 * inst.edge_count()) << "trial " << trial;
        EXPECT_NEAR(g.union_cut_weight(r.source_side, r.source_side & cu), r.weight(),
                    1e-6 * inst.edge_count());
        ++checked;
    }
    EXPECT_EQ(checked, 200);
}

TEST(CiNetwork, DisjointCoversFallBackToPlainNetwork)
{
    const Instance inst = random_instance(6, 2);
    std::mt19937_64 rng(6);
    const SupportGraph g = random_support(inst, rng);
    const VertexSet cv = VertexSet::of(6, {0, 1}), cu = VertexSet::of(6, {3, 4});
    EXPECT_EQ(max_flow_min_cut(augment_for_ci(g, cv, cu)).value,
              max_flow_min_cut(build_cut_network(g, cv, cu)).value);
}
