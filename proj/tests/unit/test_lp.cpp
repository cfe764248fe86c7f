#include "csp/cuts.hpp"
#include "csp/formulation.hpp"
#include "csp/lp.hpp"
#include "csp/oracle.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace csp;
using csp::testing::cover_sets;
using csp::testing::full_cover;
using csp::testing::points_instance;
using csp::testing::random_instance;
using csp::testing::random_lp;
using csp::testing::self_cover;

namespace {

SparseRow row(std::vector<int> idx, std::vector<double> val, RowSense sense, double rhs)
{
    SparseRow r;
    r.index = std::move(idx);
    r.value = std::move(val);
    r.sense = sense;
    r.rhs = rhs;
    return r;
}

void expect_feasible(const LpModel &lp, const LpSolution &sol, double tol = 1e-9)
{
    ASSERT_EQ(sol.status, LpStatus::Optimal);
    for (int j = 0; j < lp.column_count(); ++j) {
        EXPECT_GE(sol.values[j], lp.lower(j) - tol);
        EXPECT_LE(sol.values[j], lp.upper(j) + tol);
    }
    for (int i = 0; i < lp.row_count(); ++i) {
        const SparseRow &r = lp.row(i);
        const double act = r.activity(sol.values);
        const double scaled = tol * (1.0 + std::abs(r.rhs));
        if (r.sense != RowSense::Less)
            EXPECT_GE(act, r.rhs - scaled) << "row " << i;
        if (r.sense != RowSense::Greater)
            EXPECT_LE(act, r.rhs + scaled) << "row " << i;
    }
    double obj = 0.0;
    for (int j = 0; j < lp.column_count(); ++j)
        obj += lp.cost(j) * sol.values[j];
    EXPECT_NEAR(obj, sol.objective, 1e-9 * (1.0 + std::abs(obj)));
}

Basis padded(Basis b, int rows)
{
    b.rows.resize(static_cast<std::size_t>(rows), VarStatus::Basic);
    return b;
}

}  // namespace

TEST(Simplex, SingleLowerBoundRow)
{
    LpModel lp;
    lp.add_column(1.0, 0.0, 1.0);
    lp.add_row(row({0}, {1.0}, RowSense::Greater, 0.5));
    const LpSolution sol = solve_lp(lp);
    ASSERT_EQ(sol.status, LpStatus::Optimal);
    EXPECT_NEAR(sol.objective, 0.5, 1e-12);
}

TEST(Simplex, CoveringRowOverTwoColumns)
{
    LpModel lp;
    lp.add_column(1.0, 0.0, 1.0);
    lp.add_column(1.0, 0.0, 1.0);
    lp.add_row(row({0, 1}, {1.0, 1.0}, RowSense::Greater, 1.0));
    const LpSolution sol = solve_lp(lp);
    ASSERT_EQ(sol.status, LpStatus::Optimal);
    EXPECT_NEAR(sol.objective, 1.0, 1e-12);
    expect_feasible(lp, sol);
}

TEST(Simplex, DetectsInfeasibility)
{
    LpModel lp;
    lp.add_column(1.0, 0.0, 1.0);
    lp.add_row(row({0}, {1.0}, RowSense::Greater, 1.5));
    EXPECT_EQ(solve_lp(lp).status, LpStatus::Infeasible);

    LpModel eq;
    eq.add_column(0.0, 0.0, 1.0);
    eq.add_column(0.0, 0.0, 1.0);
    eq.add_row(row({0, 1}, {1.0, 1.0}, RowSense::Equal, 1.0));
    eq.add_row(row({0, 1}, {1.0, -1.0}, RowSense::Greater, 1.5));
    EXPECT_EQ(solve_lp(eq).status, LpStatus::Infeasible);
}

TEST(Simplex, NoRowsSitsOnCheapestBounds)
{
    LpModel lp;
    lp.add_column(2.0, -1.0, 3.0);
    lp.add_column(-1.0, 0.0, 4.0);
    const LpSolution sol = solve_lp(lp);
    ASSERT_EQ(sol.status, LpStatus::Optimal);
    EXPECT_NEAR(sol.objective, -6.0, 1e-12);
}

TEST(Simplex, MatchesVertexEnumeration)
{
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 80; ++trial) {
        const int cols = 1 + static_cast<int>(rng() % 9);
        const int rows = 1 + static_cast<int>(rng() % 7);
        const LpModel lp = random_lp(rng, cols, rows, trial % 4 == 0 ? 0.3 : 0.0);
        const double expected = lp_vertex_enumeration(lp);
        const LpSolution sol = solve_lp(lp);
        if (std::isinf(expected)) {
            EXPECT_EQ(sol.status, LpStatus::Infeasible) << "trial " << trial;
            continue;
        }
        ASSERT_EQ(sol.status, LpStatus::Optimal) << "trial " << trial;
        EXPECT_NEAR(sol.objective, expected, 1e-7) << "trial " << trial;
        expect_feasible(lp, sol);
    }
}

TEST(Simplex, SameModelSameAnswerAndBasis)
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const LpModel lp = random_lp(rng, 10, 8);
        const LpSolution a = solve_lp(lp), b = solve_lp(lp);
        ASSERT_EQ(a.status, b.status);
        if (a.status != LpStatus::Optimal)
            continue;
        EXPECT_EQ(a.objective, b.objective);
        EXPECT_EQ(a.basis.columns, b.basis.columns);
        EXPECT_EQ(a.basis.rows, b.basis.rows);
    }
}

TEST(Simplex, WarmStartAgreesWithColdStart)
{
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        LpModel lp = random_lp(rng, 9, 4);
        const LpSolution first = solve_lp(lp);
        if (first.status != LpStatus::Optimal)
            continue;
        const LpModel more = random_lp(rng, 9, 3);
        for (const SparseRow &r : more.rows())
            lp.add_row(r);
        const Basis warm = padded(first.basis, lp.row_count());
        const LpSolution hot = solve_lp(lp, &warm);
        const LpSolution cold = solve_lp(lp);
        ASSERT_EQ(hot.status, cold.status);
        if (cold.status == LpStatus::Optimal)
            EXPECT_NEAR(hot.objective, cold.objective, 1e-7);
    }
}

TEST(Simplex, InvalidWarmBasisFallsBackToColdStart)
{
    std::mt19937_64 rng(3);
    const LpModel lp = random_lp(rng, 6, 4);
    Basis junk;
    junk.columns.assign(6, VarStatus::Basic);
    junk.rows.assign(4, VarStatus::Basic);
    const LpSolution cold = solve_lp(lp), warm = solve_lp(lp, &junk);
    ASSERT_EQ(cold.status, warm.status);
    if (cold.status == LpStatus::Optimal)
        EXPECT_NEAR(cold.objective, warm.objective, 1e-9);
}

TEST(Simplex, AddingRowsNeverLowersTheObjective)
{
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 30; ++trial) {
        LpModel lp = random_lp(rng, 8, 2);
        const LpModel extra = random_lp(rng, 8, 5);
        double last = -kInfinity;
        LpSolution sol = solve_lp(lp);
        for (const SparseRow &r : extra.rows()) {
            if (sol.status != LpStatus::Optimal)
                break;
            EXPECT_GE(sol.objective, last - 1e-9);
            last = sol.objective;
            lp.add_row(r);
            sol = solve_lp(lp);
        }
        if (sol.status == LpStatus::Optimal)
            EXPECT_GE(sol.objective, last - 1e-9);
    }
}

TEST(Simplex, TighterBoundsNeverLowerTheObjective)
{
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 30; ++trial) {
        LpModel lp = random_lp(rng, 8, 5);
        LpSolution sol = solve_lp(lp);
        for (int j = 0; j < lp.column_count() && sol.status == LpStatus::Optimal; ++j) {
            const double before = sol.objective;
            const double mid = std::floor((lp.lower(j) + lp.upper(j)) / 2.0);
            lp.set_bounds(j, mid, lp.upper(j));
            sol = solve_lp(lp);
            if (sol.status == LpStatus::Optimal)
                EXPECT_GE(sol.objective, before - 1e-9);
        }
    }
}

TEST(Model, DuplicateRowsAreSkippedAndCounted)
{
    LpModel lp;
    lp.add_column(1.0, 0.0, 1.0);
    lp.add_column(1.0, 0.0, 1.0);
    const std::vector<SparseRow> rows{row({0, 1}, {1.0, 1.0}, RowSense::Greater, 1.0),
                                      row({1, 0}, {1.0, 1.0}, RowSense::Greater, 1.0),
                                      row({0, 1}, {1.0, 1.0}, RowSense::Greater, 0.5)};
    const AddRowsResult r = lp.add_rows(rows);
    EXPECT_EQ(r.added, 2);
    EXPECT_EQ(r.duplicates, 1);
    EXPECT_EQ(r.row[1], -1);
    EXPECT_EQ(lp.row_count(), 2);
}

TEST(Model, RemovingRowsShiftsIndices)
{
    LpModel lp;
    lp.add_column(1.0, 0.0, 1.0);
    for (int i = 0; i < 4; ++i)
        lp.add_row(row({0}, {1.0}, RowSense::Greater, 0.1 * i));
    lp.remove_rows({0, 2});
    ASSERT_EQ(lp.row_count(), 2);
    EXPECT_DOUBLE_EQ(lp.row(0).rhs, 0.1);
    EXPECT_DOUBLE_EQ(lp.row(1).rhs, 0.30000000000000004);
    EXPECT_EQ(lp.add_row(row({0}, {1.0}, RowSense::Greater, 0.0)), 2);
}

TEST(Model, RejectsMalformedInput)
{
    LpModel lp;
    EXPECT_THROW(lp.add_column(1.0, 0.0, kInfinity), std::invalid_argument);
    EXPECT_THROW(lp.add_column(1.0, 1.0, 0.0), std::invalid_argument);
    lp.add_column(1.0, 0.0, 1.0);
    EXPECT_THROW(lp.add_row(row({1}, {1.0}, RowSense::Greater, 0.0)), std::invalid_argument);
    EXPECT_THROW(lp.add_row(row({0}, {}, RowSense::Greater, 0.0)), std::invalid_argument);
    EXPECT_THROW(lp.set_bounds(0, 1.0, 0.0), std::invalid_argument);
}

TEST(Model, WritesLpText)
{
    LpModel lp;
    lp.add_column(3.0, 0.0, 1.0);
    lp.add_column(-1.0, 0.0, 2.0);
    lp.add_row(row({0, 1}, {1.0, -2.0}, RowSense::Less, 4.0));
    std::ostringstream out;
    lp.write_lp(out);
    const std::string text = out.str();
    EXPECT_NE(text.find("Minimize"), std::string::npos);
    EXPECT_NE(text.find("Subject To"), std::string::npos);
    EXPECT_NE(text.find("<= 4"), std::string::npos);
    EXPECT_NE(text.find("Bounds"), std::string::npos);
}

TEST(RootModel, ShapeFollowsVariableLayout)
{
    const Instance inst = random_instance(6, 4);
    const LpModel lp = build_root_model(inst, self_cover(6));
    EXPECT_EQ(lp.column_count(), 15 + 6);
    EXPECT_EQ(lp.row_count(), 12);
    const VariableLayout lay(inst);
    for (int e = 0; e < inst.edge_count(); ++e) {
        const Edge &ed = inst.edge(e);
        EXPECT_EQ(lp.cost(lay.x(e)), inst.cost(ed.u, ed.v));
    }
    for (int v = 0; v < 6; ++v)
        EXPECT_EQ(lp.cost(lay.y(v)), 0.0);
    for (int j = 0; j < lp.column_count(); ++j) {
        EXPECT_EQ(lp.lower(j), 0.0);
        EXPECT_EQ(lp.upper(j), 1.0);
    }
}

TEST(RootModel, SelfCoverTriangleForcesThePerimeter)
{
    const Instance inst = points_instance({{0, 0}, {3, 0}, {0, 4}});
    const LpSolution sol = solve_lp(build_root_model(inst, self_cover(3)));
    ASSERT_EQ(sol.status, LpStatus::Optimal);
    EXPECT_NEAR(sol.objective, 12.0, 1e-9);
}

TEST(RootModel, FullCoverTriangleMatchesEnumeration)
{
    const Instance inst = points_instance({{0, 0}, {3, 0}, {0, 4}});
    const LpModel lp = build_root_model(inst, full_cover(3));
    const LpSolution sol = solve_lp(lp);
    ASSERT_EQ(sol.status, LpStatus::Optimal);
    EXPECT_NEAR(sol.objective, lp_vertex_enumeration(lp), 1e-7);
    EXPECT_LE(sol.objective, 12.0 + 1e-9);
}

TEST(RootModel, RelaxationBoundsTheOptimum)
{
    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
        const Instance inst = random_instance(7, seed);
        const CoverageModel cov = build_coverage(inst, 1 + static_cast<int>(seed % 3));
        const LpSolution sol = solve_lp(build_root_model(inst, cov));
        ASSERT_EQ(sol.status, LpStatus::Optimal);
        EXPECT_LE(sol.objective, *brute_force_optimum(inst, cov).upper_bound + 1e-9);
    }
}

TEST(RootModel, SatisfiedRowKeepsObjectiveAndViolatedRowRaisesIt)
{
    // two far-apart triangles, every vertex covers only itself
    const Instance inst = points_instance({{0, 0}, {1, 0}, {0, 1}, {50, 50}, {51, 50}, {50, 51}});
    const CoverageModel cov = self_cover(6);
    LpModel lp = build_root_model(inst, cov);
    const LpSolution before = solve_lp(lp);
    ASSERT_EQ(before.status, LpStatus::Optimal);

    SparseRow loose;
    const VariableLayout lay(inst);
    loose.index = {lay.y(0)};
    loose.value = {1.0};
    loose.sense = RowSense::Greater;
    loose.rhs = 0.0;
    lp.add_row(loose);
    const LpSolution same = solve_lp(lp);
    EXPECT_NEAR(same.objective, before.objective, 1e-9);

    const Cut cut = Cut::gamma(VertexSet::of(6, {0, 1, 2}), cov);
    EXPECT_GT(cut.violation(inst, before.values.head(inst.edge_count()), before.values.tail(6)), 1.0);
    lp.add_row(cut.to_lp_row(inst));
    const LpSolution after = solve_lp(lp);
    ASSERT_EQ(after.status, LpStatus::Optimal);
    EXPECT_GT(after.objective, before.objective + 1.0);
}
