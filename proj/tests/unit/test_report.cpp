#include "csp/report.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <regex>

using namespace csp;
using csp::testing::points_instance;
using csp::testing::random_instance;
using csp::testing::self_cover;

namespace {

RunReport sample(std::string name, std::string mode, double lb, std::optional<double> ub)
{
    RunReport r;
    r.instance = std::move(name);
    r.k = 7;
    r.mode = std::move(mode);
    r.status = ub && *ub == lb ? "optimal" : "feasible";
    r.lb = lb;
    r.ub = ub;
    r.gap_percent = round2(optimality_gap(lb, ub));
    r.time_s = 1.25;
    r.nodes = 3;
    r.cuts = {4, 1, 2, 0};
    r.tour = {1, 3, 2};
    return r;
}

int count(const std::string &text, const std::string &what)
{
    int n = 0;
    for (std::size_t at = text.find(what); at != std::string::npos; at = text.find(what, at + 1))
        ++n;
    return n;
}

std::vector<double> numbers_on_line(const std::string &line)
{
    std::vector<double> out;
    static const std::regex number(R"(-?\d+\.\d+)");
    for (auto it = std::sregex_iterator(line.begin(), line.end(), number); it != std::sregex_iterator(); ++it)
        out.push_back(std::stod(it->str()));
    return out;
}

}  // namespace

TEST(Report, RoundsGapToTwoDecimals)
{
    EXPECT_DOUBLE_EQ(round2(1.234), 1.23);
    EXPECT_DOUBLE_EQ(round2(1.235001), 1.24);
    EXPECT_DOUBLE_EQ(round2(0.0), 0.0);
    EXPECT_DOUBLE_EQ(round2(100.0), 100.0);
}

TEST(Report, BuiltFromASolve)
{
    const Instance inst = points_instance({{0, 0}, {3, 0}, {0, 4}}, "tri");
    SolveResult s;
    s.lower_bound = 11.0;
    s.upper_bound = 12.0;
    s.tour = {0, 2, 1};
    s.status = SolveStatus::Feasible;
    s.stats.nodes = 5;
    s.stats.cuts[static_cast<std::size_t>(CutKind::Link)] = 2;
    s.stats.cuts[static_cast<std::size_t>(CutKind::Subtour)] = 1;
    s.stats.cuts[static_cast<std::size_t>(CutKind::CoverIntersection)] = 4;
    const RunReport r = make_report(inst, 1, Mode::IFhX, s);
    EXPECT_EQ(r.instance, "tri");
    EXPECT_EQ(r.mode, "IFhX");
    EXPECT_EQ(r.status, "feasible");
    EXPECT_DOUBLE_EQ(r.gap_percent, 8.33);
    EXPECT_EQ(r.tour, (std::vector<int>{1, 3, 2}));
    EXPECT_EQ(r.cuts.link, 3);
    EXPECT_EQ(r.cuts.ci, 4);
    EXPECT_EQ(r.nodes, 5);
}

TEST(Report, GapMatchesTheFormulaOnRealSolves)
{
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const Instance inst = random_instance(40, seed);
        const CoverageModel cov = build_coverage(inst, 5);
        SolverConfig cfg;
        cfg.mode = Mode::IFh;
        cfg.time_limit = 0.3;
        const SolveResult s = solve(inst, cov, cfg);
        const RunReport r = make_report(inst, 5, Mode::IFh, s);
        ASSERT_TRUE(r.ub);
        EXPECT_DOUBLE_EQ(r.gap_percent, round2((*r.ub - r.lb) / *r.ub * 100.0));
    }
}

TEST(Report, JsonRoundTrip)
{
    for (const RunReport &r : {sample("a", "IFvp", 10.0, 12.0), sample("b", "I", 9.5, std::nullopt)}) {
        const nlohmann::json j = to_json(r);
        for (const char *field : {"instance", "k", "mode", "lb", "ub", "gap_percent", "time_s", "nodes", "cuts", "tour"})
            EXPECT_TRUE(j.contains(field)) << field;
        for (const char *kind : {"gamma", "vertex", "link", "ci"})
            EXPECT_TRUE(j["cuts"].contains(kind)) << kind;
        EXPECT_EQ(report_from_json(nlohmann::json::parse(j.dump())), r);
    }
    EXPECT_TRUE(to_json(sample("b", "I", 9.5, std::nullopt))["ub"].is_null());
}

TEST(Report, MalformedJsonIsRejected)
{
    nlohmann::json j = to_json(sample("a", "I", 1.0, 2.0));
    j.erase("lb");
    EXPECT_THROW(report_from_json(j), nlohmann::json::exception);
}

TEST(BenchTable, OneLinePerReportThenAverages)
{
    const std::vector<RunReport> reports{sample("a", "IFh", 10.0, 10.0), sample("b", "IFh", 20.0, 25.0),
                                         sample("a", "IFhX", 10.0, 10.0), sample("b", "IFhX", 22.0, 25.0)};
    const std::string table = bench_table(reports);
    std::istringstream in(table);
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);)
        lines.push_back(line);
    ASSERT_EQ(lines.size(), 1u + 4u + 2u);
    EXPECT_EQ(lines[5].rfind("Avg", 0), 0u);
    EXPECT_EQ(lines[6].rfind("Avg", 0), 0u);

    const std::vector<double> avg = numbers_on_line(lines[5]);
    ASSERT_GE(avg.size(), 4u);
    EXPECT_DOUBLE_EQ(avg[0], 15.0);
    EXPECT_DOUBLE_EQ(avg[1], 17.5);
    EXPECT_DOUBLE_EQ(avg[2], round2((0.0 + 20.0) / 2));
    const std::vector<double> avgx = numbers_on_line(lines[6]);
    EXPECT_DOUBLE_EQ(avgx[0], 16.0);
}

TEST(BenchTable, MissingUpperBoundShowsADash)
{
    const std::string table = bench_table({sample("a", "I", 5.0, std::nullopt)});
    EXPECT_EQ(count(table, " -"), 2);
}

TEST(Svg, TriangleTour)
{
    const Instance inst = points_instance({{0, 0}, {3, 0}, {0, 4}}, "tri");
    RunReport r = sample("tri", "I", 12.0, 12.0);
    r.k = 1;
    r.tour = {1, 2, 3};
    const std::string svg = render_svg(inst, r);
    EXPECT_EQ(svg.rfind("<?xml", 0), 0u);
    EXPECT_NE(svg.find("<svg"), std::string::npos);
    EXPECT_EQ(count(svg, "class=\"cover\""), 3);
    EXPECT_EQ(count(svg, "class=\"vertex\""), 3);
    EXPECT_EQ(count(svg, "class=\"visit\""), 3);
    EXPECT_EQ(count(svg, "<polyline"), 1);
    EXPECT_NE(svg.find("points=\"0,0 3,0 0,4 0,0\""), std::string::npos);
    EXPECT_NE(svg.find("r=\"3\""), std::string::npos);
}

TEST(Svg, DrawsEveryVertexAndAClosedPolylineWithinTheRoundingBand)
{
    const Instance inst = random_instance(25, 9);
    const CoverageModel cov = build_coverage(inst, 3);
    const SolveResult s = solve(inst, cov);
    const RunReport r = make_report(inst, 3, Mode::IFhX, s);
    const std::string svg = render_svg(inst, r);
    EXPECT_EQ(count(svg, "class=\"vertex\""), 25);
    EXPECT_EQ(count(svg, "class=\"visit\""), static_cast<int>(r.tour.size()));

    const std::size_t at = svg.find("points=\"") + 8;
    std::istringstream pts(svg.substr(at, svg.find('"', at) - at));
    std::vector<std::pair<double, double>> xy;
    for (std::string tok; pts >> tok;) {
        const std::size_t comma = tok.find(',');
        xy.emplace_back(std::stod(tok.substr(0, comma)), std::stod(tok.substr(comma + 1)));
    }
    ASSERT_EQ(xy.size(), r.tour.size() + 1);
    EXPECT_EQ(xy.front(), xy.back());
    double length = 0.0;
    for (std::size_t i = 0; i + 1 < xy.size(); ++i)
        length += std::hypot(xy[i + 1].first - xy[i].first, xy[i + 1].second - xy[i].second);
    const double half = inst.size() / 2.0;
    EXPECT_GE(length, *r.ub - half);
    EXPECT_LE(length, *r.ub + half);
}

TEST(Svg, RefusesReportsWithoutATour)
{
    const Instance inst = random_instance(5, 1);
    RunReport r = sample("x", "I", 1.0, std::nullopt);
    r.tour.clear();
    EXPECT_THROW(render_svg(inst, r), std::invalid_argument);
}
