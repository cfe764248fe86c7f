#include "csp/report.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>

namespace csp {

double round2(double value)
{
    return std::round(value * 100.0) / 100.0;
}

RunReport make_report(const Instance &inst, int k, Mode mode, const SolveResult &result)
{
    RunReport r;
    r.instance = inst.name();
    r.k = k;
    r.mode = to_string(mode);
    r.status = to_string(result.status);
    r.lb = result.lower_bound;
    r.ub = result.upper_bound;
    r.gap_percent = round2(optimality_gap(result.lower_bound, result.upper_bound));
    r.time_s = result.stats.seconds;
    r.nodes = result.stats.nodes;
    r.cuts.gamma = result.stats.count(CutKind::Gamma);
    r.cuts.vertex = result.stats.count(CutKind::Vertex);
    r.cuts.link = result.stats.count(CutKind::Link) + result.stats.count(CutKind::Subtour);
    r.cuts.ci = result.stats.count(CutKind::CoverIntersection);
    for (int v : result.tour)
        r.tour.push_back(v + 1);
    return r;
}

nlohmann::json to_json(const RunReport &r)
{
    nlohmann::json j;
    j["instance"] = r.instance;
    j["k"] = r.k;
    j["mode"] = r.mode;
    j["status"] = r.status;
    j["lb"] = r.lb;
    j["ub"] = r.ub ? nlohmann::json(*r.ub) : nlohmann::json(nullptr);
    j["gap_percent"] = r.gap_percent;
    j["time_s"] = r.time_s;
    j["nodes"] = r.nodes;
    j["cuts"] = {{"gamma", r.cuts.gamma}, {"vertex", r.cuts.vertex}, {"link", r.cuts.link}, {"ci", r.cuts.ci}};
    j["tour"] = r.tour;
    return j;
}

RunReport report_from_json(const nlohmann::json &j)
{
    RunReport r;
    r.instance = j.at("instance").get<std::string>();
    r.k = j.at("k").get<int>();
    r.mode = j.at("mode").get<std::string>();
    r.status = j.value("status", std::string());
    r.lb = j.at("lb").get<double>();
    if (!j.at("ub").is_null())
        r.ub = j.at("ub").get<double>();
    r.gap_percent = j.at("gap_percent").get<double>();
    r.time_s = j.at("time_s").get<double>();
    r.nodes = j.at("nodes").get<long>();
    const auto &c = j.at("cuts");
    r.cuts = {c.at("gamma").get<long>(), c.at("vertex").get<long>(), c.at("link").get<long>(),
              c.at("ci").get<long>()};
    r.tour = j.at("tour").get<std::vector<int>>();
    return r;
}

std::string bench_table(const std::vector<RunReport> &reports)
{
    std::ostringstream out;
    out << std::fixed;
    auto row = [&](const std::string &inst, const std::string &k, const std::string &mode, double lb,
                   const std::string &ub, double gap, double time, double nodes) {
        out << std::left << std::setw(16) << inst << std::right << std::setw(4) << k << "  " << std::left
            << std::setw(6) << mode << std::right << std::setprecision(2) << std::setw(12) << lb
            << std::setw(12) << ub << std::setw(8) << gap << std::setw(10) << time << std::setprecision(1)
            << std::setw(10) << nodes << '\n';
    };
    out << std::left << std::setw(16) << "instance" << std::right << std::setw(4) << "k" << "  " << std::left
        << std::setw(6) << "mode" << std::right << std::setw(12) << "LB" << std::setw(12) << "UB"
        << std::setw(8) << "Gap" << std::setw(10) << "Time" << std::setw(10) << "Nodes" << '\n';

    std::vector<std::string> modes;
    for (const auto &r : reports) {
        std::ostringstream ub;
        ub << std::fixed << std::setprecision(2);
        if (r.ub)
            ub << *r.ub;
        else
            ub << "-";
        row(r.instance, std::to_string(r.k), r.mode, r.lb, ub.str(), r.gap_percent, r.time_s,
            static_cast<double>(r.nodes));
        if (std::find(modes.begin(), modes.end(), r.mode) == modes.end())
            modes.push_back(r.mode);
    }
    for (const auto &m : modes) {
        double lb = 0, ub = 0, gap = 0, time = 0, nodes = 0;
        int count = 0, with_ub = 0;
        for (const auto &r : reports) {
            if (r.mode != m)
                continue;
            ++count;
            lb += r.lb;
            gap += r.gap_percent;
            time += r.time_s;
            nodes += static_cast<double>(r.nodes);
            if (r.ub) {
                ub += *r.ub;
                ++with_ub;
            }
        }
        std::ostringstream ubs;
        ubs << std::fixed << std::setprecision(2);
        if (with_ub == count)
            ubs << ub / count;
        else
            ubs << "-";
        row("Avg", "", m, lb / count, ubs.str(), gap / count, time / count, nodes / count);
    }
    return out.str();
}

std::string render_svg(const Instance &inst, const RunReport &report)
{
    if (!inst.has_coordinates())
        throw std::invalid_argument("plotting needs vertex coordinates");
    if (report.tour.empty())
        throw std::invalid_argument("report has no tour");
    const int n = inst.size();
    const auto &pts = inst.points();

    std::vector<double> radius(static_cast<std::size_t>(n), 0.0);
    for (int v = 0; v < n; ++v) {
        std::vector<double> d;
        for (int u = 0; u < n; ++u)
            if (u != v)
                d.push_back(inst.distance(u, v));
        std::sort(d.begin(), d.end());
        if (report.k >= 1 && report.k <= static_cast<int>(d.size()))
            radius[v] = d[static_cast<std::size_t>(report.k - 1)];
    }

    double minx = pts[0].x, maxx = pts[0].x, miny = pts[0].y, maxy = pts[0].y;
    for (const auto &p : pts) {
        minx = std::min(minx, p.x);
        maxx = std::max(maxx, p.x);
        miny = std::min(miny, p.y);
        maxy = std::max(maxy, p.y);
    }
    double reach = 0.0;
    for (int v : report.tour)
        reach = std::max(reach, radius[v - 1]);
    const double span = std::max({maxx - minx, maxy - miny, 1.0});
    const double margin = reach + 0.02 * span;
    const double dot = 0.006 * span;

    std::ostringstream out;
    out << std::setprecision(10);
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"" << minx - margin << ' '
        << miny - margin << ' ' << maxx - minx + 2 * margin << ' ' << maxy - miny + 2 * margin << "\">\n"
        << "<title>" << report.instance << " k=" << report.k << " " << report.mode << "</title>\n";
    for (int v : report.tour) {
        const auto &p = pts[static_cast<std::size_t>(v - 1)];
        out << "<circle class=\"cover\" cx=\"" << p.x << "\" cy=\"" << p.y << "\" r=\"" << radius[v - 1]
            << "\" fill=\"none\" stroke=\"#9ab\" stroke-width=\"" << dot / 3 << "\"/>\n";
    }
    out << "<polyline class=\"tour\" fill=\"none\" stroke=\"#c33\" stroke-width=\"" << dot / 2 << "\" points=\"";
    for (std::size_t i = 0; i <= report.tour.size(); ++i) {
        const auto &p = pts[static_cast<std::size_t>(report.tour[i % report.tour.size()] - 1)];
        out << (i ? " " : "") << p.x << ',' << p.y;
    }
    out << "\"/>\n";
    for (const auto &p : pts)
        out << "<circle class=\"vertex\" cx=\"" << p.x << "\" cy=\"" << p.y << "\" r=\"" << dot
            << "\" fill=\"#444\"/>\n";
    for (int v : report.tour) {
        const auto &p = pts[static_cast<std::size_t>(v - 1)];
        out << "<circle class=\"visit\" cx=\"" << p.x << "\" cy=\"" << p.y << "\" r=\"" << 1.8 * dot
            << "\" fill=\"#c33\"/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace csp
