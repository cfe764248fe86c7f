#pragma once

#include "csp/bnc.hpp"
#include "csp/instance.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace csp {

struct CutCounts {
    long gamma = 0;
    long vertex = 0;
    long link = 0;
    long ci = 0;

    friend bool operator==(const CutCounts &, const CutCounts &) = default;
};

/// One solve as written by the command-line tool; tour ids are 1-based.
struct RunReport {
    std::string instance;
    int k = 0;
    std::string mode;
    std::string status;
    double lb = 0.0;
    std::optional<double> ub;
    double gap_percent = 100.0;
    double time_s = 0.0;
    long nodes = 0;
    CutCounts cuts;
    std::vector<int> tour;

    friend bool operator==(const RunReport &, const RunReport &) = default;
};

/// Rounds half away from zero to two decimals.
double round2(double value);

RunReport make_report(const Instance &inst, int k, Mode mode, const SolveResult &result);

nlohmann::json to_json(const RunReport &report);
RunReport report_from_json(const nlohmann::json &j);

/// Aligned table, one line per report, then one "Avg" line per mode.
std::string bench_table(const std::vector<RunReport> &reports);

/// Vertices, the tour as a closed polyline and one circle per visited vertex with
/// radius equal to the distance to its k-th nearest neighbour. Requires coordinates.
std::string render_svg(const Instance &inst, const RunReport &report);

}  // namespace csp
