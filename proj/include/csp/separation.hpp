#pragma once

#include "csp/cuts.hpp"
#include "csp/instance.hpp"
#include "csp/support_graph.hpp"

#include <array>
#include <vector>

namespace csp {

/// Smallest violation for a cut to count as violated in the full and heuristic routines.
inline constexpr double kMinViolation = 1e-6;

struct SeparationStats {
    std::array<int, 5> by_kind{};   // indexed by CutKind
    long flow_calls = 0;
    double seconds = 0.0;

    int count(CutKind k) const { return by_kind[static_cast<std::size_t>(k)]; }
};

struct SeparationOutcome {
    std::vector<Cut> cuts;
    std::vector<double> violations;   // against the queried point, parallel to cuts
    SeparationStats stats;

    bool empty() const { return cuts.empty(); }
};

struct SeparationOptions {
    /// Build cover-intersection cuts at all (the -X configurations).
    bool cover_intersection = true;
    /// Exact routine only: stop at the first cut whose violation exceeds epsilon.
    bool first_found = false;
    double epsilon = 1.0;
};

/// Thrown when an integer point has a vertex of odd degree.
class MalformedPointError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/**
 * Integer separation. Every connected component of the support graph is a
 * subcycle; nothing is returned when there is only one.
 */
SeparationOutcome separate_integer(const SupportGraph &gi, const CoverageModel &cov,
                                   const SeparationOptions &options = {});

/// Exact fractional separation by minimum cuts over every ordered vertex pair.
SeparationOutcome separate_fractional_exact(const SupportGraph &gf, const CoverageModel &cov,
                                            const SeparationOptions &options = {});

/// Heuristic fractional separation from covering sets and support components.
SeparationOutcome separate_fractional_heuristic(const SupportGraph &gf, const CoverageModel &cov,
                                                const SeparationOptions &options = {});

}  // namespace csp
