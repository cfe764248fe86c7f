#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace csp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class RowSense : std::uint8_t { Less, Greater, Equal };

struct SparseRow {
    std::vector<int> index;
    std::vector<double> value;
    RowSense sense = RowSense::Greater;
    double rhs = 0.0;

    double activity(const Eigen::VectorXd &x) const;
};

/// Outcome of LpModel::add_rows.
struct AddRowsResult {
    std::vector<int> row;      // new row index per input row, -1 when skipped
    int added = 0;
    int duplicates = 0;
};

/**
 * Linear program min c'x s.t. rows, lb <= x <= ub.
 *
 * Structural variables must be boxed. Rows may be appended and removed;
 * a row whose sparse signature (sense, rhs, coefficients) is already present
 * is skipped.
 */
class LpModel {
public:
    int add_column(double cost, double lower, double upper);

    int column_count() const { return static_cast<int>(cost_.size()); }
    int row_count() const { return static_cast<int>(rows_.size()); }

    double cost(int j) const { return cost_[static_cast<std::size_t>(j)]; }
    double lower(int j) const { return lower_[static_cast<std::size_t>(j)]; }
    double upper(int j) const { return upper_[static_cast<std::size_t>(j)]; }
    void set_bounds(int j, double lower, double upper);

    const SparseRow &row(int i) const { return rows_[static_cast<std::size_t>(i)]; }
    const std::vector<SparseRow> &rows() const { return rows_; }

    AddRowsResult add_rows(std::span<const SparseRow> rows);
    int add_row(SparseRow row);

    /// Removes the given rows; indices of the remaining rows shift down.
    void remove_rows(std::vector<int> rows);

    /// Writes the model in CPLEX LP text layout (debugging aid).
    void write_lp(std::ostream &out) const;

private:
    static std::size_t signature(const SparseRow &row);
    bool same_row(const SparseRow &a, const SparseRow &b) const;
    void rebuild_signatures();

    std::vector<double> cost_, lower_, upper_;
    std::vector<SparseRow> rows_;
    std::unordered_multimap<std::size_t, int> signatures_;
};

enum class VarStatus : std::uint8_t { Basic, AtLower, AtUpper };

/// Basis statuses of structural columns and of row logicals.
struct Basis {
    std::vector<VarStatus> columns;
    std::vector<VarStatus> rows;

    bool empty() const { return columns.empty() && rows.empty(); }
};

enum class LpStatus : std::uint8_t { Optimal, Infeasible };

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    double objective = kInfinity;
    Eigen::VectorXd values;          // structural values
    Eigen::VectorXd row_activity;    // a_i x per row
    Eigen::VectorXd duals;           // one per row
    Eigen::VectorXd reduced_costs;   // one per column
    Basis basis;
    long iterations = 0;
    int refactorizations = 0;
    bool warm_started = false;
};

struct SimplexOptions {
    double primal_tolerance = 1e-9;
    double dual_tolerance = 1e-7;
    double pivot_tolerance = 1e-9;
    int refactor_interval = 100;
    int stall_limit = 300;
    long max_iterations = 5'000'000;
};

/**
 * Bounded dual simplex.
 *
 * Starts from `warm` when it is a valid basis for `model` (right sizes and
 * exactly row_count() basic entries), otherwise from the all-logical basis.
 * Uses dual steepest-edge pricing, a bound-flipping Harris ratio test and
 * falls back to Bland's rule after `stall_limit` degenerate pivots.
 */
LpSolution solve_lp(const LpModel &model, const Basis *warm = nullptr,
                    const SimplexOptions &options = {});

}  // namespace csp
