#include "csp/lp.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <boost/container_hash/hash.hpp>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace csp {

double SparseRow::activity(const Eigen::VectorXd &x) const
{
    double s = 0.0;
    for (std::size_t k = 0; k < index.size(); ++k)
        s += value[k] * x[index[k]];
    return s;
}

int LpModel::add_column(double cost, double lower, double upper)
{
    if (!std::isfinite(lower) || !std::isfinite(upper))
        throw std::invalid_argument("structural variables must be boxed");
    if (lower > upper)
        throw std::invalid_argument("column lower bound exceeds upper bound");
    cost_.push_back(cost);
    lower_.push_back(lower);
    upper_.push_back(upper);
    return column_count() - 1;
}

void LpModel::set_bounds(int j, double lower, double upper)
{
    if (!std::isfinite(lower) || !std::isfinite(upper) || lower > upper)
        throw std::invalid_argument("invalid bounds for column " + std::to_string(j));
    lower_[static_cast<std::size_t>(j)] = lower;
    upper_[static_cast<std::size_t>(j)] = upper;
}

std::size_t LpModel::signature(const SparseRow &row)
{
    std::size_t seed = static_cast<std::size_t>(row.sense);
    boost::hash_combine(seed, row.rhs);
    for (std::size_t k = 0; k < row.index.size(); ++k) {
        boost::hash_combine(seed, row.index[k]);
        boost::hash_combine(seed, row.value[k]);
    }
    return seed;
}

bool LpModel::same_row(const SparseRow &a, const SparseRow &b) const
{
    return a.sense == b.sense && a.rhs == b.rhs && a.index == b.index && a.value == b.value;
}

int LpModel::add_row(SparseRow row)
{
    if (row.index.size() != row.value.size())
        throw std::invalid_argument("row index/value size mismatch");
    for (int j : row.index)
        if (j < 0 || j >= column_count())
            throw std::invalid_argument("row references unknown column " + std::to_string(j));
    // canonical order so the signature does not depend on input order
    std::vector<std::size_t> perm(row.index.size());
    for (std::size_t k = 0; k < perm.size(); ++k)
        perm[k] = k;
    std::sort(perm.begin(), perm.end(),
              [&](std::size_t a, std::size_t b) { return row.index[a] < row.index[b]; });
    SparseRow canon;
    canon.sense = row.sense;
    canon.rhs = row.rhs;
    for (std::size_t k : perm) {
        if (!canon.index.empty() && canon.index.back() == row.index[k]) {
            canon.value.back() += row.value[k];
            continue;
        }
        canon.index.push_back(row.index[k]);
        canon.value.push_back(row.value[k]);
    }

    const std::size_t sig = signature(canon);
    auto [lo, hi] = signatures_.equal_range(sig);
    for (auto it = lo; it != hi; ++it)
        if (same_row(rows_[static_cast<std::size_t>(it->second)], canon))
            return -1;
    rows_.push_back(std::move(canon));
    signatures_.emplace(sig, row_count() - 1);
    return row_count() - 1;
}

AddRowsResult LpModel::add_rows(std::span<const SparseRow> rows)
{
    AddRowsResult out;
    for (const auto &r : rows) {
        const int idx = add_row(r);
        out.row.push_back(idx);
        if (idx < 0)
            ++out.duplicates;
        else
            ++out.added;
    }
    return out;
}

void LpModel::remove_rows(std::vector<int> rows)
{
    if (rows.empty())
        return;
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    std::vector<SparseRow> kept;
    kept.reserve(rows_.size() - rows.size());
    std::size_t k = 0;
    for (int i = 0; i < row_count(); ++i) {
        if (k < rows.size() && rows[k] == i) {
            ++k;
            continue;
        }
        kept.push_back(std::move(rows_[static_cast<std::size_t>(i)]));
    }
    rows_ = std::move(kept);
    rebuild_signatures();
}

void LpModel::rebuild_signatures()
{
    signatures_.clear();
    for (int i = 0; i < row_count(); ++i)
        signatures_.emplace(signature(rows_[static_cast<std::size_t>(i)]), i);
}

void LpModel::write_lp(std::ostream &out) const
{
    auto term = [&](double c, int j, bool first) {
        if (c < 0)
            out << (first ? "- " : " - ");
        else if (!first)
            out << " + ";
        out << std::abs(c) << " c" << j;
    };
    out << "Minimize\n obj:";
    bool first = true;
    for (int j = 0; j < column_count(); ++j) {
        if (cost(j) == 0.0)
            continue;
        out << ' ';
        term(cost(j), j, first);
        first = false;
    }
    if (first)
        out << " 0 c0";
    out << "\nSubject To\n";
    for (int i = 0; i < row_count(); ++i) {
        const auto &r = rows_[static_cast<std::size_t>(i)];
        out << " r" << i << ": ";
        for (std::size_t k = 0; k < r.index.size(); ++k)
            term(r.value[k], r.index[k], k == 0);
        if (r.index.empty())
            out << "0 c0";
        out << (r.sense == RowSense::Less ? " <= " : r.sense == RowSense::Greater ? " >= " : " = ")
            << r.rhs << '\n';
    }
    out << "Bounds\n";
    for (int j = 0; j < column_count(); ++j)
        out << ' ' << lower(j) << " <= c" << j << " <= " << upper(j) << '\n';
    out << "End\n";
}

namespace {

using SpMat = Eigen::SparseMatrix<double>;

struct Eta {
    int row = 0;
    double pivot = 1.0;
    std::vector<std::pair<int, double>> column;  // off-pivot entries of B^-1 a_q
};

class DualSimplex {
public:
    DualSimplex(const LpModel &model, const SimplexOptions &opt) : model_(model), opt_(opt)
    {
        ns_ = model.column_count();
        m_ = model.row_count();
        n_ = ns_ + m_;

        std::vector<int> count(static_cast<std::size_t>(ns_), 0);
        for (const auto &r : model.rows())
            for (int j : r.index)
                ++count[static_cast<std::size_t>(j)];
        col_start_.assign(static_cast<std::size_t>(ns_) + 1, 0);
        for (int j = 0; j < ns_; ++j)
            col_start_[j + 1] = col_start_[j] + count[j];
        row_idx_.resize(static_cast<std::size_t>(col_start_[ns_]));
        val_.resize(row_idx_.size());
        std::vector<int> fill(col_start_.begin(), col_start_.end() - 1);
        for (int i = 0; i < m_; ++i) {
            const auto &r = model.row(i);
            for (std::size_t k = 0; k < r.index.size(); ++k) {
                const int p = fill[r.index[k]]++;
                row_idx_[p] = i;
                val_[p] = r.value[k];
            }
        }

        lb_.resize(n_);
        ub_.resize(n_);
        cost_.assign(n_, 0.0);
        for (int j = 0; j < ns_; ++j) {
            lb_[j] = model.lower(j);
            ub_[j] = model.upper(j);
            cost_[j] = model.cost(j);
        }
        for (int i = 0; i < m_; ++i) {
            const auto &r = model.row(i);
            const int j = ns_ + i;
            switch (r.sense) {
            case RowSense::Greater: lb_[j] = r.rhs; ub_[j] = kInfinity; break;
            case RowSense::Less: lb_[j] = -kInfinity; ub_[j] = r.rhs; break;
            case RowSense::Equal: lb_[j] = ub_[j] = r.rhs; break;
            }
        }
    }

    LpSolution solve(const Basis *warm)
    {
        LpSolution sol;
        bool warm_ok = warm != nullptr && load_basis(*warm);
        if (!warm_ok)
            slack_basis();
        sol.warm_started = warm_ok;

        for (int attempt = 0; attempt < 3; ++attempt) {
            const auto outcome = iterate();
            if (outcome == Outcome::Restart) {
                slack_basis();
                sol.warm_started = false;
                continue;
            }
            sol.iterations = iterations_;
            sol.refactorizations = refactors_;
            if (outcome == Outcome::Infeasible) {
                sol.status = LpStatus::Infeasible;
                sol.basis = export_basis();
                return sol;
            }
            fill_solution(sol);
            return sol;
        }
        throw std::runtime_error("dual simplex failed to converge after restarts");
    }

private:
    enum class Outcome { Optimal, Infeasible, Restart };

    // --- column access -----------------------------------------------------
    template <class F>
    void for_column(int j, F &&f) const
    {
        if (j < ns_) {
            for (int p = col_start_[j]; p < col_start_[j + 1]; ++p)
                f(row_idx_[p], val_[p]);
        } else {
            f(j - ns_, -1.0);
        }
    }

    double column_dot(int j, const Eigen::VectorXd &v) const
    {
        if (j >= ns_)
            return -v[j - ns_];
        double s = 0.0;
        for (int p = col_start_[j]; p < col_start_[j + 1]; ++p)
            s += v[row_idx_[p]] * val_[p];
        return s;
    }

    bool fixed(int j) const { return lb_[j] == ub_[j]; }

    // --- basis management --------------------------------------------------
    void slack_basis()
    {
        status_.assign(n_, VarStatus::AtLower);
        head_.resize(m_);
        for (int j = 0; j < ns_; ++j)
            status_[j] = cost_[j] >= 0.0 ? VarStatus::AtLower : VarStatus::AtUpper;
        for (int i = 0; i < m_; ++i) {
            status_[ns_ + i] = VarStatus::Basic;
            head_[i] = ns_ + i;
        }
        weights_.assign(m_, 1.0);
    }

    bool load_basis(const Basis &b)
    {
        if (static_cast<int>(b.columns.size()) != ns_ || static_cast<int>(b.rows.size()) != m_)
            return false;
        status_.resize(n_);
        head_.clear();
        for (int j = 0; j < n_; ++j) {
            status_[j] = j < ns_ ? b.columns[j] : b.rows[j - ns_];
            if (status_[j] == VarStatus::Basic)
                head_.push_back(j);
        }
        if (static_cast<int>(head_.size()) != m_)
            return false;
        weights_.assign(m_, 1.0);
        return true;
    }

    Basis export_basis() const
    {
        Basis b;
        b.columns.assign(status_.begin(), status_.begin() + ns_);
        b.rows.assign(status_.begin() + ns_, status_.end());
        return b;
    }

    bool factorize()
    {
        ++refactors_;
        etas_.clear();
        if (m_ == 0)
            return true;
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(static_cast<std::size_t>(m_) * 3);
        for (int r = 0; r < m_; ++r)
            for_column(head_[r], [&](int i, double v) { trip.emplace_back(i, r, v); });
        SpMat b(m_, m_);
        b.setFromTriplets(trip.begin(), trip.end());
        b.makeCompressed();
        lu_.analyzePattern(b);
        lu_.factorize(b);
        if (lu_.info() != Eigen::Success)
            return false;
        const double logdet = lu_.logAbsDeterminant();
        return std::isfinite(logdet);
    }

    Eigen::VectorXd ftran(Eigen::VectorXd a) const
    {
        if (m_ == 0)
            return a;
        Eigen::VectorXd z = lu_.solve(a);
        for (const auto &eta : etas_) {
            const double zr = z[eta.row] / eta.pivot;
            z[eta.row] = zr;
            if (zr != 0.0)
                for (const auto &[i, v] : eta.column)
                    z[i] -= v * zr;
        }
        return z;
    }

    Eigen::VectorXd btran(Eigen::VectorXd v) const
    {
        if (m_ == 0)
            return v;
        for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
            double s = v[it->row];
            for (const auto &[i, a] : it->column)
                s -= v[i] * a;
            v[it->row] = s / it->pivot;
        }
        Eigen::VectorXd out = lu_.transpose().solve(v);
        return out;
    }

    void place_nonbasic(int j)
    {
        if (status_[j] == VarStatus::AtLower && !std::isfinite(lb_[j]))
            status_[j] = VarStatus::AtUpper;
        else if (status_[j] == VarStatus::AtUpper && !std::isfinite(ub_[j]))
            status_[j] = VarStatus::AtLower;
        x_[j] = status_[j] == VarStatus::AtLower ? lb_[j] : ub_[j];
    }

    void compute_primal()
    {
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m_);
        for (int j = 0; j < n_; ++j) {
            if (status_[j] == VarStatus::Basic)
                continue;
            place_nonbasic(j);
            const double xj = x_[j];
            if (xj != 0.0)
                for_column(j, [&](int i, double v) { rhs[i] -= v * xj; });
        }
        const Eigen::VectorXd xb = ftran(rhs);
        for (int r = 0; r < m_; ++r)
            x_[head_[r]] = xb[r];
    }

    // Returns false when a dual infeasibility cannot be repaired by a flip.
    bool compute_duals()
    {
        Eigen::VectorXd cb(m_);
        for (int r = 0; r < m_; ++r)
            cb[r] = cost_[head_[r]];
        y_ = btran(cb);
        bool ok = true;
        for (int j = 0; j < n_; ++j) {
            if (status_[j] == VarStatus::Basic) {
                d_[j] = 0.0;
                continue;
            }
            d_[j] = cost_[j] - column_dot(j, y_);
            if (fixed(j))
                continue;
            if (status_[j] == VarStatus::AtLower && d_[j] < -opt_.dual_tolerance) {
                if (std::isfinite(ub_[j]))
                    status_[j] = VarStatus::AtUpper;
                else if (d_[j] < -1e3 * opt_.dual_tolerance)
                    ok = false;
                else
                    d_[j] = 0.0;
            } else if (status_[j] == VarStatus::AtUpper && d_[j] > opt_.dual_tolerance) {
                if (std::isfinite(lb_[j]))
                    status_[j] = VarStatus::AtLower;
                else if (d_[j] > 1e3 * opt_.dual_tolerance)
                    ok = false;
                else
                    d_[j] = 0.0;
            }
        }
        return ok;
    }

    bool refresh()
    {
        if (!factorize())
            return false;
        x_.assign(n_, 0.0);
        d_.assign(n_, 0.0);
        if (!compute_duals())
            return false;
        compute_primal();
        since_refactor_ = 0;
        return true;
    }

    double infeasibility(int j) const
    {
        if (x_[j] < lb_[j] - opt_.primal_tolerance)
            return lb_[j] - x_[j];
        if (x_[j] > ub_[j] + opt_.primal_tolerance)
            return x_[j] - ub_[j];
        return 0.0;
    }

    int choose_leaving(bool bland) const
    {
        int best = -1;
        double best_score = 0.0;
        for (int r = 0; r < m_; ++r) {
            const double inf = infeasibility(head_[r]);
            if (inf <= 0.0)
                continue;
            if (bland) {
                if (best < 0 || head_[r] < head_[best])
                    best = r;
                continue;
            }
            const double score = inf * inf / weights_[r];
            if (score > best_score) {
                best_score = score;
                best = r;
            }
        }
        return best;
    }

    struct Candidate {
        int j;
        double ratio;
        double harris;
        double abs_alpha;
    };

    Outcome iterate()
    {
        if (!refresh())
            return Outcome::Restart;

        int stall = 0;
        int unstable = 0;
        bool bland = false;
        std::vector<double> alpha_row(static_cast<std::size_t>(n_), 0.0);
        std::vector<Candidate> cand;
        Eigen::VectorXd er(m_);

        for (;;) {
            if (iterations_ >= opt_.max_iterations)
                throw std::runtime_error("dual simplex iteration limit reached");
            if (since_refactor_ >= opt_.refactor_interval && !refresh())
                return Outcome::Restart;

            const int r = choose_leaving(bland);
            if (r < 0) {
                if (since_refactor_ == 0)
                    return Outcome::Optimal;
                if (!refresh())
                    return Outcome::Restart;
                if (choose_leaving(false) < 0)
                    return Outcome::Optimal;
                continue;
            }
            ++iterations_;
            ++since_refactor_;

            const int p = head_[r];
            const bool below = x_[p] < lb_[p];
            const double s = below ? 1.0 : -1.0;
            const double target = below ? lb_[p] : ub_[p];

            er.setZero();
            er[r] = 1.0;
            const Eigen::VectorXd rho = btran(er);

            cand.clear();
            for (int j = 0; j < n_; ++j) {
                if (status_[j] == VarStatus::Basic || fixed(j)) {
                    alpha_row[j] = 0.0;
                    continue;
                }
                const double a = column_dot(j, rho);
                alpha_row[j] = a;
                const double sa = s * a;
                if (status_[j] == VarStatus::AtLower && sa < -opt_.pivot_tolerance) {
                    const double dj = std::max(d_[j], 0.0);
                    cand.push_back({j, dj / -sa, (dj + opt_.dual_tolerance) / -sa, std::abs(a)});
                } else if (status_[j] == VarStatus::AtUpper && sa > opt_.pivot_tolerance) {
                    const double dj = std::max(-d_[j], 0.0);
                    cand.push_back({j, dj / sa, (dj + opt_.dual_tolerance) / sa, std::abs(a)});
                }
            }
            if (cand.empty())
                return Outcome::Infeasible;

            std::sort(cand.begin(), cand.end(), [](const Candidate &a, const Candidate &b) {
                return a.ratio < b.ratio || (a.ratio == b.ratio && a.j < b.j);
            });

            // bound flipping pass
            double slope = std::abs(x_[p] - target);
            std::size_t k = 0;
            std::vector<int> flips;
            if (!bland) {
                for (; k < cand.size(); ++k) {
                    const int j = cand[k].j;
                    const double range = ub_[j] - lb_[j];
                    if (!std::isfinite(range))
                        break;
                    const double next = slope - cand[k].abs_alpha * range;
                    if (next <= 0.0)
                        break;
                    slope = next;
                    flips.push_back(j);
                }
                if (k == cand.size())
                    return Outcome::Infeasible;
            }

            int q = -1;
            double q_ratio = 0.0;
            if (bland) {
                const double tmin = cand.front().ratio;
                for (const auto &c : cand)
                    if (c.ratio <= tmin + 1e-12 && (q < 0 || c.j < q)) {
                        q = c.j;
                        q_ratio = c.ratio;
                    }
            } else {
                double tmax = kInfinity;
                for (std::size_t i = k; i < cand.size(); ++i)
                    tmax = std::min(tmax, cand[i].harris);
                double best_alpha = -1.0;
                for (std::size_t i = k; i < cand.size(); ++i) {
                    if (cand[i].ratio > tmax)
                        break;
                    if (cand[i].abs_alpha > best_alpha) {
                        best_alpha = cand[i].abs_alpha;
                        q = cand[i].j;
                        q_ratio = cand[i].ratio;
                    }
                }
            }

            // entering column
            Eigen::VectorXd aq = Eigen::VectorXd::Zero(m_);
            for_column(q, [&](int i, double v) { aq[i] += v; });
            const Eigen::VectorXd alpha_q = ftran(aq);
            const double pivot = alpha_q[r];
            if (std::abs(pivot) < opt_.pivot_tolerance ||
                std::abs(pivot - alpha_row[q]) > 1e-7 * (1.0 + std::abs(pivot))) {
                if (since_refactor_ <= 1) {
                    // fresh factor and still unstable: take Bland's path
                    bland = true;
                    if (++unstable > 20)
                        return Outcome::Restart;
                }
                if (!refresh())
                    return Outcome::Restart;
                continue;
            }

            unstable = 0;

            // dual step
            const double t = q_ratio;
            if (t > 1e-12) {
                stall = 0;
                bland = false;
            } else if (++stall > opt_.stall_limit) {
                bland = true;
            }
            for (int j = 0; j < n_; ++j)
                if (alpha_row[j] != 0.0)
                    d_[j] += s * t * alpha_row[j];
            d_[q] = 0.0;

            // bound flips
            if (!flips.empty()) {
                Eigen::VectorXd af = Eigen::VectorXd::Zero(m_);
                for (int j : flips) {
                    const bool to_upper = status_[j] == VarStatus::AtLower;
                    const double nx = to_upper ? ub_[j] : lb_[j];
                    const double dx = nx - x_[j];
                    status_[j] = to_upper ? VarStatus::AtUpper : VarStatus::AtLower;
                    x_[j] = nx;
                    for_column(j, [&](int i, double v) { af[i] += v * dx; });
                }
                const Eigen::VectorXd dxb = ftran(af);
                for (int i = 0; i < m_; ++i)
                    x_[head_[i]] -= dxb[i];
            }

            // primal step
            const double dq = (x_[p] - target) / pivot;
            for (int i = 0; i < m_; ++i)
                x_[head_[i]] -= alpha_q[i] * dq;
            x_[q] += dq;
            x_[p] = target;

            // dual steepest-edge weights
            const double wr = rho.squaredNorm();
            const Eigen::VectorXd tau = ftran(rho);
            for (int i = 0; i < m_; ++i) {
                if (i == r)
                    continue;
                const double ratio = alpha_q[i] / pivot;
                if (ratio == 0.0)
                    continue;
                weights_[i] = std::max(weights_[i] - 2.0 * ratio * tau[i] + ratio * ratio * wr, 1e-8);
            }
            weights_[r] = std::max(wr / (pivot * pivot), 1e-8);

            // basis change
            status_[q] = VarStatus::Basic;
            status_[p] = below ? VarStatus::AtLower : VarStatus::AtUpper;
            d_[p] = s * t;
            head_[r] = q;

            Eta eta;
            eta.row = r;
            eta.pivot = pivot;
            for (int i = 0; i < m_; ++i)
                if (i != r && alpha_q[i] != 0.0)
                    eta.column.emplace_back(i, alpha_q[i]);
            etas_.push_back(std::move(eta));
        }
    }

    void fill_solution(LpSolution &sol)
    {
        sol.status = LpStatus::Optimal;
        sol.values.resize(ns_);
        double obj = 0.0;
        for (int j = 0; j < ns_; ++j) {
            const double v = std::clamp(x_[j], lb_[j], ub_[j]);
            sol.values[j] = v;
            obj += cost_[j] * v;
        }
        sol.objective = obj;
        sol.row_activity.resize(m_);
        for (int i = 0; i < m_; ++i)
            sol.row_activity[i] = model_.row(i).activity(sol.values);
        sol.duals.resize(m_);
        for (int i = 0; i < m_; ++i)
            sol.duals[i] = m_ ? y_[i] : 0.0;
        sol.reduced_costs.resize(ns_);
        for (int j = 0; j < ns_; ++j)
            sol.reduced_costs[j] = d_[j];
        sol.basis = export_basis();
    }

    const LpModel &model_;
    SimplexOptions opt_;
    int ns_ = 0, m_ = 0, n_ = 0;
    std::vector<int> col_start_, row_idx_;
    std::vector<double> val_;
    std::vector<double> lb_, ub_, cost_;
    std::vector<VarStatus> status_;
    std::vector<int> head_;
    std::vector<double> x_, d_;
    Eigen::VectorXd y_;
    std::vector<double> weights_;
    mutable Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu_;
    std::vector<Eta> etas_;
    long iterations_ = 0;
    int refactors_ = 0;
    int since_refactor_ = 0;
};

}  // namespace

LpSolution solve_lp(const LpModel &model, const Basis *warm, const SimplexOptions &options)
{
    DualSimplex simplex(model, options);
    return simplex.solve(warm);
}

}  // namespace csp
