#include "horizon_probe/lp_core.hpp"

#include "horizon_probe/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace horizon_probe::lp {

std::string_view to_string(PivotRule rule) noexcept {
    switch (rule) {
        case PivotRule::bland: return "bland";
        case PivotRule::dantzig: return "dantzig";
    }
    return "unknown";
}

PivotRule parse_pivot_rule(std::string_view name) {
    if (name == "bland") return PivotRule::bland;
    if (name == "dantzig") return PivotRule::dantzig;
    throw InvalidArgument("unknown pivot rule '" + std::string(name) + "'");
}

ChainLp::ChainLp(std::vector<double> rhs) : rhs_(std::move(rhs)), link_of_row_(rhs_.size(), npos) {}

std::size_t ChainLp::add_column(std::size_t row, double coef, double cost, double lower, double upper) {
    if (row >= rows()) throw InvalidArgument("add_column: row out of range");
    if (!std::isfinite(lower) || lower > upper) throw InvalidArgument("add_column: bad bounds");
    if (coef == 0.0) throw InvalidArgument("add_column: zero coefficient");
    cols_.push_back({row, coef, 0.0, false, cost, lower, upper});
    return cols_.size() - 1;
}

std::size_t ChainLp::add_linking_column(std::size_t row, double top, double bottom, double cost, double lower,
                                        double upper) {
    if (row + 1 >= rows()) throw InvalidArgument("add_linking_column: row out of range");
    if (link_of_row_[row] != npos) throw InvalidArgument("add_linking_column: rows already linked");
    if (!std::isfinite(lower) || lower > upper) throw InvalidArgument("add_linking_column: bad bounds");
    if (top == 0.0 || bottom == 0.0) throw InvalidArgument("add_linking_column: zero coefficient");
    cols_.push_back({row, top, bottom, true, cost, lower, upper});
    link_of_row_[row] = cols_.size() - 1;
    return cols_.size() - 1;
}

void ChainLp::set_bounds(std::size_t col, double lower, double upper) {
    if (!std::isfinite(lower) || lower > upper) throw InvalidArgument("set_bounds: bad bounds");
    cols_.at(col).lower = lower;
    cols_.at(col).upper = upper;
}

// One solve. Columns n..n+m-1 are the artificials, one per row.
class SimplexRun {
public:
    SimplexRun(const ChainLp& lp, const Options& options) : lp_(lp), opt_(options) {
        m_ = lp.rows();
        n_ = lp.columns();
        const std::size_t total = n_ + m_;
        lower_.resize(total);
        upper_.resize(total);
        cost_.assign(total, 0.0);
        state_.assign(total, State::at_lower);
        x_.assign(total, 0.0);
        art_sign_.assign(m_, 1.0);
        root_of_row_.assign(m_, ChainLp::npos);
        for (std::size_t j = 0; j < n_; ++j) {
            lower_[j] = lp.cols_[j].lower;
            upper_[j] = lp.cols_[j].upper;
            x_[j] = lower_[j];
        }
        for (std::size_t i = 0; i < m_; ++i) {
            lower_[n_ + i] = 0.0;
            upper_[n_ + i] = 0.0;
        }
        link_val_.assign(m_, 0.0);
        root_val_.assign(m_, 0.0);
        work_.assign(m_, 0.0);
        y_.assign(m_, 0.0);
        max_iter_ = opt_.max_iterations ? opt_.max_iterations : 200 * (m_ + n_) + 10000;
    }

    Result run(const std::vector<std::size_t>& crash) {
        Result result;
        if (m_ == 0) {
            result.status = Status::optimal;
            result.x.assign(x_.begin(), x_.begin() + static_cast<std::ptrdiff_t>(n_));
            result.objective = structural_objective();
            return result;
        }

        if (!try_crash(crash)) {
            start_artificial_basis();
            set_phase_costs(/*phase_one=*/true);
            const Status s1 = iterate();
            if (s1 == Status::iteration_limit) return finish(Status::iteration_limit);
            compute_primal();
            for (std::size_t i = 0; i < m_; ++i) {
                if (x_[n_ + i] > opt_.feas_tol) return finish(Status::infeasible);
            }
            for (std::size_t i = 0; i < m_; ++i) upper_[n_ + i] = 0.0;
        }
        set_phase_costs(/*phase_one=*/false);
        return finish(iterate());
    }

private:
    enum class State : unsigned char { basic, at_lower, at_upper };

    bool is_linking(std::size_t j) const { return j < n_ && lp_.cols_[j].linking; }
    std::size_t row_of(std::size_t j) const { return j < n_ ? lp_.cols_[j].row : j - n_; }
    double top_of(std::size_t j) const { return j < n_ ? lp_.cols_[j].top : art_sign_[j - n_]; }

    bool link_basic(std::size_t k) const {
        const std::size_t j = lp_.link_of_row_[k];
        return j != ChainLp::npos && state_[j] == State::basic;
    }

    double structural_objective() const {
        double obj = 0.0;
        for (std::size_t j = 0; j < n_; ++j) obj += lp_.cols_[j].cost * x_[j];
        return obj;
    }

    Result finish(Status status) {
        Result result;
        result.status = status;
        result.iterations = iterations_;
        if (status == Status::optimal) {
            compute_primal();
            result.x.assign(x_.begin(), x_.begin() + static_cast<std::ptrdiff_t>(n_));
            result.objective = structural_objective();
        }
        return result;
    }

    void set_phase_costs(bool phase_one) {
        double scale = 1.0;
        for (std::size_t j = 0; j < n_; ++j) {
            cost_[j] = phase_one ? 0.0 : lp_.cols_[j].cost;
            scale = std::max(scale, std::abs(cost_[j]));
        }
        for (std::size_t i = 0; i < m_; ++i) cost_[n_ + i] = phase_one ? 1.0 : 0.0;
        dual_tol_ = opt_.opt_tol * scale;
    }

    bool try_crash(const std::vector<std::size_t>& crash) {
        if (crash.size() != m_) return false;
        for (std::size_t j : crash) {
            if (j >= n_ || state_[j] == State::basic) return reset_after_failed_crash();
            state_[j] = State::basic;
            if (is_linking(j)) continue;
            if (root_of_row_[row_of(j)] != ChainLp::npos) return reset_after_failed_crash();
            root_of_row_[row_of(j)] = j;
        }
        if (!basis_is_regular()) return reset_after_failed_crash();
        compute_primal();
        for (std::size_t j : crash) {
            if (x_[j] < lower_[j] - opt_.feas_tol || x_[j] > upper_[j] + opt_.feas_tol) {
                return reset_after_failed_crash();
            }
        }
        return true;
    }

    bool reset_after_failed_crash() {
        for (std::size_t j = 0; j < n_; ++j) {
            state_[j] = State::at_lower;
            x_[j] = lower_[j];
        }
        std::fill(root_of_row_.begin(), root_of_row_.end(), ChainLp::npos);
        return false;
    }

    // Every interval of linked rows must own exactly one root column.
    bool basis_is_regular() const {
        std::size_t a = 0;
        while (a < m_) {
            std::size_t b = a;
            while (b + 1 < m_ && link_basic(b)) ++b;
            std::size_t roots = 0;
            for (std::size_t k = a; k <= b; ++k) roots += root_of_row_[k] != ChainLp::npos;
            if (roots != 1) return false;
            a = b + 1;
        }
        return true;
    }

    void start_artificial_basis() {
        // Residual of the rows with every structural column at its lower bound.
        std::vector<double> residual(lp_.rhs_);
        for (std::size_t j = 0; j < n_; ++j) {
            const auto& c = lp_.cols_[j];
            residual[c.row] -= c.top * x_[j];
            if (c.linking) residual[c.row + 1] -= c.bottom * x_[j];
        }
        for (std::size_t i = 0; i < m_; ++i) {
            art_sign_[i] = residual[i] >= 0.0 ? 1.0 : -1.0;
            upper_[n_ + i] = ChainLp::kInf;
            state_[n_ + i] = State::basic;
            root_of_row_[i] = n_ + i;
        }
    }

    // Solves B v = rhs; values land in link_val_ (by row of the link's top
    // entry) and root_val_ (by row of the root column).
    void solve_basis(const std::vector<double>& rhs) {
        std::size_t a = 0;
        while (a < m_) {
            std::size_t b = a;
            while (b + 1 < m_ && link_basic(b)) ++b;
            std::size_t r = ChainLp::npos;
            for (std::size_t k = a; k <= b; ++k) {
                if (root_of_row_[k] != ChainLp::npos) r = k;
            }
            if (r == ChainLp::npos) throw std::logic_error("simplex basis lost its root column");

            for (std::size_t k = a; k < r; ++k) {
                double acc = rhs[k];
                if (k > a) acc -= link_bottom(k - 1) * link_val_[k - 1];
                link_val_[k] = acc / link_top(k);
            }
            for (std::size_t k = b; k > r; --k) {
                double acc = rhs[k];
                if (k < b) acc -= link_top(k) * link_val_[k];
                link_val_[k - 1] = acc / link_bottom(k - 1);
            }
            double acc = rhs[r];
            if (r < b) acc -= link_top(r) * link_val_[r];
            if (r > a) acc -= link_bottom(r - 1) * link_val_[r - 1];
            root_val_[r] = acc / top_of(root_of_row_[r]);
            a = b + 1;
        }
    }

    // Solves y' B = c_B'.
    void solve_duals() {
        std::size_t a = 0;
        while (a < m_) {
            std::size_t b = a;
            while (b + 1 < m_ && link_basic(b)) ++b;
            std::size_t r = a;
            while (root_of_row_[r] == ChainLp::npos) ++r;
            const std::size_t root = root_of_row_[r];
            y_[r] = cost_[root] / top_of(root);
            for (std::size_t k = r; k-- > a;) {
                y_[k] = (cost_[lp_.link_of_row_[k]] - link_bottom(k) * y_[k + 1]) / link_top(k);
            }
            for (std::size_t k = r; k < b; ++k) {
                y_[k + 1] = (cost_[lp_.link_of_row_[k]] - link_top(k) * y_[k]) / link_bottom(k);
            }
            a = b + 1;
        }
    }

    double link_top(std::size_t k) const { return lp_.cols_[lp_.link_of_row_[k]].top; }
    double link_bottom(std::size_t k) const { return lp_.cols_[lp_.link_of_row_[k]].bottom; }

    double basic_value(std::size_t j) const {
        return is_linking(j) ? link_val_[row_of(j)] : root_val_[row_of(j)];
    }

    void compute_primal() {
        std::copy(lp_.rhs_.begin(), lp_.rhs_.end(), work_.begin());
        for (std::size_t j = 0; j < n_ + m_; ++j) {
            if (state_[j] == State::basic || x_[j] == 0.0) continue;
            const std::size_t row = row_of(j);
            work_[row] -= top_of(j) * x_[j];
            if (is_linking(j)) work_[row + 1] -= lp_.cols_[j].bottom * x_[j];
        }
        solve_basis(work_);
        for_each_basic([&](std::size_t j) { x_[j] = basic_value(j); });
    }

    template <typename F>
    void for_each_basic(F&& f) const {
        for (std::size_t k = 0; k < m_; ++k) {
            if (root_of_row_[k] != ChainLp::npos) f(root_of_row_[k]);
            if (link_basic(k)) f(lp_.link_of_row_[k]);
        }
    }

    double reduced_cost(std::size_t j) const {
        const std::size_t row = row_of(j);
        double d = cost_[j] - y_[row] * top_of(j);
        if (is_linking(j)) d -= y_[row + 1] * lp_.cols_[j].bottom;
        return d;
    }

    // Improving direction for nonbasic j: +1 increase, -1 decrease, 0 none.
    int improving(std::size_t j, double d) const {
        if (state_[j] == State::basic || lower_[j] == upper_[j]) return 0;
        if (state_[j] == State::at_lower && d < -dual_tol_) return 1;
        if (state_[j] == State::at_upper && d > dual_tol_) return -1;
        return 0;
    }

    std::size_t choose_entering(bool use_bland, int& direction) const {
        std::size_t best = ChainLp::npos;
        double best_score = 0.0;
        for (std::size_t j = 0; j < n_ + m_; ++j) {
            if (state_[j] == State::basic) continue;
            const double d = reduced_cost(j);
            const int dir = improving(j, d);
            if (dir == 0) continue;
            if (use_bland) {
                direction = dir;
                return j;
            }
            if (std::abs(d) > best_score) {
                best_score = std::abs(d);
                best = j;
                direction = dir;
            }
        }
        return best;
    }

    Status iterate() {
        constexpr double kPivotTol = 1e-11;
        constexpr double kTieTol = 1e-12;
        constexpr std::size_t kStallLimit = 50;
        std::size_t stalled = 0;

        for (;;) {
            if (iterations_ >= max_iter_) return Status::iteration_limit;
            compute_primal();
            solve_duals();

            const bool use_bland = opt_.pivot_rule == PivotRule::bland || stalled >= kStallLimit;
            int dir = 0;
            const std::size_t q = choose_entering(use_bland, dir);
            if (q == ChainLp::npos) return Status::optimal;
            ++iterations_;

            // Column of the entering variable in terms of the basis.
            std::fill(work_.begin(), work_.end(), 0.0);
            work_[row_of(q)] = top_of(q);
            if (is_linking(q)) work_[row_of(q) + 1] = lp_.cols_[q].bottom;
            solve_basis(work_);

            double theta = upper_[q] - lower_[q];
            std::size_t leaving = q;
            bool leaving_to_upper = dir > 0;
            for_each_basic([&](std::size_t j) {
                const double rate = -dir * basic_value(j);
                double ratio;
                bool to_upper;
                if (rate < -kPivotTol) {
                    ratio = std::max(0.0, x_[j] - lower_[j]) / -rate;
                    to_upper = false;
                } else if (rate > kPivotTol && std::isfinite(upper_[j])) {
                    ratio = std::max(0.0, upper_[j] - x_[j]) / rate;
                    to_upper = true;
                } else {
                    return;
                }
                if (ratio < theta - kTieTol || (ratio <= theta + kTieTol && j < leaving)) {
                    theta = std::min(theta, ratio);
                    leaving = j;
                    leaving_to_upper = to_upper;
                }
            });
            if (!std::isfinite(theta)) {
                throw std::logic_error("unbounded ray in a bounded LP");
            }

            stalled = theta > kTieTol ? 0 : stalled + 1;

            if (leaving == q) {
                state_[q] = dir > 0 ? State::at_upper : State::at_lower;
                x_[q] = dir > 0 ? upper_[q] : lower_[q];
                continue;
            }
            x_[q] += dir * theta;
            state_[q] = State::basic;
            state_[leaving] = leaving_to_upper ? State::at_upper : State::at_lower;
            x_[leaving] = leaving_to_upper ? upper_[leaving] : lower_[leaving];
            if (!is_linking(leaving)) root_of_row_[row_of(leaving)] = ChainLp::npos;
            if (!is_linking(q)) root_of_row_[row_of(q)] = q;
        }
    }

    const ChainLp& lp_;
    Options opt_;
    std::size_t m_ = 0;
    std::size_t n_ = 0;
    std::vector<double> lower_, upper_, cost_, x_, art_sign_;
    std::vector<State> state_;
    std::vector<std::size_t> root_of_row_;
    std::vector<double> link_val_, root_val_, work_, y_;
    double dual_tol_ = 0.0;
    std::size_t iterations_ = 0;
    std::size_t max_iter_ = 0;
};

Result ChainLp::solve(const Options& options, const std::vector<std::size_t>& crash_basis) const {
    SimplexRun run(*this, options);
    return run.run(crash_basis);
}

}  // namespace horizon_probe::lp
