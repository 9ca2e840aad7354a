#pragma once

#include <cstddef>
#include <limits>
#include <string_view>
#include <vector>

namespace horizon_probe::lp {

/**
 * Bounded-variable revised simplex for equality-constrained LPs whose
 * columns touch either one row or two adjacent rows (k, k+1):
 *
 *     minimize c'x  subject to  A x = b,  l <= x <= u.
 *
 * Storage scheduling has exactly this shape: row t is the SoC balance of
 * step t, power columns touch one row and the SoC column s_t links rows t
 * and t+1. For such matrices every basis decomposes into row intervals held
 * together by basic linking columns, each carrying exactly one basic
 * single-row column. FTRAN/BTRAN are then two sweeps per interval, so each
 * pivot costs O(rows + columns) and no factorization is carried between
 * iterations: basic values are recomputed from the nonbasic ones every
 * pivot.
 *
 * At most one linking column may join a given pair of rows. Lower bounds
 * must be finite.
 */

enum class PivotRule {
    /// Smallest-index entering and leaving variable. Never cycles.
    bland,
    /// Most negative reduced cost (ties to smallest index), falling back to
    /// Bland's rule while the objective stalls on degenerate pivots.
    dantzig,
};

[[nodiscard]] std::string_view to_string(PivotRule rule) noexcept;
/// Throws InvalidArgument for unknown names.
[[nodiscard]] PivotRule parse_pivot_rule(std::string_view name);

enum class Status { optimal, infeasible, iteration_limit };

struct Options {
    double feas_tol = 1e-9;
    double opt_tol = 1e-9;  // relative to the largest |cost|
    PivotRule pivot_rule = PivotRule::bland;
    std::size_t max_iterations = 0;  // 0 selects a size-based default
};

struct Result {
    Status status = Status::infeasible;
    std::vector<double> x;  // structural columns only
    double objective = 0.0;
    std::size_t iterations = 0;
};

class ChainLp {
public:
    static constexpr double kInf = std::numeric_limits<double>::infinity();
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    ChainLp() = default;
    explicit ChainLp(std::vector<double> rhs);

    [[nodiscard]] std::size_t rows() const noexcept { return rhs_.size(); }
    [[nodiscard]] std::size_t columns() const noexcept { return cols_.size(); }

    /// Column with coefficient `coef` in `row` only. Returns its index.
    std::size_t add_column(std::size_t row, double coef, double cost, double lower, double upper);
    /// Column with `top` in `row` and `bottom` in `row + 1`.
    std::size_t add_linking_column(std::size_t row, double top, double bottom, double cost, double lower,
                                   double upper);

    void set_bounds(std::size_t col, double lower, double upper);
    [[nodiscard]] double lower(std::size_t col) const { return cols_[col].lower; }
    [[nodiscard]] double upper(std::size_t col) const { return cols_[col].upper; }

    /// Solves from scratch. `crash_basis`, if non-empty, lists one basic
    /// column per row forming a nonsingular basis with all other columns at
    /// their lower bound; it is used only if that point is primal feasible,
    /// otherwise the solve starts from an all-artificial basis.
    [[nodiscard]] Result solve(const Options& options, const std::vector<std::size_t>& crash_basis = {}) const;

private:
    struct Column {
        std::size_t row;
        double top;
        double bottom;  // coefficient in row + 1; only used when linking
        bool linking;
        double cost;
        double lower;
        double upper;
    };

    std::vector<double> rhs_;
    std::vector<Column> cols_;
    std::vector<std::size_t> link_of_row_;  // linking column between row k and k+1, or npos

    friend class SimplexRun;
};

}  // namespace horizon_probe::lp
