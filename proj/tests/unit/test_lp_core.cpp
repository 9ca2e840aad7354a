#include "horizon_probe/errors.hpp"
#include "horizon_probe/lp_core.hpp"

#include <gtest/gtest.h>

#include <random>

namespace lp = horizon_probe::lp;

TEST(ChainLp, SingleRowKnapsack) {
    // min -3a - 2b  s.t.  a + b = 1.5, 0 <= a, b <= 1
    lp::ChainLp model({1.5});
    model.add_column(0, 1.0, -3.0, 0.0, 1.0);
    model.add_column(0, 1.0, -2.0, 0.0, 1.0);
    for (auto rule : {lp::PivotRule::bland, lp::PivotRule::dantzig}) {
        const auto r = model.solve({.pivot_rule = rule});
        ASSERT_EQ(r.status, lp::Status::optimal);
        EXPECT_NEAR(r.x[0], 1.0, 1e-12);
        EXPECT_NEAR(r.x[1], 0.5, 1e-12);
        EXPECT_NEAR(r.objective, -4.0, 1e-12);
    }
}

TEST(ChainLp, InfeasibleRow) {
    lp::ChainLp model({5.0});
    model.add_column(0, 1.0, 1.0, 0.0, 1.0);
    model.add_column(0, 2.0, 1.0, 0.0, 1.0);
    EXPECT_EQ(model.solve({}).status, lp::Status::infeasible);
}

TEST(ChainLp, LinkedRows) {
    // Rows: x0 + y = 2 ; -y + x1 = 0  (y links both rows)
    // min x0 - x1 with x0, x1 in [0, 3], y in [0, 1]  ->  y = 1, x0 = 1, x1 = 1
    lp::ChainLp model({2.0, 0.0});
    model.add_column(0, 1.0, 1.0, 0.0, 3.0);
    model.add_linking_column(0, 1.0, -1.0, 0.0, 0.0, 1.0);
    model.add_column(1, 1.0, -1.0, 0.0, 3.0);
    const auto r = model.solve({});
    ASSERT_EQ(r.status, lp::Status::optimal);
    EXPECT_NEAR(r.objective, 0.0, 1e-12);
    EXPECT_NEAR(r.x[1], 1.0, 1e-12);
}

TEST(ChainLp, WideAndFixedColumns) {
    lp::ChainLp model({1.0});
    const auto free = model.add_column(0, 1.0, 0.0, -100.0, lp::ChainLp::kInf);
    const auto fixed = model.add_column(0, 1.0, 1.0, 0.25, 0.25);
    const auto r = model.solve({});
    ASSERT_EQ(r.status, lp::Status::optimal);
    EXPECT_NEAR(r.x[fixed], 0.25, 1e-12);
    EXPECT_NEAR(r.x[free], 0.75, 1e-12);
}

TEST(ChainLp, RejectsBadStructure) {
    lp::ChainLp model({1.0, 1.0});
    EXPECT_THROW(model.add_column(2, 1.0, 0.0, 0.0, 1.0), horizon_probe::InvalidArgument);
    EXPECT_THROW(model.add_linking_column(1, 1.0, 1.0, 0.0, 0.0, 1.0), horizon_probe::InvalidArgument);
    EXPECT_THROW(model.add_column(0, 1.0, 0.0, 2.0, 1.0), horizon_probe::InvalidArgument);
    EXPECT_THROW(model.add_column(0, 1.0, 0.0, -lp::ChainLp::kInf, 1.0), horizon_probe::InvalidArgument);
    model.add_linking_column(0, 1.0, 1.0, 0.0, 0.0, 1.0);
    EXPECT_THROW(model.add_linking_column(0, 1.0, 1.0, 0.0, 0.0, 1.0), horizon_probe::InvalidArgument);
}

TEST(ChainLp, PivotRulesAgreeOnRandomChains) {
    // Storage-like chains: each row has two single-row columns and a link.
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> price(-50.0, 50.0);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t m = 2 + trial % 20;
        std::vector<double> rhs(m, 0.0);
        rhs[0] = 4.0;
        lp::ChainLp model(rhs);
        for (std::size_t r = 0; r < m; ++r) {
            const double c = price(rng);
            model.add_column(r, -0.9, c, 0.0, 1.0);
            model.add_column(r, 1.0 / 0.9, -c, 0.0, 1.0);
            if (r + 1 < m) {
                model.add_linking_column(r, 1.0, -0.98, 0.0, 0.0, 8.0);
            } else {
                model.add_column(r, 1.0, 0.0, 0.0, 8.0);
            }
        }
        const auto a = model.solve({.pivot_rule = lp::PivotRule::bland});
        const auto b = model.solve({.pivot_rule = lp::PivotRule::dantzig});
        ASSERT_EQ(a.status, lp::Status::optimal);
        ASSERT_EQ(b.status, lp::Status::optimal);
        EXPECT_NEAR(a.objective, b.objective, 1e-9 * std::max(1.0, std::abs(a.objective)));
    }
}

TEST(ChainLp, SolveIsRepeatable) {
    lp::ChainLp model({3.0, 0.0, 0.0});
    for (std::size_t r = 0; r < 3; ++r) {
        model.add_column(r, -1.0, 1.0 + r, 0.0, 1.0);
        model.add_column(r, 1.0, -(3.0 - r), 0.0, 1.0);
        if (r < 2) model.add_linking_column(r, 1.0, -1.0, 0.0, 0.0, 5.0);
        else model.add_column(r, 1.0, 0.0, 0.0, 5.0);
    }
    const auto a = model.solve({});
    const auto b = model.solve({});
    EXPECT_EQ(a.x, b.x);
    EXPECT_EQ(a.iterations, b.iterations);
}

TEST(PivotRule, Names) {
    EXPECT_EQ(lp::parse_pivot_rule("bland"), lp::PivotRule::bland);
    EXPECT_EQ(lp::parse_pivot_rule("dantzig"), lp::PivotRule::dantzig);
    EXPECT_EQ(lp::to_string(lp::PivotRule::dantzig), "dantzig");
    EXPECT_THROW((void)lp::parse_pivot_rule("steepest"), horizon_probe::InvalidArgument);
}
