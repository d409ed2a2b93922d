#include "spoofgrid/errors.hpp"
#include "spoofgrid/experiments.hpp"
#include "spoofgrid/growth_grid.hpp"
#include "spoofgrid/mdp_solver.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

namespace spoofgrid {
namespace {

using S = GrowthState;
using A = Action;

constexpr double kTol = 1e-6;

// Hand Bellman derivation with V(goal) = 1 / (1 - 0.95) = 20: one move to the
// goal is worth -1 + 0.95 * 20 = 18, two moves 16.1, three 14.295, four
// 12.58025.
TEST(ValueIteration, BaselineValues) {
    const FiniteMDP mdp = build_mdp(Scenario{});
    const ValueFunction v = value_iteration(mdp);
    const double expected[] = {14.295, 16.1, 16.1, 18.0, 14.295, 16.1, 18.0, 18.0, 20.0, 20.0};
    for (std::size_t s = 0; s < kNumStates; ++s) EXPECT_NEAR(v[s], expected[s], kTol) << mdp.state_labels[s];
    EXPECT_LT(v.residual, 1e-10);
}

TEST(ValueIteration, FinesValuesAndMarginAtX2) {
    const FiniteMDP mdp = build_mdp(Scenario{}.with_manipulative_cost(kFineCost));
    const ValueFunction v = value_iteration(mdp);
    const QTable q = q_values(mdp, v);
    EXPECT_NEAR(v[index_of(S::x2)], 12.58025, kTol);
    EXPECT_NEAR(q(index_of(S::x2), index_of(A::SellA)), 12.58025, kTol);
    EXPECT_NEAR(q(index_of(S::x2), index_of(A::MBuyB)), 12.57, kTol);
    EXPECT_NEAR(v[index_of(S::x5)], 14.295, kTol);
}

TEST(ValueIteration, SmallDiscountCollapsesToImmediateReward) {
    Scenario sc;
    sc.discount = 1e-9;
    const FiniteMDP mdp = build_mdp(sc);
    const ValueFunction v = value_iteration(mdp);
    // DoNothing (0) beats every costly move; terminal values stay r/(1-γ) ≈ 1.
    for (std::size_t s = 0; s < kNumNonTerminal; ++s) EXPECT_NEAR(v[s], 0.0, 1e-8);
    EXPECT_NEAR(v[index_of(S::Goal1)], 1.0, 1e-8);
}

TEST(QValues, DoNothingIsDiscountedValue) {
    const FiniteMDP mdp = build_mdp(Scenario{});
    const ValueFunction v = value_iteration(mdp);
    const QTable q = q_values(mdp, v);
    for (std::size_t s = 0; s < kNumNonTerminal; ++s)
        EXPECT_NEAR(q(s, index_of(A::DoNothing)), 0.95 * v[s], 1e-9);
    for (std::size_t a = 0; a < kNumActions; ++a) EXPECT_NEAR(q(index_of(S::Goal2), a), 20.0, 1e-9);
}

TEST(QValues, BaselineTieAtX1) {
    const FiniteMDP mdp = build_mdp(Scenario{});
    const QTable q = q_values(mdp, value_iteration(mdp));
    const auto x1 = index_of(S::x1);
    EXPECT_NEAR(q(x1, index_of(A::BuyA)), q(x1, index_of(A::BuyB)), 1e-9);
    EXPECT_NEAR(q(x1, index_of(A::BuyA)), q(x1, index_of(A::MBuyA)), 1e-9);
    EXPECT_LT(q(x1, index_of(A::MBuyB)), q(x1, index_of(A::BuyB)) - 1.0);
}

TEST(PolicySet, TieToleranceWidensSets) {
    const FiniteMDP mdp = build_mdp(Scenario{}.with_manipulative_cost(kFineCost));
    const QTable q = q_values(mdp, value_iteration(mdp));
    const auto x2 = index_of(S::x2);
    EXPECT_EQ(extract_policy_set(mdp, q, 1e-6)[x2], (std::vector<ActionIndex>{index_of(A::SellA)}));
    const PolicySet wide = extract_policy_set(mdp, q, 0.02);
    EXPECT_TRUE(wide.contains(x2, index_of(A::MBuyB)));
    EXPECT_TRUE(extract_policy_set(mdp, q)[index_of(S::Goal1)].empty());
}

TEST(Trajectory, BaselineAndFinesFromX2) {
    const Trajectory base = run_trajectory(Scenario{}, S::x2);
    ASSERT_TRUE(base.reached_terminal);
    ASSERT_EQ(base.length(), 2u);
    EXPECT_EQ(base.steps[0].action, index_of(A::MBuyB));
    EXPECT_EQ(base.steps[1].action, index_of(A::MBuyB));
    EXPECT_EQ(base.steps[1].state, index_of(S::x7));
    EXPECT_EQ(base.final_state, index_of(S::Goal1));

    const Trajectory fines = run_trajectory(Scenario{}.with_manipulative_cost(kFineCost), S::x2);
    ASSERT_TRUE(fines.reached_terminal);
    std::vector<ActionIndex> acts;
    for (const auto& st : fines.steps) acts.push_back(st.action);
    EXPECT_EQ(acts, (std::vector<ActionIndex>{index_of(A::SellA), index_of(A::BuyB), index_of(A::BuyB),
                                              index_of(A::BuyA)}));
    EXPECT_EQ(fines.final_state, index_of(S::Goal1));
}

TEST(Trajectory, RequiresDeterministicRows) {
    Scenario sc;
    sc.toggle_probability = 0.5;
    const FiniteMDP mdp = build_mdp(sc);
    const QTable q = q_values(mdp, value_iteration(mdp));
    const PolicySet p = extract_policy_set(mdp, q);
    // x2's 50% set leads with a manipulative action.
    EXPECT_THROW(greedy_trajectory(mdp, p, index_of(S::x2), manipulative_first_order()), ContractViolation);
}

TEST(Trajectory, DetectsCycle) {
    FiniteMDP mdp(2, 1, 0.9);
    mdp.terminal_values = {std::nullopt, std::nullopt};
    mdp.p(0, 0, 1) = 1.0;
    mdp.p(1, 0, 0) = 1.0;
    PolicySet p{{{0}, {0}}, 0.0};
    const Trajectory t = greedy_trajectory(mdp, p, 0);
    EXPECT_FALSE(t.reached_terminal);
    EXPECT_EQ(t.cycle, (std::vector<StateIndex>{0, 1}));
}

class OracleHorizon : public ::testing::TestWithParam<std::size_t> {};

// |V_H - V*| <= γ^H * max|V*| for a zero start.
TEST_P(OracleHorizon, ConvergesToValueIteration) {
    const std::size_t h = GetParam();
    for (const Scenario& sc : {Scenario{}, Scenario{}.with_manipulative_cost(kFineCost)}) {
        const FiniteMDP mdp = build_mdp(sc);
        const ValueFunction v = value_iteration(mdp);
        const ValueFunction o = finite_horizon_oracle(mdp, h);
        const double bound = std::pow(0.95, static_cast<double>(h)) * 20.0 + 1e-9;
        for (std::size_t s = 0; s < kNumStates; ++s) EXPECT_LE(std::abs(o[s] - v[s]), bound) << s;
    }
}

INSTANTIATE_TEST_SUITE_P(Horizons, OracleHorizon, ::testing::Values(1u, 30u, 200u));

TEST(FiniteHorizonOracle, ShortHorizonsByHand) {
    const FiniteMDP mdp = build_mdp(Scenario{});
    // Goal-adjacent states get -1 + 0.95 * 20 even at horizon 1 since the goal
    // value is fixed.
    EXPECT_NEAR(finite_horizon_oracle(mdp, 1)[index_of(S::x4)], 18.0, 1e-12);
    EXPECT_NEAR(finite_horizon_oracle(mdp, 1)[index_of(S::x1)], 0.0, 1e-12);
    EXPECT_NEAR(finite_horizon_oracle(mdp, 3)[index_of(S::x1)], 14.295, 1e-12);
}

TEST(ValueIteration, IterationBoundHolds) {
    for (double tp : {1.0, 0.5, 0.1}) {
        Scenario sc;
        sc.toggle_probability = tp;
        const FiniteMDP mdp = build_mdp(sc);
        const ValueFunction v = value_iteration(mdp, 1e-10);
        EXPECT_LE(v.iterations, iteration_bound(mdp, 1e-10));
    }
}

TEST(ValueIteration, ContractionOfBellmanOperator) {
    // Two successive oracle stages shrink their sup-distance by at least γ.
    const FiniteMDP mdp = build_mdp(Scenario{});
    double prev = 0.0;
    for (std::size_t h = 1; h < 40; ++h) {
        const auto a = finite_horizon_oracle(mdp, h);
        const auto b = finite_horizon_oracle(mdp, h + 1);
        double d = 0.0;
        for (std::size_t s = 0; s < kNumStates; ++s) d = std::max(d, std::abs(a[s] - b[s]));
        if (h > 1) EXPECT_LE(d, 0.95 * prev + 1e-12);
        prev = d;
    }
}

TEST(PolicySet, LargerFinesNeverAddManipulation) {
    std::size_t prev = kNumNonTerminal;
    for (double fine = 1.0; fine <= 6.0; fine += 0.25) {
        const std::size_t n = manipulative_count(ModelKind::Mdp, Scenario{}.with_manipulative_cost(-fine));
        EXPECT_LE(n, prev) << fine;
        prev = n;
    }
    EXPECT_EQ(prev, 0u);
}

TEST(FiniteMdp, ValidateRejectsBrokenRows) {
    FiniteMDP mdp(2, 1, 0.9);
    mdp.terminal_values = {std::nullopt, std::nullopt};
    mdp.p(0, 0, 0) = 0.7;
    mdp.p(1, 0, 1) = 1.0;
    EXPECT_THROW(mdp.validate(), ModelError);
    mdp.p(0, 0, 1) = 0.3;
    EXPECT_NO_THROW(mdp.validate());
    mdp.discount = 1.0;
    EXPECT_THROW(mdp.validate(), ModelError);
}

}  // namespace
}  // namespace spoofgrid
