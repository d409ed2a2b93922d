#include "spoofgrid/errors.hpp"
#include "spoofgrid/growth_grid.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

namespace spoofgrid {
namespace {

using S = GrowthState;
using A = Action;
using E = MoveEvent;

// Distinct magnitudes so a swapped reward shows up as a wrong number.
constexpr double kMove = -1.1;
constexpr double kMMove = -1.3;
constexpr double kEdge = -0.7;
constexpr double kHColl = -0.2;
constexpr double kColl = -1.9;

Scenario distinct_costs() {
    Scenario s;
    s.move_cost = kMove;
    s.manip_move_cost = kMMove;
    s.manip_edge_cost = kEdge;
    s.honest_collision_cost = kHColl;
    s.manip_collision_cost = kColl;
    return s;
}

struct MoveCase {
    S state;
    A action;
    bool toggled;
    S next;
    double reward;
    E event;
};

// Hand-enumerated outcome of every (state, action, toggle) triple.
const MoveCase kCases[] = {
    {S::x1, A::BuyA, false, S::x2, kMove, E::Moved},
    {S::x1, A::SellA, false, S::x1, 0.0, E::EdgeBounce},
    {S::x1, A::BuyB, false, S::x3, kMove, E::Moved},
    {S::x1, A::SellB, false, S::x1, 0.0, E::EdgeBounce},
    {S::x1, A::MBuyA, false, S::x2, kMMove, E::Moved},
    {S::x1, A::MBuyA, true, S::x6, kMMove, E::Moved},
    {S::x1, A::MSellA, false, S::x1, kEdge, E::EdgeBounce},
    {S::x1, A::MSellA, true, S::x5, kEdge, E::EdgeBounce},
    {S::x1, A::MBuyB, false, S::x3, kMMove, E::Moved},
    {S::x1, A::MBuyB, true, S::x5, kColl, E::ObstacleCollision},
    {S::x1, A::MSellB, false, S::x1, kEdge, E::EdgeBounce},
    {S::x1, A::MSellB, true, S::x5, kEdge, E::EdgeBounce},
    {S::x1, A::DoNothing, false, S::x1, 0.0, E::Stayed},
    {S::x2, A::BuyA, false, S::x2, 0.0, E::EdgeBounce},
    {S::x2, A::SellA, false, S::x1, kMove, E::Moved},
    {S::x2, A::BuyB, false, S::x2, kHColl, E::ObstacleCollision},
    {S::x2, A::SellB, false, S::x2, 0.0, E::EdgeBounce},
    {S::x2, A::MBuyA, false, S::x2, kEdge, E::EdgeBounce},
    {S::x2, A::MBuyA, true, S::x6, kEdge, E::EdgeBounce},
    {S::x2, A::MSellA, false, S::x1, kMMove, E::Moved},
    {S::x2, A::MSellA, true, S::x5, kMMove, E::Moved},
    {S::x2, A::MBuyB, false, S::x2, kColl, E::ObstacleCollision},
    {S::x2, A::MBuyB, true, S::x7, kMMove, E::Moved},
    {S::x2, A::MSellB, false, S::x2, kEdge, E::EdgeBounce},
    {S::x2, A::MSellB, true, S::x6, kEdge, E::EdgeBounce},
    {S::x2, A::DoNothing, false, S::x2, 0.0, E::Stayed},
    {S::x3, A::BuyA, false, S::x3, kHColl, E::ObstacleCollision},
    {S::x3, A::SellA, false, S::x3, 0.0, E::EdgeBounce},
    {S::x3, A::BuyB, false, S::x4, kMove, E::Moved},
    {S::x3, A::SellB, false, S::x1, kMove, E::Moved},
    {S::x3, A::MBuyA, false, S::x3, kColl, E::ObstacleCollision},
    {S::x3, A::MBuyA, true, S::x7, kMMove, E::Moved},
    {S::x3, A::MSellA, false, S::x3, kEdge, E::EdgeBounce},
    {S::x3, A::MSellA, true, S::x3, kEdge, E::EdgeBounce},
    {S::x3, A::MBuyB, false, S::x4, kMMove, E::Moved},
    {S::x3, A::MBuyB, true, S::x8, kMMove, E::Moved},
    {S::x3, A::MSellB, false, S::x1, kMMove, E::Moved},
    {S::x3, A::MSellB, true, S::x5, kMMove, E::Moved},
    {S::x3, A::DoNothing, false, S::x3, 0.0, E::Stayed},
    {S::x4, A::BuyA, false, S::Goal1, kMove, E::ReachedGoal},
    {S::x4, A::SellA, false, S::x4, 0.0, E::EdgeBounce},
    {S::x4, A::BuyB, false, S::x4, 0.0, E::EdgeBounce},
    {S::x4, A::SellB, false, S::x3, kMove, E::Moved},
    {S::x4, A::MBuyA, false, S::Goal1, kMMove, E::ReachedGoal},
    {S::x4, A::MBuyA, true, S::Goal2, kMMove, E::ReachedGoal},
    {S::x4, A::MSellA, false, S::x4, kEdge, E::EdgeBounce},
    {S::x4, A::MSellA, true, S::x8, kEdge, E::EdgeBounce},
    {S::x4, A::MBuyB, false, S::x4, kEdge, E::EdgeBounce},
    {S::x4, A::MBuyB, true, S::x8, kEdge, E::EdgeBounce},
    {S::x4, A::MSellB, false, S::x3, kMMove, E::Moved},
    {S::x4, A::MSellB, true, S::x8, kColl, E::ObstacleCollision},
    {S::x4, A::DoNothing, false, S::x4, 0.0, E::Stayed},
    {S::x5, A::BuyA, false, S::x6, kMove, E::Moved},
    {S::x5, A::SellA, false, S::x5, 0.0, E::EdgeBounce},
    {S::x5, A::BuyB, false, S::x5, kHColl, E::ObstacleCollision},
    {S::x5, A::SellB, false, S::x5, 0.0, E::EdgeBounce},
    {S::x5, A::MBuyA, false, S::x6, kMMove, E::Moved},
    {S::x5, A::MBuyA, true, S::x2, kMMove, E::Moved},
    {S::x5, A::MSellA, false, S::x5, kEdge, E::EdgeBounce},
    {S::x5, A::MSellA, true, S::x1, kEdge, E::EdgeBounce},
    {S::x5, A::MBuyB, false, S::x5, kColl, E::ObstacleCollision},
    {S::x5, A::MBuyB, true, S::x3, kMMove, E::Moved},
    {S::x5, A::MSellB, false, S::x5, kEdge, E::EdgeBounce},
    {S::x5, A::MSellB, true, S::x1, kEdge, E::EdgeBounce},
    {S::x5, A::DoNothing, false, S::x5, 0.0, E::Stayed},
    {S::x6, A::BuyA, false, S::x6, 0.0, E::EdgeBounce},
    {S::x6, A::SellA, false, S::x5, kMove, E::Moved},
    {S::x6, A::BuyB, false, S::x7, kMove, E::Moved},
    {S::x6, A::SellB, false, S::x6, 0.0, E::EdgeBounce},
    {S::x6, A::MBuyA, false, S::x6, kEdge, E::EdgeBounce},
    {S::x6, A::MBuyA, true, S::x2, kEdge, E::EdgeBounce},
    {S::x6, A::MSellA, false, S::x5, kMMove, E::Moved},
    {S::x6, A::MSellA, true, S::x1, kMMove, E::Moved},
    {S::x6, A::MBuyB, false, S::x7, kMMove, E::Moved},
    {S::x6, A::MBuyB, true, S::x2, kColl, E::ObstacleCollision},
    {S::x6, A::MSellB, false, S::x6, kEdge, E::EdgeBounce},
    {S::x6, A::MSellB, true, S::x2, kEdge, E::EdgeBounce},
    {S::x6, A::DoNothing, false, S::x6, 0.0, E::Stayed},
    {S::x7, A::BuyA, false, S::x7, 0.0, E::EdgeBounce},
    {S::x7, A::SellA, false, S::x7, kHColl, E::ObstacleCollision},
    {S::x7, A::BuyB, false, S::Goal2, kMove, E::ReachedGoal},
    {S::x7, A::SellB, false, S::x6, kMove, E::Moved},
    {S::x7, A::MBuyA, false, S::x7, kEdge, E::EdgeBounce},
    {S::x7, A::MBuyA, true, S::x7, kEdge, E::EdgeBounce},
    {S::x7, A::MSellA, false, S::x7, kColl, E::ObstacleCollision},
    {S::x7, A::MSellA, true, S::x3, kMMove, E::Moved},
    {S::x7, A::MBuyB, false, S::Goal2, kMMove, E::ReachedGoal},
    {S::x7, A::MBuyB, true, S::Goal1, kMMove, E::ReachedGoal},
    {S::x7, A::MSellB, false, S::x6, kMMove, E::Moved},
    {S::x7, A::MSellB, true, S::x2, kMMove, E::Moved},
    {S::x7, A::DoNothing, false, S::x7, 0.0, E::Stayed},
    {S::x8, A::BuyA, false, S::Goal2, kMove, E::ReachedGoal},
    {S::x8, A::SellA, false, S::x8, 0.0, E::EdgeBounce},
    {S::x8, A::BuyB, false, S::x8, 0.0, E::EdgeBounce},
    {S::x8, A::SellB, false, S::x8, kHColl, E::ObstacleCollision},
    {S::x8, A::MBuyA, false, S::Goal2, kMMove, E::ReachedGoal},
    {S::x8, A::MBuyA, true, S::Goal1, kMMove, E::ReachedGoal},
    {S::x8, A::MSellA, false, S::x8, kEdge, E::EdgeBounce},
    {S::x8, A::MSellA, true, S::x4, kEdge, E::EdgeBounce},
    {S::x8, A::MBuyB, false, S::x8, kEdge, E::EdgeBounce},
    {S::x8, A::MBuyB, true, S::x4, kEdge, E::EdgeBounce},
    {S::x8, A::MSellB, false, S::x8, kColl, E::ObstacleCollision},
    {S::x8, A::MSellB, true, S::x3, kMMove, E::Moved},
    {S::x8, A::DoNothing, false, S::x8, 0.0, E::Stayed},
};

TEST(ResolveMove, MatchesEnumeratedTable) {
    const Scenario sc = distinct_costs();
    std::size_t n = 0;
    for (const auto& c : kCases) {
        SCOPED_TRACE(std::string(to_string(c.state)) + " " + std::string(to_string(c.action)) +
                     (c.toggled ? " toggled" : ""));
        const MoveOutcome out = resolve_move(c.state, c.action, c.toggled, sc);
        EXPECT_EQ(out.next_state, c.next);
        EXPECT_DOUBLE_EQ(out.reward, c.reward);
        EXPECT_EQ(out.event, c.event);
        ++n;
    }
    EXPECT_EQ(n, 104u);
}

TEST(ResolveMove, RejectsGoalStateAndToggledHonestAction) {
    const Scenario sc;
    EXPECT_THROW(resolve_move(S::Goal1, A::BuyA, false, sc), ContractViolation);
    EXPECT_THROW(resolve_move(S::Goal2, A::MBuyA, true, sc), ContractViolation);
    EXPECT_THROW(resolve_move(S::x1, A::BuyA, true, sc), ContractViolation);
}

TEST(ResolveMove, ObstacleCellIsNeverOccupied) {
    const Scenario sc;
    for (std::size_t s = 0; s < kNumNonTerminal; ++s)
        for (A a : kAllActions)
            for (bool tog : {false, true}) {
                if (tog && !is_manipulative(a)) continue;
                const auto out = resolve_move(static_cast<S>(s), a, tog, sc);
                EXPECT_NE(position_of(out.next_state), obstacle_of(representation_of(out.next_state)));
            }
}

TEST(ResolveMove, ManipulationFlipsRepresentationUnlessRevertedAtEdge) {
    const Scenario sc;
    for (std::size_t s = 0; s < kNumNonTerminal; ++s)
        for (A a : kAllActions) {
            if (!is_manipulative(a)) continue;
            const S from = static_cast<S>(s);
            const auto out = resolve_move(from, a, true, sc);
            if (out.next_state == from) {
                EXPECT_EQ(out.event, E::EdgeBounce);
                EXPECT_EQ(position_of(from), obstacle_of(other(representation_of(from))));
            } else {
                EXPECT_EQ(representation_of(out.next_state), other(representation_of(from)));
            }
        }
}

TEST(GrowthGrid, LayoutAndLabels) {
    EXPECT_EQ(obstacle_of(Representation::Rep1), (Position{1, 1}));
    EXPECT_EQ(obstacle_of(Representation::Rep2), (Position{1, 0}));
    EXPECT_EQ(position_of(S::x7), (Position{1, 1}));
    EXPECT_EQ(state_at(Representation::Rep2, {2, 1}), S::Goal2);
    EXPECT_FALSE(state_at(Representation::Rep1, {1, 1}).has_value());
    EXPECT_FALSE(state_at(Representation::Rep1, {3, 0}).has_value());
    for (std::size_t s = 0; s < kNumStates; ++s) {
        const S st = static_cast<S>(s);
        EXPECT_EQ(parse_state(to_string(st)), st);
    }
    for (A a : kAllActions) EXPECT_EQ(parse_action(to_string(a)), a);
    EXPECT_FALSE(parse_state("x9").has_value());
    EXPECT_FALSE(parse_action("Spoof").has_value());
    EXPECT_EQ(spoof_side_symbol(A::MBuyA), "u_sA^m");
    EXPECT_EQ(spoof_side_symbol(A::MSellB), "u_bB^m");
    EXPECT_EQ(spoof_side_symbol(A::BuyB), "u_bB");
    EXPECT_EQ(spoof_side_symbol(A::DoNothing), "u_0");
}

TEST(Scenario, Validation) {
    Scenario s;
    EXPECT_NO_THROW(s.validate());
    s.discount = 1.0;
    EXPECT_THROW(s.validate(), ContractViolation);
    s = Scenario{};
    s.toggle_probability = 1.5;
    EXPECT_THROW(s.validate(), ContractViolation);
    s = Scenario{};
    s.move_cost = std::nan("");
    EXPECT_THROW(s.validate(), ContractViolation);

    const Scenario f = Scenario{}.with_manipulative_cost(-4.53);
    EXPECT_EQ(f.manip_move_cost, -4.53);
    EXPECT_EQ(f.manip_edge_cost, -4.53);
    EXPECT_EQ(f.manip_collision_cost, -4.53);
    EXPECT_EQ(f.move_cost, -1.0);

    EXPECT_NEAR(Scenario{}.terminal_value(), 20.0, 1e-12);
    Scenario one_shot;
    one_shot.terminal_mode = TerminalMode::OneShot;
    EXPECT_DOUBLE_EQ(one_shot.terminal_value(), 1.0);
}

TEST(BuildMdp, RowsAreStochasticAndGoalsAbsorb) {
    Scenario sc;
    sc.toggle_probability = 0.5;
    const FiniteMDP mdp = build_mdp(sc);
    EXPECT_NO_THROW(mdp.validate());
    EXPECT_EQ(mdp.n_states, 10u);
    EXPECT_EQ(mdp.n_actions, 9u);
    for (S g : {S::Goal1, S::Goal2}) {
        EXPECT_TRUE(mdp.is_terminal(index_of(g)));
        EXPECT_NEAR(*mdp.terminal_values[index_of(g)], 20.0, 1e-12);
    }
    // x2 MBuyB: toggled lands on x7, stagnation collides with the Rep1 obstacle.
    const auto x2 = index_of(S::x2);
    const auto a = index_of(A::MBuyB);
    EXPECT_DOUBLE_EQ(mdp.p(x2, a, index_of(S::x7)), 0.5);
    EXPECT_DOUBLE_EQ(mdp.p(x2, a, x2), 0.5);
    EXPECT_DOUBLE_EQ(mdp.r(x2, a), -1.0);
}

TEST(BuildMdp, HonestActionsAreDeterministic) {
    Scenario sc;
    sc.toggle_probability = 0.1;
    const FiniteMDP mdp = build_mdp(sc);
    for (std::size_t s = 0; s < kNumNonTerminal; ++s)
        for (A a : kAllActions) {
            if (is_manipulative(a)) continue;
            double mass = 0.0;
            for (std::size_t t = 0; t < kNumStates; ++t) {
                const double p = mdp.p(s, index_of(a), t);
                EXPECT_TRUE(p == 0.0 || p == 1.0);
                mass += p;
            }
            EXPECT_EQ(mass, 1.0);
        }
}

TEST(Observations, KeyedOnPosition) {
    EXPECT_EQ(observation_of(S::x1), GridObservation::y1);
    EXPECT_EQ(observation_of(S::x5), GridObservation::y1);
    EXPECT_EQ(observation_of(S::x2), GridObservation::y2);
    EXPECT_EQ(observation_of(S::x6), GridObservation::y2);
    EXPECT_EQ(observation_of(S::x3), GridObservation::y3);
    EXPECT_EQ(observation_of(S::x4), GridObservation::y4);
    EXPECT_EQ(observation_of(S::x8), GridObservation::y4);
    EXPECT_EQ(observation_of(S::x7), GridObservation::y5);
    EXPECT_EQ(observation_of(S::Goal1), GridObservation::yGoal);
    EXPECT_EQ(observation_of(S::Goal2), GridObservation::yGoal);

    const FinitePOMDP p = build_pomdp(Scenario{});
    EXPECT_NO_THROW(p.validate());
    EXPECT_TRUE(p.deterministic_observations());
    EXPECT_EQ(p.states_emitting(index_of(GridObservation::y1)),
              (std::vector<StateIndex>{index_of(S::x1), index_of(S::x5)}));

    const FinitePOMDP noisy = build_pomdp(Scenario{}, 0.2);
    EXPECT_NO_THROW(noisy.validate());
    EXPECT_FALSE(noisy.deterministic_observations());
    EXPECT_DOUBLE_EQ(noisy.o(index_of(S::x3), index_of(GridObservation::y3)), 0.8);
    EXPECT_DOUBLE_EQ(noisy.o(index_of(S::x3), index_of(GridObservation::y1)), 0.05);
}

}  // namespace
}  // namespace spoofgrid
