#pragma once

// The two-representation growth grid.
//
// Each representation is a 3x2 grid of growth levels with the goal at the
// top-right and one obstacle cell (poor or hidden liquidity). Manipulative
// actions toggle the representation, i.e. move the obstacle, before resolving
// the real trade.
//
//   Rep1 (obstacle top-centre)      Rep2 (obstacle bottom-centre)
//   row 1:  x2   ##   Goal1          row 1:  x6   x7   Goal2
//   row 0:  x1   x3   x4             row 0:  x5   ##   x8

#include "spoofgrid/finite_mdp.hpp"
#include "spoofgrid/pomdp_model.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace spoofgrid {

struct Position {
    int col = 0;
    int row = 0;

    bool on_grid() const { return col >= 0 && col <= 2 && row >= 0 && row <= 1; }
    friend bool operator==(const Position&, const Position&) = default;
};

inline constexpr Position kGoalPosition{2, 1};

enum class Representation : std::uint8_t { Rep1, Rep2 };

Representation other(Representation rep);
Position obstacle_of(Representation rep);

/// State identifiers; the enumerator value is the MDP state index.
enum class GrowthState : std::uint8_t { x1, x2, x3, x4, x5, x6, x7, x8, Goal1, Goal2 };

inline constexpr std::size_t kNumStates = 10;
inline constexpr std::size_t kNumNonTerminal = 8;

Representation representation_of(GrowthState s);
Position position_of(GrowthState s);
bool is_goal(GrowthState s);
/// State occupying `pos` in `rep`; empty for the obstacle cell.
std::optional<GrowthState> state_at(Representation rep, Position pos);

std::string_view to_string(GrowthState s);
std::optional<GrowthState> parse_state(std::string_view label);

/// Actions are named by the side of the real trade: MBuyA moves up like BuyA.
/// The enumerator value is the MDP action index.
enum class Action : std::uint8_t { BuyA, SellA, BuyB, SellB, MBuyA, MSellA, MBuyB, MSellB, DoNothing };

inline constexpr std::size_t kNumActions = 9;
inline constexpr std::array<Action, kNumActions> kAllActions{
    Action::BuyA,  Action::SellA,  Action::BuyB,  Action::SellB,    Action::MBuyA,
    Action::MSellA, Action::MBuyB, Action::MSellB, Action::DoNothing};

bool is_manipulative(Action a);
/// Unit move on the grid; {0,0} for DoNothing.
Position direction_of(Action a);
std::string_view to_string(Action a);
std::optional<Action> parse_action(std::string_view label);

/// Symbol in the spoof-side naming scheme, where a manipulative action is
/// named after its spoof order (the side opposite the real trade). MBuyA is
/// "u_sA^m": spoof-sell A, then buy A.
std::string_view spoof_side_symbol(Action a);

inline StateIndex index_of(GrowthState s) { return static_cast<StateIndex>(s); }
inline ActionIndex index_of(Action a) { return static_cast<ActionIndex>(a); }

enum class TerminalMode : std::uint8_t { AbsorbingRecurring, OneShot };

std::string_view to_string(TerminalMode m);
std::optional<TerminalMode> parse_terminal_mode(std::string_view s);

/// Rewards, stochasticity and discounting for one experimental regime.
struct Scenario {
    double move_cost = -1.0;
    double manip_move_cost = -1.0;
    double manip_edge_cost = 0.0;
    double honest_collision_cost = 0.0;
    double manip_collision_cost = -1.0;
    double terminal_per_tick_reward = 1.0;
    double discount = 0.95;
    double toggle_probability = 1.0;
    TerminalMode terminal_mode = TerminalMode::AbsorbingRecurring;

    /// Throws ContractViolation when discount is outside (0,1), the toggle
    /// probability outside [0,1], or any reward is non-finite.
    void validate() const;

    /// Sets every manipulative cost (move, edge, collision) to `cost`.
    Scenario with_manipulative_cost(double cost) const;

    /// Value fixed on goal states.
    double terminal_value() const;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

enum class MoveEvent : std::uint8_t { Moved, EdgeBounce, ObstacleCollision, ReachedGoal, Stayed };

std::string_view to_string(MoveEvent e);

struct MoveOutcome {
    GrowthState next_state;
    double reward;
    MoveEvent event;
};

/// Deterministic resolution of one action given whether the obstacle toggles.
/// Throws ContractViolation for a goal state or a toggled honest action.
MoveOutcome resolve_move(GrowthState state, Action action, bool toggled, const Scenario& scenario);

/// 10-state, 9-action MDP. Manipulative actions toggle with the scenario's
/// toggle probability and otherwise resolve in the unchanged representation.
FiniteMDP build_mdp(const Scenario& scenario);

enum class GridObservation : std::uint8_t { y1, y2, y3, y4, y5, yGoal };

inline constexpr std::size_t kNumObservations = 6;
inline constexpr std::size_t kNumNonGoalObservations = 5;

std::string_view to_string(GridObservation y);
std::optional<GridObservation> parse_observation(std::string_view label);
/// Observation emitted from a state: keyed on position only.
GridObservation observation_of(GrowthState s);
inline ObservationIndex index_of(GridObservation y) { return static_cast<ObservationIndex>(y); }

/// The MDP plus position-revealing observations. With `confusion` > 0 a
/// non-goal state reports its own observation with probability 1-confusion
/// and one of the other non-goal observations uniformly otherwise.
FinitePOMDP build_pomdp(const Scenario& scenario, double confusion = 0.0);

}  // namespace spoofgrid
