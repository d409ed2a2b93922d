#include "spoofgrid/growth_grid.hpp"

#include "spoofgrid/errors.hpp"

#include <array>
#include <cmath>
#include <string>

namespace spoofgrid {

namespace {

struct StateInfo {
    std::string_view label;
    Representation rep;
    Position pos;
};

constexpr std::array<StateInfo, kNumStates> kStates{{
    {"x1", Representation::Rep1, {0, 0}},
    {"x2", Representation::Rep1, {0, 1}},
    {"x3", Representation::Rep1, {1, 0}},
    {"x4", Representation::Rep1, {2, 0}},
    {"x5", Representation::Rep2, {0, 0}},
    {"x6", Representation::Rep2, {0, 1}},
    {"x7", Representation::Rep2, {1, 1}},
    {"x8", Representation::Rep2, {2, 0}},
    {"Goal1", Representation::Rep1, {2, 1}},
    {"Goal2", Representation::Rep2, {2, 1}},
}};

struct ActionInfo {
    std::string_view label;
    std::string_view symbol;
    Position dir;
    bool manipulative;
};

constexpr std::array<ActionInfo, kNumActions> kActions{{
    {"BuyA", "u_bA", {0, 1}, false},
    {"SellA", "u_sA", {0, -1}, false},
    {"BuyB", "u_bB", {1, 0}, false},
    {"SellB", "u_sB", {-1, 0}, false},
    {"MBuyA", "u_sA^m", {0, 1}, true},
    {"MSellA", "u_bA^m", {0, -1}, true},
    {"MBuyB", "u_sB^m", {1, 0}, true},
    {"MSellB", "u_bB^m", {-1, 0}, true},
    {"DoNothing", "u_0", {0, 0}, false},
}};

struct ObservationInfo {
    std::string_view label;
    Position pos;
};

constexpr std::array<ObservationInfo, kNumObservations> kObservations{{
    {"y1", {0, 0}},
    {"y2", {0, 1}},
    {"y3", {1, 0}},
    {"y4", {2, 0}},
    {"y5", {1, 1}},
    {"yGoal", {2, 1}},
}};

const StateInfo& info(GrowthState s) { return kStates[static_cast<std::size_t>(s)]; }
const ActionInfo& info(Action a) { return kActions[static_cast<std::size_t>(a)]; }

}  // namespace

Representation other(Representation rep) {
    return rep == Representation::Rep1 ? Representation::Rep2 : Representation::Rep1;
}

Position obstacle_of(Representation rep) {
    return rep == Representation::Rep1 ? Position{1, 1} : Position{1, 0};
}

Representation representation_of(GrowthState s) { return info(s).rep; }
Position position_of(GrowthState s) { return info(s).pos; }
bool is_goal(GrowthState s) { return s == GrowthState::Goal1 || s == GrowthState::Goal2; }

std::optional<GrowthState> state_at(Representation rep, Position pos) {
    for (std::size_t i = 0; i < kStates.size(); ++i)
        if (kStates[i].rep == rep && kStates[i].pos == pos) return static_cast<GrowthState>(i);
    return std::nullopt;
}

std::string_view to_string(GrowthState s) { return info(s).label; }

std::optional<GrowthState> parse_state(std::string_view label) {
    for (std::size_t i = 0; i < kStates.size(); ++i)
        if (kStates[i].label == label) return static_cast<GrowthState>(i);
    return std::nullopt;
}

bool is_manipulative(Action a) { return info(a).manipulative; }
Position direction_of(Action a) { return info(a).dir; }
std::string_view to_string(Action a) { return info(a).label; }
std::string_view spoof_side_symbol(Action a) { return info(a).symbol; }

std::optional<Action> parse_action(std::string_view label) {
    for (std::size_t i = 0; i < kActions.size(); ++i)
        if (kActions[i].label == label) return static_cast<Action>(i);
    return std::nullopt;
}

std::string_view to_string(TerminalMode m) {
    return m == TerminalMode::AbsorbingRecurring ? "absorbing_recurring" : "one_shot";
}

std::optional<TerminalMode> parse_terminal_mode(std::string_view s) {
    if (s == "absorbing_recurring") return TerminalMode::AbsorbingRecurring;
    if (s == "one_shot") return TerminalMode::OneShot;
    return std::nullopt;
}

void Scenario::validate() const {
    for (double v : {move_cost, manip_move_cost, manip_edge_cost, honest_collision_cost, manip_collision_cost,
                     terminal_per_tick_reward})
        if (!std::isfinite(v)) throw ContractViolation("scenario rewards must be finite");
    if (!(discount > 0.0 && discount < 1.0)) throw ContractViolation("discount must lie in (0,1)");
    if (!(toggle_probability >= 0.0 && toggle_probability <= 1.0))
        throw ContractViolation("toggle_probability must lie in [0,1]");
}

Scenario Scenario::with_manipulative_cost(double cost) const {
    Scenario s = *this;
    s.manip_move_cost = cost;
    s.manip_edge_cost = cost;
    s.manip_collision_cost = cost;
    return s;
}

double Scenario::terminal_value() const {
    if (terminal_mode == TerminalMode::AbsorbingRecurring) return terminal_per_tick_reward / (1.0 - discount);
    return terminal_per_tick_reward;
}

std::string_view to_string(MoveEvent e) {
    switch (e) {
        case MoveEvent::Moved: return "Moved";
        case MoveEvent::EdgeBounce: return "EdgeBounce";
        case MoveEvent::ObstacleCollision: return "ObstacleCollision";
        case MoveEvent::ReachedGoal: return "ReachedGoal";
        case MoveEvent::Stayed: return "Stayed";
    }
    return "?";
}

MoveOutcome resolve_move(GrowthState state, Action action, bool toggled, const Scenario& scenario) {
    if (is_goal(state)) throw ContractViolation("resolve_move called on a goal state");
    const bool manip = is_manipulative(action);
    if (toggled && !manip) throw ContractViolation("only manipulative actions toggle the representation");

    if (action == Action::DoNothing) return {state, 0.0, MoveEvent::Stayed};

    const Position pos = position_of(state);
    const Representation rep = toggled ? other(representation_of(state)) : representation_of(state);
    const Position obstacle = obstacle_of(rep);
    const Position dir = direction_of(action);
    const Position target{pos.col + dir.col, pos.row + dir.row};

    if (!target.on_grid()) {
        if (!manip) return {state, 0.0, MoveEvent::EdgeBounce};
        // Bouncing back onto the cell the toggle just blocked: the toggle is annulled.
        if (pos == obstacle) return {state, scenario.manip_edge_cost, MoveEvent::EdgeBounce};
        return {*state_at(rep, pos), scenario.manip_edge_cost, MoveEvent::EdgeBounce};
    }

    if (target == obstacle) {
        if (!manip) return {state, scenario.honest_collision_cost, MoveEvent::ObstacleCollision};
        return {*state_at(rep, pos), scenario.manip_collision_cost, MoveEvent::ObstacleCollision};
    }

    const GrowthState next = *state_at(rep, target);
    const double cost = manip ? scenario.manip_move_cost : scenario.move_cost;
    return {next, cost, target == kGoalPosition ? MoveEvent::ReachedGoal : MoveEvent::Moved};
}

FiniteMDP build_mdp(const Scenario& scenario) {
    scenario.validate();

    FiniteMDP mdp(kNumStates, kNumActions, scenario.discount);
    for (std::size_t s = 0; s < kNumStates; ++s) mdp.state_labels.emplace_back(kStates[s].label);
    for (std::size_t a = 0; a < kNumActions; ++a) mdp.action_labels.emplace_back(kActions[a].label);

    const double tp = scenario.toggle_probability;
    for (std::size_t si = 0; si < kNumStates; ++si) {
        const auto s = static_cast<GrowthState>(si);
        if (is_goal(s)) {
            mdp.terminal_values[si] = scenario.terminal_value();
            for (std::size_t a = 0; a < kNumActions; ++a) mdp.p(si, a, si) = 1.0;
            continue;
        }
        for (Action a : kAllActions) {
            const ActionIndex ai = index_of(a);
            if (!is_manipulative(a)) {
                const MoveOutcome out = resolve_move(s, a, false, scenario);
                mdp.p(si, ai, index_of(out.next_state)) = 1.0;
                mdp.r(si, ai) = out.reward;
                continue;
            }
            const MoveOutcome switched = resolve_move(s, a, true, scenario);
            const MoveOutcome stagnated = resolve_move(s, a, false, scenario);
            mdp.p(si, ai, index_of(switched.next_state)) += tp;
            mdp.p(si, ai, index_of(stagnated.next_state)) += 1.0 - tp;
            mdp.r(si, ai) = tp * switched.reward + (1.0 - tp) * stagnated.reward;
        }
    }
    return mdp;
}

std::string_view to_string(GridObservation y) { return kObservations[static_cast<std::size_t>(y)].label; }

std::optional<GridObservation> parse_observation(std::string_view label) {
    for (std::size_t i = 0; i < kObservations.size(); ++i)
        if (kObservations[i].label == label) return static_cast<GridObservation>(i);
    return std::nullopt;
}

GridObservation observation_of(GrowthState s) {
    const Position pos = position_of(s);
    for (std::size_t i = 0; i < kObservations.size(); ++i)
        if (kObservations[i].pos == pos) return static_cast<GridObservation>(i);
    throw InvariantViolation("state position has no observation symbol");
}

FinitePOMDP build_pomdp(const Scenario& scenario, double confusion) {
    if (!(confusion >= 0.0 && confusion < 1.0)) throw ContractViolation("confusion must lie in [0,1)");

    FinitePOMDP pomdp;
    pomdp.mdp = build_mdp(scenario);
    pomdp.n_observations = kNumObservations;
    pomdp.observation.assign(kNumStates * kNumObservations, 0.0);
    for (const auto& o : kObservations) pomdp.observation_labels.emplace_back(o.label);

    for (std::size_t si = 0; si < kNumStates; ++si) {
        const auto s = static_cast<GrowthState>(si);
        const ObservationIndex own = index_of(observation_of(s));
        if (is_goal(s) || confusion == 0.0) {
            pomdp.o(si, own) = 1.0;
            continue;
        }
        const double spill = confusion / static_cast<double>(kNumNonGoalObservations - 1);
        for (ObservationIndex y = 0; y < kNumNonGoalObservations; ++y)
            pomdp.o(si, y) = (y == own) ? 1.0 - confusion : spill;
    }
    return pomdp;
}

}  // namespace spoofgrid
