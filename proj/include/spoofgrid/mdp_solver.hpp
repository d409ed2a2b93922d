#pragma once

#include "spoofgrid/finite_mdp.hpp"

#include <cstddef>
#include <vector>

namespace spoofgrid {

inline constexpr double kDefaultEpsilon = 1e-10;
inline constexpr double kDefaultTieTolerance = 1e-6;

/// Synchronous value iteration. Stops once the sup-norm Bellman residual is
/// below `epsilon`; terminal values are held fixed throughout.
ValueFunction value_iteration(const FiniteMDP& mdp, double epsilon = kDefaultEpsilon);

/// Upper bound on the number of sweeps value_iteration needs, from the
/// contraction rate: ceil(log(epsilon (1 - gamma) / V_range) / log gamma) with
/// V_range = max|J| / (1 - gamma) + max|terminal value|.
std::size_t iteration_bound(const FiniteMDP& mdp, double epsilon);

/// Q(x,u) = J(x,u) + gamma * sum_x' P(x'|x,u) V(x'). Terminal rows hold the
/// terminal value for every action.
QTable q_values(const FiniteMDP& mdp, const ValueFunction& v);

/// For each non-terminal state, every action within `tie_tolerance` of the
/// state's best Q. Terminal states get an empty set. The terminal mask is
/// taken from `mdp`.
PolicySet extract_policy_set(const FiniteMDP& mdp, const QTable& q,
                             double tie_tolerance = kDefaultTieTolerance);

struct TrajectoryStep {
    StateIndex state;
    ActionIndex action;
};

struct Trajectory {
    std::vector<TrajectoryStep> steps;
    StateIndex final_state = 0;
    bool reached_terminal = false;
    /// States of the detected cycle, starting at the first repeated state.
    std::vector<StateIndex> cycle;

    std::size_t length() const { return steps.size(); }
};

/// Follows, from `start`, the first action of each tie set in the order given
/// by `tie_break` (earlier = preferred; actions absent from the list rank
/// after listed ones, by index). Requires deterministic rows for the chosen
/// actions. Stops at a terminal state or when a state repeats.
Trajectory greedy_trajectory(const FiniteMDP& mdp, const PolicySet& policy, StateIndex start,
                             const std::vector<ActionIndex>& tie_break = {});

/// Backward induction over `horizon` stages from a zero continuation value.
/// Independent of value_iteration; used as an oracle.
ValueFunction finite_horizon_oracle(const FiniteMDP& mdp, std::size_t horizon);

}  // namespace spoofgrid
