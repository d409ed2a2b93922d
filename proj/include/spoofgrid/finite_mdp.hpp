#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace spoofgrid {

using StateIndex = std::size_t;
using ActionIndex = std::size_t;

/// Explicit tabular MDP.
///
/// Transitions are stored densely as P[(s * n_actions + a) * n_states + s'];
/// rewards as J[s * n_actions + a]. A state with a terminal value is absorbing
/// and its value is held at that number by every solver.
struct FiniteMDP {
    std::size_t n_states = 0;
    std::size_t n_actions = 0;
    std::vector<double> transition;
    std::vector<double> reward;
    std::vector<std::optional<double>> terminal_values;
    double discount = 0.95;

    std::vector<std::string> state_labels;
    std::vector<std::string> action_labels;

    FiniteMDP() = default;
    FiniteMDP(std::size_t states, std::size_t actions, double gamma);

    double& p(StateIndex from, ActionIndex a, StateIndex to) {
        return transition[(from * n_actions + a) * n_states + to];
    }
    double p(StateIndex from, ActionIndex a, StateIndex to) const {
        return transition[(from * n_actions + a) * n_states + to];
    }
    double& r(StateIndex s, ActionIndex a) { return reward[s * n_actions + a]; }
    double r(StateIndex s, ActionIndex a) const { return reward[s * n_actions + a]; }

    bool is_terminal(StateIndex s) const { return terminal_values[s].has_value(); }

    /// Throws ModelError on dimension mismatch, negative or non-normalised
    /// rows, non-finite rewards, a discount outside (0,1), or terminal states
    /// leaking mass to other states.
    void validate(double row_tolerance = 1e-12) const;

    std::string state_label(StateIndex s) const;
    std::string action_label(ActionIndex a) const;
};

/// Per-state optimal values. Terminal entries equal the model's terminal values.
struct ValueFunction {
    std::vector<double> values;
    std::size_t iterations = 0;
    double residual = 0.0;

    double operator[](StateIndex s) const { return values[s]; }
    std::size_t size() const { return values.size(); }
};

/// Q(s, a) stored row-major by state.
struct QTable {
    std::size_t n_states = 0;
    std::size_t n_actions = 0;
    std::vector<double> q;

    double operator()(StateIndex s, ActionIndex a) const { return q[s * n_actions + a]; }
    double& operator()(StateIndex s, ActionIndex a) { return q[s * n_actions + a]; }
};

/// Tie-tolerant optimal action sets. Terminal states carry an empty set.
struct PolicySet {
    std::vector<std::vector<ActionIndex>> actions;
    double tie_tolerance = 0.0;

    const std::vector<ActionIndex>& operator[](StateIndex s) const { return actions[s]; }
    bool contains(StateIndex s, ActionIndex a) const;
};

}  // namespace spoofgrid
