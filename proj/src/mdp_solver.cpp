#include "spoofgrid/mdp_solver.hpp"

#include "spoofgrid/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace spoofgrid {

namespace {

double backup(const FiniteMDP& mdp, const std::vector<double>& v, StateIndex s, ActionIndex a) {
    double expected = 0.0;
    for (StateIndex t = 0; t < mdp.n_states; ++t) expected += mdp.p(s, a, t) * v[t];
    return mdp.r(s, a) + mdp.discount * expected;
}

std::vector<double> initial_values(const FiniteMDP& mdp) {
    std::vector<double> v(mdp.n_states, 0.0);
    for (StateIndex s = 0; s < mdp.n_states; ++s)
        if (mdp.is_terminal(s)) v[s] = *mdp.terminal_values[s];
    return v;
}

}  // namespace

std::size_t iteration_bound(const FiniteMDP& mdp, double epsilon) {
    if (!(epsilon > 0.0)) throw ContractViolation("epsilon must be positive");
    double max_reward = 0.0;
    for (double r : mdp.reward) max_reward = std::max(max_reward, std::abs(r));
    double max_terminal = 0.0;
    for (const auto& t : mdp.terminal_values)
        if (t) max_terminal = std::max(max_terminal, std::abs(*t));
    const double range = max_reward / (1.0 - mdp.discount) + max_terminal;
    if (range == 0.0) return 1;
    const double ratio = epsilon * (1.0 - mdp.discount) / range;
    if (ratio >= 1.0) return 1;
    return static_cast<std::size_t>(std::ceil(std::log(ratio) / std::log(mdp.discount))) + 1;
}

ValueFunction value_iteration(const FiniteMDP& mdp, double epsilon) {
    if (!(epsilon > 0.0)) throw ContractViolation("epsilon must be positive");
    mdp.validate();

    const std::size_t cap = 2 * iteration_bound(mdp, epsilon) + 16;
    ValueFunction result;
    result.values = initial_values(mdp);
    std::vector<double> next(mdp.n_states);

    for (;;) {
        double residual = 0.0;
        for (StateIndex s = 0; s < mdp.n_states; ++s) {
            if (mdp.is_terminal(s)) {
                next[s] = result.values[s];
                continue;
            }
            double best = -std::numeric_limits<double>::infinity();
            for (ActionIndex a = 0; a < mdp.n_actions; ++a) best = std::max(best, backup(mdp, result.values, s, a));
            next[s] = best;
            residual = std::max(residual, std::abs(best - result.values[s]));
        }
        result.values.swap(next);
        ++result.iterations;
        result.residual = residual;
        if (residual < epsilon) break;
        if (result.iterations > cap) throw InvariantViolation("value iteration exceeded its contraction bound");
    }
    return result;
}

QTable q_values(const FiniteMDP& mdp, const ValueFunction& v) {
    if (v.size() != mdp.n_states) throw ContractViolation("value function does not match the model's state count");
    QTable q{mdp.n_states, mdp.n_actions, std::vector<double>(mdp.n_states * mdp.n_actions)};
    for (StateIndex s = 0; s < mdp.n_states; ++s)
        for (ActionIndex a = 0; a < mdp.n_actions; ++a)
            q(s, a) = mdp.is_terminal(s) ? *mdp.terminal_values[s] : backup(mdp, v.values, s, a);
    return q;
}

PolicySet extract_policy_set(const FiniteMDP& mdp, const QTable& q, double tie_tolerance) {
    if (!(tie_tolerance >= 0.0)) throw ContractViolation("tie tolerance must be non-negative");
    if (q.n_states != mdp.n_states || q.n_actions != mdp.n_actions)
        throw ContractViolation("Q table does not match the model");

    PolicySet policy;
    policy.tie_tolerance = tie_tolerance;
    policy.actions.resize(mdp.n_states);
    for (StateIndex s = 0; s < mdp.n_states; ++s) {
        if (mdp.is_terminal(s)) continue;
        double best = -std::numeric_limits<double>::infinity();
        for (ActionIndex a = 0; a < mdp.n_actions; ++a) best = std::max(best, q(s, a));
        for (ActionIndex a = 0; a < mdp.n_actions; ++a)
            if (q(s, a) >= best - tie_tolerance) policy.actions[s].push_back(a);
    }
    return policy;
}

Trajectory greedy_trajectory(const FiniteMDP& mdp, const PolicySet& policy, StateIndex start,
                             const std::vector<ActionIndex>& tie_break) {
    if (start >= mdp.n_states) throw ContractViolation("start state out of range");
    if (mdp.is_terminal(start)) throw ContractViolation("trajectory must start in a non-terminal state");
    if (policy.actions.size() != mdp.n_states) throw ContractViolation("policy does not match the model");

    auto rank = [&](ActionIndex a) {
        const auto it = std::find(tie_break.begin(), tie_break.end(), a);
        return it != tie_break.end() ? static_cast<std::size_t>(it - tie_break.begin()) : tie_break.size() + a;
    };

    Trajectory traj;
    std::vector<StateIndex> visited;
    StateIndex s = start;
    for (;;) {
        if (mdp.is_terminal(s)) {
            traj.reached_terminal = true;
            break;
        }
        if (const auto seen = std::find(visited.begin(), visited.end(), s); seen != visited.end()) {
            traj.cycle.assign(seen, visited.end());
            break;
        }
        visited.push_back(s);

        const auto& ties = policy[s];
        if (ties.empty()) throw ContractViolation("empty tie set at state " + mdp.state_label(s));
        const ActionIndex a = *std::min_element(ties.begin(), ties.end(),
                                                [&](ActionIndex l, ActionIndex r) { return rank(l) < rank(r); });

        std::optional<StateIndex> next;
        for (StateIndex t = 0; t < mdp.n_states; ++t) {
            const double pr = mdp.p(s, a, t);
            if (std::abs(pr - 1.0) <= 1e-12) next = t;
            else if (pr > 1e-12) break;
        }
        if (!next)
            throw ContractViolation("greedy trajectory needs deterministic dynamics at (" + mdp.state_label(s) + ", " +
                                    mdp.action_label(a) + ")");
        traj.steps.push_back({s, a});
        s = *next;
    }
    traj.final_state = s;
    return traj;
}

ValueFunction finite_horizon_oracle(const FiniteMDP& mdp, std::size_t horizon) {
    if (horizon < 1) throw ContractViolation("horizon must be at least 1");
    mdp.validate();

    // stage[h][s]: optimal value with h decisions left.
    std::vector<std::vector<double>> stage(horizon + 1, initial_values(mdp));
    for (std::size_t h = 1; h <= horizon; ++h) {
        const auto& later = stage[h - 1];
        for (StateIndex s = 0; s < mdp.n_states; ++s) {
            if (mdp.is_terminal(s)) continue;
            double best = -std::numeric_limits<double>::infinity();
            for (ActionIndex a = 0; a < mdp.n_actions; ++a) {
                double value = mdp.r(s, a);
                for (StateIndex t = 0; t < mdp.n_states; ++t)
                    if (mdp.p(s, a, t) > 0.0) value += mdp.discount * mdp.p(s, a, t) * later[t];
                best = std::max(best, value);
            }
            stage[h][s] = best;
        }
    }
    ValueFunction out;
    out.values = stage[horizon];
    out.iterations = horizon;
    return out;
}

}  // namespace spoofgrid
