#include "spoofgrid/finite_mdp.hpp"

#include "spoofgrid/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace spoofgrid {

FiniteMDP::FiniteMDP(std::size_t states, std::size_t actions, double gamma)
    : n_states(states),
      n_actions(actions),
      transition(states * actions * states, 0.0),
      reward(states * actions, 0.0),
      terminal_values(states),
      discount(gamma) {}

void FiniteMDP::validate(double row_tolerance) const {
    if (n_states == 0 || n_actions == 0) throw ModelError("model has no states or no actions");
    if (transition.size() != n_states * n_actions * n_states)
        throw ModelError("transition table has the wrong size");
    if (reward.size() != n_states * n_actions) throw ModelError("reward table has the wrong size");
    if (terminal_values.size() != n_states) throw ModelError("terminal mask has the wrong size");
    if (!(discount > 0.0 && discount < 1.0)) throw ModelError("discount must lie in (0,1)");

    for (StateIndex s = 0; s < n_states; ++s) {
        if (is_terminal(s) && !std::isfinite(*terminal_values[s]))
            throw ModelError("non-finite terminal value at state " + state_label(s));
        for (ActionIndex a = 0; a < n_actions; ++a) {
            if (!std::isfinite(r(s, a)))
                throw ModelError("non-finite reward at (" + state_label(s) + ", " + action_label(a) + ")");
            double sum = 0.0;
            for (StateIndex t = 0; t < n_states; ++t) {
                const double pr = p(s, a, t);
                if (!(pr >= 0.0) || !std::isfinite(pr))
                    throw ModelError("invalid probability at (" + state_label(s) + ", " + action_label(a) + ")");
                if (is_terminal(s) && t != s && pr > 0.0)
                    throw ModelError("terminal state " + state_label(s) + " leaks probability mass");
                sum += pr;
            }
            if (std::abs(sum - 1.0) > row_tolerance) {
                std::ostringstream msg;
                msg << "transition row (" << state_label(s) << ", " << action_label(a) << ") sums to " << sum;
                throw ModelError(msg.str());
            }
        }
    }
}

std::string FiniteMDP::state_label(StateIndex s) const {
    return s < state_labels.size() ? state_labels[s] : "s" + std::to_string(s);
}

std::string FiniteMDP::action_label(ActionIndex a) const {
    return a < action_labels.size() ? action_labels[a] : "a" + std::to_string(a);
}

bool PolicySet::contains(StateIndex s, ActionIndex a) const {
    return std::find(actions[s].begin(), actions[s].end(), a) != actions[s].end();
}

}  // namespace spoofgrid
