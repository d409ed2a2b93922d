#pragma once

#include "spoofgrid/finite_mdp.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace spoofgrid {

using ObservationIndex = std::size_t;

/// Tabular POMDP with action-independent observations O(y | x').
struct FinitePOMDP {
    FiniteMDP mdp;
    std::size_t n_observations = 0;
    /// O[x' * n_observations + y]
    std::vector<double> observation;
    std::vector<std::string> observation_labels;

    double o(StateIndex next, ObservationIndex y) const {
        return observation[next * n_observations + y];
    }
    double& o(StateIndex next, ObservationIndex y) { return observation[next * n_observations + y]; }

    std::size_t n_states() const { return mdp.n_states; }
    std::size_t n_actions() const { return mdp.n_actions; }

    /// Validates the embedded MDP and that every observation row sums to one.
    void validate(double row_tolerance = 1e-12) const;

    /// True when every state emits exactly one observation with probability one.
    bool deterministic_observations() const;

    /// States whose observation row puts positive mass on y.
    std::vector<StateIndex> states_emitting(ObservationIndex y) const;

    std::string observation_label(ObservationIndex y) const;
};

/// Wraps an MDP as a POMDP whose observation is the state itself.
FinitePOMDP with_identity_observations(const FiniteMDP& mdp);

/// Probability vector over states.
struct Belief {
    std::vector<double> p;

    double operator[](StateIndex s) const { return p[s]; }
    std::size_t size() const { return p.size(); }

    static Belief point(std::size_t n_states, StateIndex s);
    static Belief uniform_over(std::size_t n_states, const std::vector<StateIndex>& support);
};

struct AlphaVector {
    std::vector<double> values;
    ActionIndex action = 0;

    double dot(const Belief& b) const;
};

}  // namespace spoofgrid
