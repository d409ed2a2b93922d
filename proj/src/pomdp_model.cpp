#include "spoofgrid/pomdp_model.hpp"

#include "spoofgrid/errors.hpp"

#include <cmath>

namespace spoofgrid {

void FinitePOMDP::validate(double row_tolerance) const {
    mdp.validate(row_tolerance);
    if (n_observations == 0) throw ModelError("POMDP has no observations");
    if (observation.size() != mdp.n_states * n_observations)
        throw ModelError("observation table has the wrong size");
    for (StateIndex s = 0; s < mdp.n_states; ++s) {
        double sum = 0.0;
        for (ObservationIndex y = 0; y < n_observations; ++y) {
            const double pr = o(s, y);
            if (!(pr >= 0.0) || !std::isfinite(pr)) throw ModelError("invalid observation probability");
            sum += pr;
        }
        if (std::abs(sum - 1.0) > row_tolerance)
            throw ModelError("observation row for " + mdp.state_label(s) + " does not sum to one");
    }
}

bool FinitePOMDP::deterministic_observations() const {
    for (StateIndex s = 0; s < mdp.n_states; ++s) {
        std::size_t ones = 0;
        for (ObservationIndex y = 0; y < n_observations; ++y) {
            const double pr = o(s, y);
            if (pr == 1.0) ++ones;
            else if (pr != 0.0) return false;
        }
        if (ones != 1) return false;
    }
    return true;
}

std::vector<StateIndex> FinitePOMDP::states_emitting(ObservationIndex y) const {
    std::vector<StateIndex> out;
    for (StateIndex s = 0; s < mdp.n_states; ++s)
        if (o(s, y) > 0.0) out.push_back(s);
    return out;
}

std::string FinitePOMDP::observation_label(ObservationIndex y) const {
    return y < observation_labels.size() ? observation_labels[y] : "y" + std::to_string(y);
}

FinitePOMDP with_identity_observations(const FiniteMDP& mdp) {
    FinitePOMDP pomdp;
    pomdp.mdp = mdp;
    pomdp.n_observations = mdp.n_states;
    pomdp.observation.assign(mdp.n_states * mdp.n_states, 0.0);
    for (StateIndex s = 0; s < mdp.n_states; ++s) {
        pomdp.o(s, s) = 1.0;
        pomdp.observation_labels.push_back("obs:" + mdp.state_label(s));
    }
    return pomdp;
}

Belief Belief::point(std::size_t n_states, StateIndex s) {
    if (s >= n_states) throw ContractViolation("point belief outside the state space");
    Belief b{std::vector<double>(n_states, 0.0)};
    b.p[s] = 1.0;
    return b;
}

Belief Belief::uniform_over(std::size_t n_states, const std::vector<StateIndex>& support) {
    if (support.empty()) throw ContractViolation("uniform belief needs a non-empty support");
    Belief b{std::vector<double>(n_states, 0.0)};
    for (StateIndex s : support) {
        if (s >= n_states) throw ContractViolation("belief support outside the state space");
        b.p[s] = 1.0 / static_cast<double>(support.size());
    }
    return b;
}

double AlphaVector::dot(const Belief& b) const {
    double v = 0.0;
    for (std::size_t s = 0; s < values.size(); ++s) v += values[s] * b.p[s];
    return v;
}

}  // namespace spoofgrid
