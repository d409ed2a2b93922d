#pragma once

#include "spoofgrid/pomdp_model.hpp"

#include <cstddef>
#include <vector>

namespace spoofgrid {

/// Bayes posterior b'(x') ∝ O(y|x') Σ_x P(x'|x,a) b(x). Terminal states in the
/// prior are treated as absorbing. Throws ImpossibleObservation when y has
/// zero probability under (b, a).
Belief belief_update(const FinitePOMDP& pomdp, const Belief& belief, ActionIndex action,
                     ObservationIndex observation);

/// P(y | a, b) for every observation.
std::vector<double> observation_probabilities(const FinitePOMDP& pomdp, const Belief& belief,
                                             ActionIndex action);

struct AlphaSolution {
    std::vector<AlphaVector> alphas;
    std::size_t backups = 0;
    /// Last sup-norm change of V over the reference beliefs.
    double residual = 0.0;
    bool converged = false;

    /// max over alpha vectors of <alpha, b>.
    double value(const Belief& b) const;
    /// Index of the maximising vector (lowest index on exact ties).
    std::size_t best(const Belief& b) const;
};

struct AlphaIterationOptions {
    double epsilon = 1e-9;
    std::size_t max_backups = 2000;
    /// Minimum LP witness margin for a vector to survive pruning.
    double prune_tolerance = 1e-10;
    /// Points per belief segment in the reference set used for the residual.
    std::size_t reference_resolution = 21;
};

/// Exact value iteration over alpha-vector sets (incremental pruning: each
/// action's cross-sum over observations is pruned after every addition, with
/// pointwise-domination filtering followed by LP witness pruning).
/// Initialised with the blind-policy vectors, so every iterate is a lower
/// bound. Throws InvariantViolation if pruning ever empties a set.
AlphaSolution alpha_value_iteration(const FinitePOMDP& pomdp, const AlphaIterationOptions& options = {});

/// Value of following one fixed action forever, per state.
std::vector<AlphaVector> blind_policy_vectors(const FinitePOMDP& pomdp);

/// Removes pointwise-dominated and duplicate vectors, then keeps only vectors
/// with a witness belief where they beat the rest by more than `tolerance`.
/// The survivors come back in a canonical (lexicographic) order.
std::vector<AlphaVector> prune(std::vector<AlphaVector> vectors, double tolerance = 1e-10);

/// Gridded-belief value iteration for POMDPs with deterministic observations
/// and at most two states per observation. A belief is (observation, p) with p
/// the probability of the lower-indexed of the two states; p is discretised
/// into `resolution` evenly spaced points and Bayes posteriors are projected
/// onto the nearest point.
struct BeliefGridSolution {
    std::size_t resolution = 0;
    /// Per observation, the states emitting it (size 1 or 2; empty for
    /// observations only terminal states emit).
    std::vector<std::vector<StateIndex>> support;
    /// Per observation, values at the grid points (a single value for
    /// one-state observations).
    std::vector<std::vector<double>> values;
    std::size_t iterations = 0;

    double grid_point(std::size_t k) const;
    /// Belief corresponding to grid point k of observation y.
    Belief belief_at(std::size_t n_states, ObservationIndex y, std::size_t k) const;
    /// Nearest-grid value for any belief supported on one observation's states.
    double value(const Belief& b) const;
};

BeliefGridSolution belief_grid_value_iteration(const FinitePOMDP& pomdp, std::size_t resolution = 101,
                                               double epsilon = 1e-10);

/// Q(b,a) = ρ(b,a) + γ Σ_y P(y|a,b) V(b'_{a,y}) with V from the alpha set.
std::vector<double> belief_q_values(const FinitePOMDP& pomdp, const AlphaSolution& solution,
                                    const Belief& belief);

enum class ReportingBeliefs {
    /// The uniform belief over the observation's states.
    Uniform,
    /// Every belief on the observation's segment, sampled at
    /// `segment_resolution` points; the reported set is the union of tie sets.
    Segment,
};

struct ObservationPolicyOptions {
    double tie_tolerance = 1e-6;
    ReportingBeliefs beliefs = ReportingBeliefs::Segment;
    std::size_t segment_resolution = 101;
};

/// Optimal-action set for each observation (index order), computed from
/// one-step backups at the reporting beliefs. Observations only terminal
/// states emit get an empty set. With more than two emitting states, Segment
/// mode samples the vertices and the uniform belief.
std::vector<std::vector<ActionIndex>> policy_at_observation(const FinitePOMDP& pomdp,
                                                            const AlphaSolution& solution,
                                                            const ObservationPolicyOptions& options = {});

/// Reporting beliefs used by policy_at_observation for observation y.
std::vector<Belief> reporting_beliefs(const FinitePOMDP& pomdp, ObservationIndex y,
                                      const ObservationPolicyOptions& options);

}  // namespace spoofgrid
