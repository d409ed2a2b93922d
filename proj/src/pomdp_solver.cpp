#include "spoofgrid/pomdp_solver.hpp"

#include "spoofgrid/errors.hpp"
#include "spoofgrid/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace spoofgrid {

namespace {

void check_belief(const FinitePOMDP& pomdp, const Belief& b) {
    if (b.size() != pomdp.n_states()) throw ContractViolation("belief size does not match the model");
    double sum = 0.0;
    for (double p : b.p) {
        if (!(p >= 0.0)) throw ContractViolation("belief has a negative entry");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw ContractViolation("belief does not sum to one");
}

// Σ_x b(x) P(x'|x,a) for every x'.
std::vector<double> predict(const FiniteMDP& mdp, const Belief& b, ActionIndex a) {
    std::vector<double> next(mdp.n_states, 0.0);
    for (StateIndex s = 0; s < mdp.n_states; ++s) {
        if (b.p[s] == 0.0) continue;
        for (StateIndex t = 0; t < mdp.n_states; ++t) next[t] += b.p[s] * mdp.p(s, a, t);
    }
    return next;
}

bool lex_greater(const AlphaVector& l, const AlphaVector& r) {
    if (l.values != r.values) return l.values > r.values;
    return l.action < r.action;
}

// l >= r - tol in every coordinate.
bool weakly_dominates(const AlphaVector& l, const AlphaVector& r, double tol) {
    for (std::size_t i = 0; i < l.values.size(); ++i)
        if (l.values[i] < r.values[i] - tol) return false;
    return true;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double v = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) v += a[i] * b[i];
    return v;
}

std::size_t best_at(const std::vector<AlphaVector>& set, const std::vector<double>& b) {
    std::size_t best = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < set.size(); ++i) {
        const double v = dot(set[i].values, b);
        if (v > best_value + 1e-12 || (std::abs(v - best_value) <= 1e-12 && lex_greater(set[i], set[best]))) {
            best_value = v;
            best = i;
        }
    }
    return best;
}

// Largest margin by which `candidate` beats every vector of `kept` at some
// belief, together with that belief.
std::pair<double, std::vector<double>> witness(const AlphaVector& candidate, const std::vector<AlphaVector>& kept) {
    const std::size_t n = candidate.values.size();
    // Variables: b_0..b_{n-1} and the margin shifted by `shift` so that it is
    // non-negative (d = e - shift). A free margin split as d+ - d- leaves a
    // zero-cost direction that round-off can report as unbounded.
    double shift = 1.0;
    for (const auto& w : kept)
        for (std::size_t i = 0; i < n; ++i) shift = std::max(shift, 1.0 + std::abs(w.values[i] - candidate.values[i]));

    std::vector<double> objective(n + 1, 0.0);
    objective[n] = 1.0;

    std::vector<lp::Constraint> rows;
    rows.reserve(kept.size() + 1);
    for (const auto& w : kept) {
        lp::Constraint c{std::vector<double>(n + 1, 0.0), lp::Relation::LessEqual, shift};
        for (std::size_t i = 0; i < n; ++i) c.coefficients[i] = w.values[i] - candidate.values[i];
        c.coefficients[n] = 1.0;
        rows.push_back(std::move(c));
    }
    lp::Constraint simplex{std::vector<double>(n + 1, 0.0), lp::Relation::Equal, 1.0};
    for (std::size_t i = 0; i < n; ++i) simplex.coefficients[i] = 1.0;
    rows.push_back(std::move(simplex));

    const lp::Result r = lp::maximize(objective, rows);
    if (r.status != lp::Status::Optimal)
        throw InvariantViolation(std::string("witness LP did not reach an optimum: ") +
                                 (r.status == lp::Status::Infeasible ? "infeasible" : "unbounded"));
    return {r.objective - shift, std::vector<double>(r.x.begin(), r.x.begin() + static_cast<std::ptrdiff_t>(n))};
}

std::vector<AlphaVector> cross_sum(const std::vector<AlphaVector>& a, const std::vector<AlphaVector>& b) {
    std::vector<AlphaVector> out;
    out.reserve(a.size() * b.size());
    for (const auto& u : a)
        for (const auto& v : b) {
            AlphaVector s{u.values, u.action};
            for (std::size_t i = 0; i < s.values.size(); ++i) s.values[i] += v.values[i];
            out.push_back(std::move(s));
        }
    return out;
}

// Beliefs on the segment between the two states emitting one observation,
// or the vertices plus the uniform belief for larger supports.
std::vector<Belief> support_beliefs(std::size_t n_states, const std::vector<StateIndex>& support,
                                    std::size_t resolution) {
    std::vector<Belief> out;
    if (support.empty()) return out;
    if (support.size() == 1) {
        out.push_back(Belief::point(n_states, support[0]));
        return out;
    }
    if (support.size() == 2) {
        const std::size_t points = std::max<std::size_t>(resolution, 2);
        for (std::size_t k = 0; k < points; ++k) {
            const double p = static_cast<double>(k) / static_cast<double>(points - 1);
            Belief b{std::vector<double>(n_states, 0.0)};
            b.p[support[0]] = p;
            b.p[support[1]] = 1.0 - p;
            out.push_back(std::move(b));
        }
        return out;
    }
    for (StateIndex s : support) out.push_back(Belief::point(n_states, s));
    out.push_back(Belief::uniform_over(n_states, support));
    return out;
}

std::vector<StateIndex> non_terminal_emitters(const FinitePOMDP& pomdp, ObservationIndex y) {
    std::vector<StateIndex> out;
    for (StateIndex s : pomdp.states_emitting(y))
        if (!pomdp.mdp.is_terminal(s)) out.push_back(s);
    return out;
}

}  // namespace

std::vector<double> observation_probabilities(const FinitePOMDP& pomdp, const Belief& belief, ActionIndex action) {
    check_belief(pomdp, belief);
    if (action >= pomdp.n_actions()) throw ContractViolation("action out of range");
    const auto next = predict(pomdp.mdp, belief, action);
    std::vector<double> py(pomdp.n_observations, 0.0);
    for (StateIndex t = 0; t < pomdp.n_states(); ++t)
        for (ObservationIndex y = 0; y < pomdp.n_observations; ++y) py[y] += next[t] * pomdp.o(t, y);
    return py;
}

Belief belief_update(const FinitePOMDP& pomdp, const Belief& belief, ActionIndex action, ObservationIndex observation) {
    check_belief(pomdp, belief);
    if (action >= pomdp.n_actions()) throw ContractViolation("action out of range");
    if (observation >= pomdp.n_observations) throw ContractViolation("observation out of range");

    auto next = predict(pomdp.mdp, belief, action);
    double total = 0.0;
    for (StateIndex t = 0; t < next.size(); ++t) {
        next[t] *= pomdp.o(t, observation);
        total += next[t];
    }
    if (!(total > 0.0))
        throw ImpossibleObservation("observation " + pomdp.observation_label(observation) + " cannot follow action " +
                                    pomdp.mdp.action_label(action) + " from this belief");
    for (double& p : next) p /= total;
    return Belief{std::move(next)};
}

double AlphaSolution::value(const Belief& b) const { return alphas[best(b)].dot(b); }

std::size_t AlphaSolution::best(const Belief& b) const {
    if (alphas.empty()) throw InvariantViolation("empty alpha set");
    std::size_t best_index = 0;
    double best_value = alphas[0].dot(b);
    for (std::size_t i = 1; i < alphas.size(); ++i) {
        const double v = alphas[i].dot(b);
        if (v > best_value) {
            best_value = v;
            best_index = i;
        }
    }
    return best_index;
}

std::vector<AlphaVector> prune(std::vector<AlphaVector> vectors, double tolerance) {
    if (vectors.empty()) return vectors;
    std::sort(vectors.begin(), vectors.end(), lex_greater);

    // Pointwise domination, keeping the lexicographically larger of near-duplicates.
    std::vector<AlphaVector> candidates;
    for (auto& v : vectors) {
        bool dominated = false;
        for (const auto& k : candidates)
            if (weakly_dominates(k, v, tolerance)) {
                dominated = true;
                break;
            }
        if (dominated) continue;
        std::erase_if(candidates, [&](const AlphaVector& k) { return weakly_dominates(v, k, tolerance); });
        candidates.push_back(std::move(v));
    }
    if (candidates.size() == 1) return candidates;

    // Witness filtering: seed with the best vector at each simplex vertex.
    const std::size_t n = candidates.front().values.size();
    std::vector<AlphaVector> kept;
    for (std::size_t s = 0; s < n && !candidates.empty(); ++s) {
        std::vector<double> vertex(n, 0.0);
        vertex[s] = 1.0;
        const std::size_t i = best_at(candidates, vertex);
        const bool already = std::any_of(kept.begin(), kept.end(), [&](const AlphaVector& k) {
            return dot(k.values, vertex) >= dot(candidates[i].values, vertex) - 1e-12;
        });
        if (already) continue;
        kept.push_back(candidates[i]);
        candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(i));
    }

    while (!candidates.empty()) {
        const auto [margin, belief] = witness(candidates.back(), kept);
        if (margin > tolerance) {
            const std::size_t i = best_at(candidates, belief);
            kept.push_back(candidates[i]);
            candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(i));
        } else {
            candidates.pop_back();
        }
    }
    if (kept.empty()) throw InvariantViolation("pruning removed every vector");
    std::sort(kept.begin(), kept.end(), lex_greater);
    return kept;
}

std::vector<AlphaVector> blind_policy_vectors(const FinitePOMDP& pomdp) {
    const FiniteMDP& mdp = pomdp.mdp;
    std::vector<AlphaVector> out;
    for (ActionIndex a = 0; a < mdp.n_actions; ++a) {
        std::vector<double> v(mdp.n_states, 0.0);
        for (StateIndex s = 0; s < mdp.n_states; ++s)
            if (mdp.is_terminal(s)) v[s] = *mdp.terminal_values[s];
        std::vector<double> next(v);
        for (std::size_t it = 0; it < 100000; ++it) {
            double change = 0.0;
            for (StateIndex s = 0; s < mdp.n_states; ++s) {
                if (mdp.is_terminal(s)) continue;
                double e = 0.0;
                for (StateIndex t = 0; t < mdp.n_states; ++t) e += mdp.p(s, a, t) * v[t];
                next[s] = mdp.r(s, a) + mdp.discount * e;
                change = std::max(change, std::abs(next[s] - v[s]));
            }
            v.swap(next);
            if (change < 1e-13) break;
        }
        out.push_back({std::move(v), a});
    }
    return out;
}

AlphaSolution alpha_value_iteration(const FinitePOMDP& pomdp, const AlphaIterationOptions& options) {
    if (!(options.epsilon > 0.0)) throw ContractViolation("epsilon must be positive");
    pomdp.validate();
    const FiniteMDP& mdp = pomdp.mdp;
    const std::size_t n = mdp.n_states;

    std::vector<Belief> reference;
    for (StateIndex s = 0; s < n; ++s) reference.push_back(Belief::point(n, s));
    for (ObservationIndex y = 0; y < pomdp.n_observations; ++y)
        for (auto& b : support_beliefs(n, non_terminal_emitters(pomdp, y), options.reference_resolution))
            reference.push_back(std::move(b));

    AlphaSolution sol;
    sol.alphas = prune(blind_policy_vectors(pomdp), options.prune_tolerance);

    auto values_at_reference = [&](const std::vector<AlphaVector>& set) {
        std::vector<double> v;
        v.reserve(reference.size());
        for (const auto& b : reference) {
            double best = -std::numeric_limits<double>::infinity();
            for (const auto& a : set) best = std::max(best, a.dot(b));
            v.push_back(best);
        }
        return v;
    };
    auto current = values_at_reference(sol.alphas);

    while (sol.backups < options.max_backups) {
        std::vector<AlphaVector> next_set;
        for (ActionIndex a = 0; a < mdp.n_actions; ++a) {
            std::vector<AlphaVector> acc;
            for (ObservationIndex y = 0; y < pomdp.n_observations; ++y) {
                std::vector<AlphaVector> projected;
                projected.reserve(sol.alphas.size());
                for (const auto& alpha : sol.alphas) {
                    AlphaVector g{std::vector<double>(n, 0.0), a};
                    for (StateIndex s = 0; s < n; ++s) {
                        if (mdp.is_terminal(s)) continue;
                        double e = 0.0;
                        for (StateIndex t = 0; t < n; ++t) {
                            const double pr = mdp.p(s, a, t);
                            if (pr != 0.0) e += pr * pomdp.o(t, y) * alpha.values[t];
                        }
                        g.values[s] = mdp.discount * e;
                    }
                    projected.push_back(std::move(g));
                }
                projected = prune(std::move(projected), options.prune_tolerance);
                acc = acc.empty() ? std::move(projected) : prune(cross_sum(acc, projected), options.prune_tolerance);
            }
            for (auto& v : acc) {
                for (StateIndex s = 0; s < n; ++s)
                    v.values[s] = mdp.is_terminal(s) ? *mdp.terminal_values[s] : v.values[s] + mdp.r(s, a);
                v.action = a;
                next_set.push_back(std::move(v));
            }
        }
        sol.alphas = prune(std::move(next_set), options.prune_tolerance);
        ++sol.backups;

        const auto updated = values_at_reference(sol.alphas);
        double residual = 0.0;
        for (std::size_t i = 0; i < updated.size(); ++i) residual = std::max(residual, std::abs(updated[i] - current[i]));
        current = updated;
        sol.residual = residual;
        if (residual < options.epsilon) {
            sol.converged = true;
            break;
        }
    }
    return sol;
}

double BeliefGridSolution::grid_point(std::size_t k) const {
    return static_cast<double>(k) / static_cast<double>(resolution - 1);
}

Belief BeliefGridSolution::belief_at(std::size_t n_states, ObservationIndex y, std::size_t k) const {
    const auto& sup = support.at(y);
    if (sup.empty()) throw ContractViolation("observation has no belief segment");
    if (sup.size() == 1) return Belief::point(n_states, sup[0]);
    Belief b{std::vector<double>(n_states, 0.0)};
    b.p[sup[0]] = grid_point(k);
    b.p[sup[1]] = 1.0 - grid_point(k);
    return b;
}

double BeliefGridSolution::value(const Belief& b) const {
    for (ObservationIndex y = 0; y < support.size(); ++y) {
        const auto& sup = support[y];
        if (sup.empty()) continue;
        double mass = 0.0;
        for (StateIndex s : sup) mass += b.p[s];
        if (mass < 1.0 - 1e-9) continue;
        if (sup.size() == 1) return values[y][0];
        const auto k = static_cast<std::size_t>(std::lround(b.p[sup[0]] * static_cast<double>(resolution - 1)));
        return values[y][k];
    }
    throw ContractViolation("belief is not supported on a single observation's states");
}

BeliefGridSolution belief_grid_value_iteration(const FinitePOMDP& pomdp, std::size_t resolution, double epsilon) {
    if (resolution < 11) throw ContractViolation("grid resolution must be at least 11");
    pomdp.validate();
    if (!pomdp.deterministic_observations())
        throw ContractViolation("belief grid needs deterministic observations");
    const FiniteMDP& mdp = pomdp.mdp;
    const std::size_t n = mdp.n_states;

    BeliefGridSolution sol;
    sol.resolution = resolution;
    std::vector<ObservationIndex> obs_of(n);
    for (ObservationIndex y = 0; y < pomdp.n_observations; ++y) {
        auto sup = non_terminal_emitters(pomdp, y);
        if (sup.size() > 2) throw ContractViolation("belief grid supports at most two states per observation");
        sol.values.emplace_back(sup.empty() ? 0 : (sup.size() == 1 ? 1 : resolution), 0.0);
        for (StateIndex s : pomdp.states_emitting(y)) obs_of[s] = y;
        sol.support.push_back(std::move(sup));
    }

    auto lookup = [&](const std::vector<std::vector<double>>& values, ObservationIndex y, double p_first) {
        if (values[y].size() == 1) return values[y][0];
        const auto k = static_cast<std::size_t>(std::lround(p_first * static_cast<double>(resolution - 1)));
        return values[y][k];
    };

    auto next_values = sol.values;
    for (;;) {
        double residual = 0.0;
        for (ObservationIndex y = 0; y < sol.support.size(); ++y) {
            for (std::size_t k = 0; k < sol.values[y].size(); ++k) {
                const Belief b = sol.belief_at(n, y, k);
                double best = -std::numeric_limits<double>::infinity();
                for (ActionIndex a = 0; a < mdp.n_actions; ++a) {
                    double q = 0.0;
                    for (StateIndex s = 0; s < n; ++s) q += b.p[s] * mdp.r(s, a);
                    const auto next = predict(mdp, b, a);
                    std::vector<double> mass(pomdp.n_observations, 0.0);
                    std::vector<double> first(pomdp.n_observations, 0.0);
                    for (StateIndex t = 0; t < n; ++t) {
                        if (next[t] == 0.0) continue;
                        if (mdp.is_terminal(t)) {
                            q += mdp.discount * next[t] * *mdp.terminal_values[t];
                            continue;
                        }
                        const ObservationIndex yt = obs_of[t];
                        mass[yt] += next[t];
                        if (sol.support[yt][0] == t) first[yt] += next[t];
                    }
                    for (ObservationIndex yt = 0; yt < pomdp.n_observations; ++yt)
                        if (mass[yt] > 0.0) q += mdp.discount * mass[yt] * lookup(sol.values, yt, first[yt] / mass[yt]);
                    best = std::max(best, q);
                }
                next_values[y][k] = best;
                residual = std::max(residual, std::abs(best - sol.values[y][k]));
            }
        }
        sol.values.swap(next_values);
        ++sol.iterations;
        if (residual < epsilon) break;
        if (sol.iterations > 100000) throw InvariantViolation("belief grid iteration did not converge");
    }
    return sol;
}

std::vector<double> belief_q_values(const FinitePOMDP& pomdp, const AlphaSolution& solution, const Belief& belief) {
    check_belief(pomdp, belief);
    const FiniteMDP& mdp = pomdp.mdp;
    const std::size_t n = mdp.n_states;

    std::vector<double> q(mdp.n_actions, 0.0);
    for (ActionIndex a = 0; a < mdp.n_actions; ++a) {
        double total = 0.0;
        Belief live{std::vector<double>(n, 0.0)};
        for (StateIndex s = 0; s < n; ++s) {
            if (mdp.is_terminal(s)) total += belief.p[s] * *mdp.terminal_values[s];
            else {
                total += belief.p[s] * mdp.r(s, a);
                live.p[s] = belief.p[s];
            }
        }
        const auto next = predict(mdp, live, a);
        for (ObservationIndex y = 0; y < pomdp.n_observations; ++y) {
            std::vector<double> tau(n, 0.0);
            double mass = 0.0;
            for (StateIndex t = 0; t < n; ++t) {
                tau[t] = next[t] * pomdp.o(t, y);
                mass += tau[t];
            }
            if (mass == 0.0) continue;
            double best = -std::numeric_limits<double>::infinity();
            for (const auto& alpha : solution.alphas) best = std::max(best, dot(alpha.values, tau));
            total += mdp.discount * best;
        }
        q[a] = total;
    }
    return q;
}

std::vector<Belief> reporting_beliefs(const FinitePOMDP& pomdp, ObservationIndex y, const ObservationPolicyOptions& options) {
    const auto support = non_terminal_emitters(pomdp, y);
    if (support.empty()) return {};
    if (options.beliefs == ReportingBeliefs::Uniform) return {Belief::uniform_over(pomdp.n_states(), support)};
    return support_beliefs(pomdp.n_states(), support, options.segment_resolution);
}

std::vector<std::vector<ActionIndex>> policy_at_observation(const FinitePOMDP& pomdp, const AlphaSolution& solution,
                                                            const ObservationPolicyOptions& options) {
    if (!(options.tie_tolerance >= 0.0)) throw ContractViolation("tie tolerance must be non-negative");
    std::vector<std::vector<ActionIndex>> out(pomdp.n_observations);
    for (ObservationIndex y = 0; y < pomdp.n_observations; ++y) {
        std::vector<bool> member(pomdp.n_actions(), false);
        for (const auto& b : reporting_beliefs(pomdp, y, options)) {
            const auto q = belief_q_values(pomdp, solution, b);
            const double best = *std::max_element(q.begin(), q.end());
            for (ActionIndex a = 0; a < q.size(); ++a)
                if (q[a] >= best - options.tie_tolerance) member[a] = true;
        }
        for (ActionIndex a = 0; a < member.size(); ++a)
            if (member[a]) out[y].push_back(a);
    }
    return out;
}

}  // namespace spoofgrid
