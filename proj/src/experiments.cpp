#include "spoofgrid/experiments.hpp"

#include "spoofgrid/errors.hpp"
#include "spoofgrid/mdp_solver.hpp"
#include "spoofgrid/pomdp_solver.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <future>
#include <iomanip>
#include <sstream>

namespace spoofgrid {

using nlohmann::ordered_json;

namespace {

Scenario uncertain(double p) {
    Scenario s;
    s.toggle_probability = p;
    return s;
}

std::vector<Action> to_actions(const std::vector<ActionIndex>& indices) {
    std::vector<Action> out;
    for (ActionIndex a : indices) out.push_back(static_cast<Action>(a));
    return out;
}

std::vector<std::vector<Action>> mdp_column(const Scenario& scenario, double tie_tolerance) {
    const FiniteMDP mdp = build_mdp(scenario);
    const PolicySet policy = extract_policy_set(mdp, q_values(mdp, value_iteration(mdp)), tie_tolerance);
    std::vector<std::vector<Action>> rows;
    for (std::size_t s = 0; s < kNumNonTerminal; ++s) rows.push_back(to_actions(policy[s]));
    return rows;
}

std::vector<std::vector<Action>> pomdp_column(const Scenario& scenario, double tie_tolerance, bool uniform) {
    const FinitePOMDP pomdp = build_pomdp(scenario);
    const AlphaSolution sol = alpha_value_iteration(pomdp);
    if (!sol.converged) throw InvariantViolation("alpha-vector iteration did not converge");
    ObservationPolicyOptions opts;
    opts.tie_tolerance = tie_tolerance;
    opts.beliefs = uniform ? ReportingBeliefs::Uniform : ReportingBeliefs::Segment;
    const auto sets = policy_at_observation(pomdp, sol, opts);
    std::vector<std::vector<Action>> rows;
    for (std::size_t y = 0; y < kNumNonGoalObservations; ++y) rows.push_back(to_actions(sets[y]));
    return rows;
}

PolicyTable assemble(std::string title, std::vector<std::string> rows, std::vector<std::string> columns,
                     std::vector<std::future<std::vector<std::vector<Action>>>> futures) {
    PolicyTable t{std::move(title), std::move(rows), std::move(columns), {}};
    t.cells.assign(t.rows.size(), std::vector<std::vector<Action>>(t.columns.size()));
    for (std::size_t c = 0; c < futures.size(); ++c) {
        const auto column = futures[c].get();
        for (std::size_t r = 0; r < t.rows.size(); ++r) t.cells[r][c] = column[r];
    }
    return t;
}

bool any_manipulative(const std::vector<Action>& actions) {
    return std::any_of(actions.begin(), actions.end(), is_manipulative);
}

std::string fmt(double v, int precision = 6) {
    std::ostringstream os;
    os << std::setprecision(precision) << v;
    return os.str();
}

std::string fixed(double v, int precision) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(precision) << v;
    return os.str();
}

}  // namespace

const std::vector<ScenarioPreset>& scenario_presets() {
    static const std::vector<ScenarioPreset> presets{
        {"mdp_baseline", Scenario{}},
        {"mdp_fines", Scenario{}.with_manipulative_cost(kFineCost)},
        {"mdp_uncertain_50", uncertain(0.5)},
        {"mdp_uncertain_10", uncertain(0.1)},
        {"pomdp_baseline", Scenario{}},
        {"pomdp_costs", Scenario{}.with_manipulative_cost(kPingingCost)},
        {"pomdp_uncertain_50", uncertain(0.5)},
        {"pomdp_uncertain_10", uncertain(0.1)},
    };
    return presets;
}

std::optional<Scenario> find_preset(std::string_view name) {
    for (const auto& p : scenario_presets())
        if (p.name == name) return p.scenario;
    return std::nullopt;
}

bool PolicyTable::contains(std::size_t row, std::size_t column, Action a) const {
    const auto& c = cells[row][column];
    return std::find(c.begin(), c.end(), a) != c.end();
}

PolicyTable run_table2(const TableOptions& options) {
    std::vector<std::string> rows;
    for (std::size_t s = 0; s < kNumNonTerminal; ++s) rows.emplace_back(to_string(static_cast<GrowthState>(s)));

    std::vector<std::future<std::vector<std::vector<Action>>>> futures;
    for (const char* name : {"mdp_baseline", "mdp_fines", "mdp_uncertain_50", "mdp_uncertain_10"})
        futures.push_back(std::async(std::launch::async, mdp_column, *find_preset(name), options.tie_tolerance));
    return assemble("Optimal actions, spoofing MDP", std::move(rows),
                    {"baseline", "fines (-4.53)", "uncertain 50/50", "uncertain 10/90"}, std::move(futures));
}

PolicyTable run_table3(const TableOptions& options) {
    std::vector<std::string> rows;
    for (std::size_t y = 0; y < kNumNonGoalObservations; ++y) rows.emplace_back(to_string(static_cast<GridObservation>(y)));

    std::vector<std::future<std::vector<std::vector<Action>>>> futures;
    for (const char* name : {"pomdp_baseline", "pomdp_costs", "pomdp_uncertain_50", "pomdp_uncertain_10"})
        futures.push_back(std::async(std::launch::async, pomdp_column, *find_preset(name), options.tie_tolerance,
                                     options.uniform_beliefs));
    return assemble(options.uniform_beliefs ? "Optimal actions, pinging POMDP (uniform beliefs)"
                                            : "Optimal actions, pinging POMDP",
                    std::move(rows), {"baseline", "costs (-4.91)", "uncertain 50/50", "uncertain 10/90"},
                    std::move(futures));
}

std::string format_cell(const std::vector<Action>& actions) {
    std::string names;
    std::string symbols;
    for (std::size_t i = 0; i < actions.size(); ++i) {
        if (i > 0) {
            names += ", ";
            symbols += ", ";
        }
        names += to_string(actions[i]);
        symbols += spoof_side_symbol(actions[i]);
    }
    return actions.empty() ? "-" : names + " (" + symbols + ")";
}

std::string table_to_markdown(const PolicyTable& table) {
    std::ostringstream os;
    os << "## " << table.title << "\n\n| |";
    for (const auto& c : table.columns) os << ' ' << c << " |";
    os << "\n|---|";
    for (std::size_t c = 0; c < table.columns.size(); ++c) os << "---|";
    os << '\n';
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        os << "| " << table.rows[r] << " |";
        for (std::size_t c = 0; c < table.columns.size(); ++c) os << ' ' << format_cell(table.cells[r][c]) << " |";
        os << '\n';
    }
    return os.str();
}

std::string table_to_csv(const PolicyTable& table) {
    std::ostringstream os;
    os << "row";
    for (const auto& c : table.columns) os << ",\"" << c << '"';
    os << '\n';
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        os << table.rows[r];
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            os << ",\"";
            const auto& cell = table.cells[r][c];
            for (std::size_t i = 0; i < cell.size(); ++i) os << (i ? " " : "") << to_string(cell[i]);
            os << '"';
        }
        os << '\n';
    }
    return os.str();
}

std::string table_to_json(const PolicyTable& table, int indent) {
    ordered_json doc;
    doc["title"] = table.title;
    doc["rows"] = table.rows;
    doc["columns"] = table.columns;
    auto& cells = doc["cells"] = ordered_json::array();
    for (const auto& row : table.cells) {
        ordered_json jr = ordered_json::array();
        for (const auto& cell : row) {
            ordered_json jc = ordered_json::array();
            for (Action a : cell) jc.push_back(std::string(to_string(a)));
            jr.push_back(std::move(jc));
        }
        cells.push_back(std::move(jr));
    }
    auto& symbols = doc["symbols"] = ordered_json::object();
    for (Action a : kAllActions) symbols[std::string(to_string(a))] = std::string(spoof_side_symbol(a));
    return doc.dump(indent);
}

std::vector<ActionIndex> manipulative_first_order() {
    std::vector<ActionIndex> order;
    for (Action a : kAllActions)
        if (is_manipulative(a)) order.push_back(index_of(a));
    for (Action a : kAllActions)
        if (!is_manipulative(a)) order.push_back(index_of(a));
    return order;
}

Trajectory run_trajectory(const Scenario& scenario, GrowthState start, double tie_tolerance,
                          const std::vector<ActionIndex>& tie_break) {
    const FiniteMDP mdp = build_mdp(scenario);
    const PolicySet policy = extract_policy_set(mdp, q_values(mdp, value_iteration(mdp)), tie_tolerance);
    return greedy_trajectory(mdp, policy, index_of(start), tie_break);
}

std::string_view to_string(ModelKind k) { return k == ModelKind::Mdp ? "mdp" : "pomdp"; }

std::string_view to_string(SweepParameter p) {
    return p == SweepParameter::ManipulativeCost ? "manip_cost" : "toggle_probability";
}

std::size_t manipulative_count(ModelKind model, const Scenario& scenario, double tie_tolerance) {
    std::size_t count = 0;
    if (model == ModelKind::Mdp) {
        for (const auto& row : mdp_column(scenario, tie_tolerance)) count += any_manipulative(row) ? 1 : 0;
    } else {
        for (const auto& row : pomdp_column(scenario, tie_tolerance, false)) count += any_manipulative(row) ? 1 : 0;
    }
    return count;
}

SweepResult critical_threshold_sweep(ModelKind model, SweepParameter parameter, double lo, double hi,
                                     const SweepOptions& options) {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) throw ContractViolation("sweep range must satisfy lo < hi");
    if (!(options.tolerance > 0.0)) throw ContractViolation("sweep tolerance must be positive");
    if (!(options.grid_step > 0.0)) throw ContractViolation("grid step must be positive");
    if (parameter == SweepParameter::ToggleProbability && (lo < 0.0 || hi > 1.0))
        throw ContractViolation("toggle probability range must lie within [0,1]");
    if (parameter == SweepParameter::ManipulativeCost && lo < 0.0)
        throw ContractViolation("cost magnitudes must be non-negative");

    const Scenario base = options.base.value_or(Scenario{});
    auto scenario_at = [&](double x) {
        if (parameter == SweepParameter::ManipulativeCost) return base.with_manipulative_cost(-x);
        Scenario s = base;
        s.toggle_probability = x;
        return s;
    };
    auto count_at = [&](double x) { return manipulative_count(model, scenario_at(x), options.tie_tolerance); };

    SweepResult result;
    result.model = model;
    result.parameter = parameter;
    result.range_lo = lo;
    result.range_hi = hi;

    // Costs grow from lo; probabilities shrink from hi.
    const bool ascending = parameter == SweepParameter::ManipulativeCost;
    const auto steps = static_cast<std::size_t>(std::ceil((hi - lo) / options.grid_step - 1e-9));
    for (std::size_t i = 0; i <= steps; ++i) {
        const double offset = std::min(static_cast<double>(i) * options.grid_step, hi - lo);
        const double x = ascending ? lo + offset : hi - offset;
        result.grid.push_back({x, count_at(x)});
    }

    for (std::size_t i = 1; i < result.grid.size(); ++i) {
        if (result.grid[i - 1].manipulative_count > 0 && result.grid[i].manipulative_count == 0) {
            double present = result.grid[i - 1].parameter;
            double absent = result.grid[i].parameter;
            while (std::abs(absent - present) > options.tolerance) {
                const double mid = 0.5 * (present + absent);
                (count_at(mid) > 0 ? present : absent) = mid;
            }
            result.found = true;
            result.bracket_lo = present;
            result.bracket_hi = absent;
            result.message = "manipulation vanishes between " + fmt(present, 10) + " and " + fmt(absent, 10);
            return result;
        }
    }
    result.message = "no threshold in range";
    return result;
}

std::string sweep_to_markdown(const SweepResult& r) {
    std::ostringstream os;
    os << "## Threshold sweep: " << to_string(r.model) << ", " << to_string(r.parameter) << " in [" << fmt(r.range_lo)
       << ", " << fmt(r.range_hi) << "]\n\n";
    os << "| " << to_string(r.parameter) << " | manipulative rows |\n|---|---|\n";
    for (const auto& p : r.grid) os << "| " << fixed(p.parameter, 4) << " | " << p.manipulative_count << " |\n";
    os << '\n';
    if (r.found)
        os << "Critical value: " << fmt(r.threshold(), 10) << " (bracket " << fmt(r.bracket_lo, 10) << " .. "
           << fmt(r.bracket_hi, 10) << ")\n";
    else
        os << r.message << '\n';
    return os.str();
}

std::string sweep_to_csv(const SweepResult& r) {
    std::ostringstream os;
    os << to_string(r.parameter) << ",manipulative_count\n";
    for (const auto& p : r.grid) os << fixed(p.parameter, 6) << ',' << p.manipulative_count << '\n';
    return os.str();
}

std::string sweep_to_json(const SweepResult& r, int indent) {
    ordered_json doc;
    doc["model"] = std::string(to_string(r.model));
    doc["parameter"] = std::string(to_string(r.parameter));
    doc["range"] = {r.range_lo, r.range_hi};
    auto& grid = doc["grid"] = ordered_json::array();
    for (const auto& p : r.grid) grid.push_back({{"value", p.parameter}, {"manipulative_count", p.manipulative_count}});
    doc["found"] = r.found;
    if (r.found) {
        doc["bracket"] = {r.bracket_lo, r.bracket_hi};
        doc["threshold"] = r.threshold();
    }
    doc["message"] = r.message;
    return doc.dump(indent);
}

Table1 run_table1(const std::vector<PriceSeries>& series, const Table1Options& options) {
    if (series.empty()) throw ContractViolation("at least one price series is required");
    Table1 table;
    for (const auto& s : series) {
        s.validate();
        const Portfolio start =
            Portfolio::with_capital(options.initial_capital, options.initial_contracts, s.price_a[0], s.price_b[0]);
        for (const StrategySpec* spec : {&options.buy_and_hold, &options.honest, &options.spoofing})
            table.reports.push_back(run_strategy(s, *spec, start));
    }
    table.summary = summarize_runs(table.reports);
    return table;
}

namespace {

std::string assumptions_line() {
    const StrategySpec h = StrategySpec::honest();
    const StrategySpec s = StrategySpec::spoofing();
    std::ostringstream os;
    os << "Calibrated stand-in defaults: trade size " << h.trade_size << " contracts per asset, fee "
       << fmt(h.fee_rate * 100.0) << "% of notional, spoof impact " << fmt(s.impact_bps)
       << " bps; honest trades at ticks 23/46/69/92, spoofed at 46/92.";
    return os.str();
}

}  // namespace

std::string table1_to_markdown(const Table1& table) {
    std::ostringstream os;
    os << "## Profitability under a bull market\n\n| Strategy | Avg. profit (%) | Std. dev. | Runs |\n|---|---|---|---|\n";
    for (const auto& s : table.summary)
        os << "| " << to_string(s.strategy) << " | " << fixed(s.mean_profit_pct, 4) << " | "
           << fixed(s.stddev_profit_pct, 6) << " | " << s.runs << " |\n";
    os << '\n' << assumptions_line() << '\n';
    return os.str();
}

std::string table1_to_csv(const Table1& table) {
    std::ostringstream os;
    os << "strategy,runs,mean_profit_pct,stddev_profit_pct\n";
    for (const auto& s : table.summary)
        os << to_string(s.strategy) << ',' << s.runs << ',' << fixed(s.mean_profit_pct, 8) << ','
           << fixed(s.stddev_profit_pct, 8) << '\n';
    return os.str();
}

std::string table1_to_json(const Table1& table, int indent) {
    ordered_json doc;
    auto& summary = doc["summary"] = ordered_json::array();
    for (const auto& s : table.summary)
        summary.push_back({{"strategy", std::string(to_string(s.strategy))},
                           {"runs", s.runs},
                           {"mean_profit_pct", s.mean_profit_pct},
                           {"stddev_profit_pct", s.stddev_profit_pct}});
    auto& runs = doc["runs"] = ordered_json::array();
    for (const auto& r : table.reports)
        runs.push_back({{"strategy", std::string(to_string(r.strategy))},
                        {"series", r.series},
                        {"growth", r.growth},
                        {"total_fees", r.total_fees},
                        {"net_profit", r.net_profit},
                        {"profit_pct", r.profit_pct}});
    doc["assumptions"] = assumptions_line();
    return doc.dump(indent);
}

}  // namespace spoofgrid
