#pragma once

#include "spoofgrid/backtest.hpp"
#include "spoofgrid/growth_grid.hpp"
#include "spoofgrid/mdp_solver.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace spoofgrid {

inline constexpr double kFineCost = -4.53;
inline constexpr double kPingingCost = -4.91;

struct ScenarioPreset {
    std::string name;
    Scenario scenario;
};

/// mdp_baseline, mdp_fines, mdp_uncertain_50, mdp_uncertain_10, pomdp_baseline,
/// pomdp_costs, pomdp_uncertain_50, pomdp_uncertain_10.
const std::vector<ScenarioPreset>& scenario_presets();
std::optional<Scenario> find_preset(std::string_view name);

/// Optimal action sets by row (state or observation) and column (regime).
struct PolicyTable {
    std::string title;
    std::vector<std::string> rows;
    std::vector<std::string> columns;
    /// cells[row][column]
    std::vector<std::vector<std::vector<Action>>> cells;

    const std::vector<Action>& cell(std::size_t row, std::size_t column) const {
        return cells[row][column];
    }
    bool contains(std::size_t row, std::size_t column, Action a) const;
};

struct TableOptions {
    double tie_tolerance = 1e-6;
    /// Reporting beliefs for the observation tables.
    bool uniform_beliefs = false;
};

/// Rows x1..x8; columns baseline, fines, uncertain 50%, uncertain 10%.
PolicyTable run_table2(const TableOptions& options = {});
/// Rows y1..y5; columns baseline, costs, uncertain 50%, uncertain 10%.
PolicyTable run_table3(const TableOptions& options = {});

/// Both action naming schemes, e.g. "MBuyB (u_sB^m)".
std::string format_cell(const std::vector<Action>& actions);
std::string table_to_markdown(const PolicyTable& table);
std::string table_to_csv(const PolicyTable& table);
/// {"title", "rows", "columns", "cells", "symbols"}; cells hold action identifiers.
std::string table_to_json(const PolicyTable& table, int indent = 2);

enum class ModelKind { Mdp, Pomdp };
enum class SweepParameter { ManipulativeCost, ToggleProbability };

std::string_view to_string(ModelKind k);
std::string_view to_string(SweepParameter p);

/// Tie-break for reported trajectories: manipulative actions first, then
/// honest ones, each in enumeration order.
std::vector<ActionIndex> manipulative_first_order();

/// Solves the MDP for `scenario` and follows the greedy policy from `start`.
Trajectory run_trajectory(const Scenario& scenario, GrowthState start, double tie_tolerance = 1e-6,
                          const std::vector<ActionIndex>& tie_break = manipulative_first_order());

struct SweepPoint {
    double parameter = 0.0;
    /// States (MDP) or observations (POMDP) where a manipulative action is optimal.
    std::size_t manipulative_count = 0;
};

struct SweepResult {
    ModelKind model = ModelKind::Mdp;
    SweepParameter parameter = SweepParameter::ManipulativeCost;
    double range_lo = 0.0;
    double range_hi = 0.0;
    std::vector<SweepPoint> grid;
    bool found = false;
    /// Manipulation present at bracket_lo, absent at bracket_hi (for
    /// ManipulativeCost the parameter is the cost magnitude; for
    /// ToggleProbability it is scanned from high to low, so bracket_lo is the
    /// larger probability).
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    std::string message;

    double threshold() const { return 0.5 * (bracket_lo + bracket_hi); }
};

struct SweepOptions {
    double grid_step = 0.1;
    double tolerance = 1e-4;
    double tie_tolerance = 1e-6;
    /// Base regime; the swept parameter overrides its field(s).
    std::optional<Scenario> base;
};

/// Count of states (MDP) / observations (POMDP) with an optimal manipulative action.
std::size_t manipulative_count(ModelKind model, const Scenario& scenario, double tie_tolerance = 1e-6);

/// Grid scan over [lo, hi] and bisection on "is any manipulative action
/// optimal anywhere?". Returns the smallest cost magnitude (or, for the toggle
/// probability, the boundary below which) manipulation vanishes.
SweepResult critical_threshold_sweep(ModelKind model, SweepParameter parameter, double lo, double hi,
                                     const SweepOptions& options = {});

std::string sweep_to_markdown(const SweepResult& result);
std::string sweep_to_csv(const SweepResult& result);
std::string sweep_to_json(const SweepResult& result, int indent = 2);

struct Table1 {
    std::vector<BacktestReport> reports;
    std::vector<StrategySummary> summary;
};

struct Table1Options {
    double initial_capital = 10'000'000.0;
    long long initial_contracts = 1000;
    StrategySpec buy_and_hold = StrategySpec::buy_and_hold();
    StrategySpec honest = StrategySpec::honest();
    StrategySpec spoofing = StrategySpec::spoofing();
};

/// Runs the three strategies on every series. The starting portfolio holds
/// `initial_contracts` of each asset, topped up with cash to `initial_capital`.
Table1 run_table1(const std::vector<PriceSeries>& series, const Table1Options& options = {});

std::string table1_to_markdown(const Table1& table);
std::string table1_to_csv(const Table1& table);
std::string table1_to_json(const Table1& table, int indent = 2);

}  // namespace spoofgrid
