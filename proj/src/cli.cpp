#include "spoofgrid/cli.hpp"

#include "spoofgrid/backtest.hpp"
#include "spoofgrid/errors.hpp"
#include "spoofgrid/experiments.hpp"
#include "spoofgrid/mdp_solver.hpp"
#include "spoofgrid/pomdp_solver.hpp"
#include "spoofgrid/scenario_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#ifndef SPOOFGRID_DATA_DIR
#define SPOOFGRID_DATA_DIR "data"
#endif

namespace spoofgrid::cli {

namespace {

using nlohmann::ordered_json;

enum class Format { Markdown, Csv, Json };

struct Options {
    std::string scenario = "mdp_baseline";
    std::string format = "markdown";
    std::string out;
    double tie_tolerance = 1e-6;
    std::string start = "x2";
    std::string param = "manip_cost";
    std::string range;
    double tolerance = 1e-4;
    double step = 0.1;
    std::vector<std::string> prices;
    std::string beliefs = "segment";
    std::string model = "mdp";
    long long seed = 0;
};

/// Domain-level failure raised by the dispatcher itself.
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Format parse_format(const std::string& f) {
    if (f == "markdown") return Format::Markdown;
    if (f == "csv") return Format::Csv;
    return Format::Json;
}

Scenario resolve_scenario(const std::string& spec) {
    if (auto preset = find_preset(spec)) return *preset;
    if (!std::filesystem::exists(spec)) throw DomainError("'" + spec + "' is neither a preset nor a scenario file");
    return load_scenario(spec);
}

std::string join_actions(const std::vector<ActionIndex>& actions, const char* sep) {
    std::string s;
    for (std::size_t i = 0; i < actions.size(); ++i) {
        if (i) s += sep;
        s += to_string(static_cast<Action>(actions[i]));
    }
    return s;
}

std::string num(double v, int precision = 10) {
    std::ostringstream os;
    os << std::setprecision(precision) << v;
    return os.str();
}

std::string solve_mdp(const Options& o, Format f) {
    const Scenario scenario = resolve_scenario(o.scenario);
    const FiniteMDP mdp = build_mdp(scenario);
    const ValueFunction v = value_iteration(mdp);
    const PolicySet policy = extract_policy_set(mdp, q_values(mdp, v), o.tie_tolerance);

    std::ostringstream os;
    if (f == Format::Json) {
        ordered_json doc;
        doc["scenario"] = ordered_json::parse(scenario_to_json(scenario));
        doc["iterations"] = v.iterations;
        auto& states = doc["states"] = ordered_json::array();
        for (StateIndex s = 0; s < mdp.n_states; ++s) {
            ordered_json row{{"state", mdp.state_labels[s]}, {"value", v[s]}, {"terminal", mdp.is_terminal(s)}};
            ordered_json acts = ordered_json::array();
            for (ActionIndex a : policy[s]) acts.push_back(mdp.action_labels[a]);
            row["actions"] = std::move(acts);
            states.push_back(std::move(row));
        }
        os << doc.dump(2) << '\n';
    } else if (f == Format::Csv) {
        os << "state,value,actions\n";
        for (StateIndex s = 0; s < mdp.n_states; ++s)
            os << mdp.state_labels[s] << ',' << num(v[s]) << ",\"" << join_actions(policy[s], " ") << "\"\n";
    } else {
        os << "## MDP solution (" << v.iterations << " sweeps)\n\n| State | V | Optimal actions |\n|---|---|---|\n";
        for (StateIndex s = 0; s < mdp.n_states; ++s) {
            std::vector<Action> acts;
            for (ActionIndex a : policy[s]) acts.push_back(static_cast<Action>(a));
            os << "| " << mdp.state_labels[s] << " | " << num(v[s]) << " | "
               << (mdp.is_terminal(s) ? std::string("terminal") : format_cell(acts)) << " |\n";
        }
    }
    return os.str();
}

std::string solve_pomdp(const Options& o, Format f) {
    const Scenario scenario = resolve_scenario(o.scenario);
    const FinitePOMDP pomdp = build_pomdp(scenario);
    const AlphaSolution sol = alpha_value_iteration(pomdp);
    if (!sol.converged) throw DomainError("alpha-vector iteration did not converge");

    ObservationPolicyOptions popts;
    popts.tie_tolerance = o.tie_tolerance;
    popts.beliefs = o.beliefs == "uniform" ? ReportingBeliefs::Uniform : ReportingBeliefs::Segment;
    const auto sets = policy_at_observation(pomdp, sol, popts);

    struct Row {
        std::string obs;
        std::vector<StateIndex> support;
        double uniform_value;
        std::vector<ActionIndex> actions;
    };
    std::vector<Row> rows;
    for (ObservationIndex y = 0; y < kNumNonGoalObservations; ++y) {
        const auto support = pomdp.states_emitting(y);
        rows.push_back({pomdp.observation_labels[y], support, sol.value(Belief::uniform_over(pomdp.n_states(), support)),
                        sets[y]});
    }

    std::ostringstream os;
    if (f == Format::Json) {
        ordered_json doc;
        doc["scenario"] = ordered_json::parse(scenario_to_json(scenario));
        doc["backups"] = sol.backups;
        doc["alpha_vectors"] = sol.alphas.size();
        doc["beliefs"] = o.beliefs;
        auto& obs = doc["observations"] = ordered_json::array();
        for (const auto& r : rows) {
            ordered_json states = ordered_json::array();
            for (StateIndex s : r.support) states.push_back(pomdp.mdp.state_labels[s]);
            ordered_json acts = ordered_json::array();
            for (ActionIndex a : r.actions) acts.push_back(pomdp.mdp.action_labels[a]);
            obs.push_back({{"observation", r.obs}, {"states", states}, {"uniform_belief_value", r.uniform_value},
                           {"actions", acts}});
        }
        os << doc.dump(2) << '\n';
    } else if (f == Format::Csv) {
        os << "observation,states,uniform_belief_value,actions\n";
        for (const auto& r : rows) {
            std::string states;
            for (StateIndex s : r.support) states += (states.empty() ? "" : " ") + pomdp.mdp.state_labels[s];
            os << r.obs << ",\"" << states << "\"," << num(r.uniform_value) << ",\"" << join_actions(r.actions, " ")
               << "\"\n";
        }
    } else {
        os << "## POMDP solution (" << sol.backups << " backups, " << sol.alphas.size() << " alpha vectors, "
           << o.beliefs << " beliefs)\n\n| Observation | States | V(uniform) | Optimal actions |\n|---|---|---|---|\n";
        for (const auto& r : rows) {
            std::string states;
            for (StateIndex s : r.support) states += (states.empty() ? "" : ", ") + pomdp.mdp.state_labels[s];
            std::vector<Action> acts;
            for (ActionIndex a : r.actions) acts.push_back(static_cast<Action>(a));
            os << "| " << r.obs << " | " << states << " | " << num(r.uniform_value) << " | " << format_cell(acts)
               << " |\n";
        }
    }
    return os.str();
}

std::string emit_table(const PolicyTable& t, Format f) {
    if (f == Format::Json) return table_to_json(t) + "\n";
    if (f == Format::Csv) return table_to_csv(t);
    return table_to_markdown(t);
}

std::vector<PriceSeries> load_series(const std::vector<std::string>& paths) {
    std::vector<std::filesystem::path> files;
    if (paths.empty()) {
        for (const auto& e : std::filesystem::directory_iterator(SPOOFGRID_DATA_DIR))
            if (e.path().extension() == ".csv") files.push_back(e.path());
        std::sort(files.begin(), files.end());
    } else {
        files.assign(paths.begin(), paths.end());
    }
    if (files.empty()) throw DomainError("no price files found");
    std::vector<PriceSeries> out;
    for (const auto& p : files) out.push_back(load_price_csv(p));
    return out;
}

std::string table1(const Options& o, Format f) {
    const Table1 t = run_table1(load_series(o.prices));
    if (f == Format::Json) return table1_to_json(t) + "\n";
    if (f == Format::Csv) return table1_to_csv(t);
    return table1_to_markdown(t);
}

std::string backtest(const Options& o, Format f) {
    if (o.prices.size() > 1) throw DomainError("backtest takes a single --prices file");
    const auto series = load_series(o.prices).front();
    const Table1 t = run_table1({series});
    if (f == Format::Json) {
        ordered_json doc = ordered_json::array();
        for (const auto& r : t.reports) doc.push_back(ordered_json::parse(report_to_json(r)));
        return doc.dump(2) + "\n";
    }
    if (f == Format::Csv) return reports_to_csv(t.reports);
    std::ostringstream os;
    os << "## Backtest: " << series.name << " (" << series.size() << " ticks)\n\n"
       << "| Strategy | Growth | Fees | Net profit | Profit (%) |\n|---|---|---|---|---|\n";
    for (const auto& r : t.reports)
        os << "| " << to_string(r.strategy) << " | " << std::fixed << std::setprecision(2) << r.growth << " | "
           << r.total_fees << " | " << r.net_profit << " | " << std::setprecision(4) << r.profit_pct << " |\n";
    return os.str();
}

std::string trajectory(const Options& o, Format f) {
    const Scenario scenario = resolve_scenario(o.scenario);
    const auto start = parse_state(o.start);
    if (!start) throw DomainError("unknown state '" + o.start + "'");
    if (is_goal(*start)) throw DomainError("trajectory must start in a non-goal state");
    const Trajectory t = run_trajectory(scenario, *start, o.tie_tolerance);

    auto state = [](StateIndex s) { return std::string(to_string(static_cast<GrowthState>(s))); };
    auto action = [](ActionIndex a) { return std::string(to_string(static_cast<Action>(a))); };

    std::ostringstream os;
    if (f == Format::Json) {
        ordered_json doc;
        doc["start"] = o.start;
        auto& steps = doc["steps"] = ordered_json::array();
        for (const auto& s : t.steps) steps.push_back({{"state", state(s.state)}, {"action", action(s.action)}});
        doc["final_state"] = state(t.final_state);
        doc["reached_goal"] = t.reached_terminal;
        doc["length"] = t.length();
        ordered_json cycle = ordered_json::array();
        for (StateIndex s : t.cycle) cycle.push_back(state(s));
        doc["cycle"] = std::move(cycle);
        os << doc.dump(2) << '\n';
    } else if (f == Format::Csv) {
        os << "step,state,action\n";
        for (std::size_t i = 0; i < t.steps.size(); ++i)
            os << i << ',' << state(t.steps[i].state) << ',' << action(t.steps[i].action) << '\n';
        os << t.steps.size() << ',' << state(t.final_state) << ",\n";
    } else {
        for (const auto& s : t.steps) os << state(s.state) << " --" << action(s.action) << "--> ";
        os << state(t.final_state);
        if (t.reached_terminal) os << "  (" << t.length() << " steps to goal)\n";
        else os << "  (no goal: cycles through " << t.cycle.size() << " states)\n";
    }
    return os.str();
}

std::pair<double, double> parse_range(const std::string& text, double lo, double hi) {
    if (text.empty()) return {lo, hi};
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw CLI::ValidationError("--range", "expected lo:hi");
    try {
        std::size_t used = 0;
        const double a = std::stod(text.substr(0, colon), &used);
        if (used != colon) throw std::invalid_argument("lo");
        const std::string rest = text.substr(colon + 1);
        const double b = std::stod(rest, &used);
        if (used != rest.size()) throw std::invalid_argument("hi");
        return {a, b};
    } catch (const std::logic_error&) {
        throw CLI::ValidationError("--range", "expected numeric lo:hi");
    }
}

std::string sweep(const Options& o, Format f) {
    const ModelKind model = o.model == "pomdp" ? ModelKind::Pomdp : ModelKind::Mdp;
    const SweepParameter param =
        o.param == "toggle_probability" ? SweepParameter::ToggleProbability : SweepParameter::ManipulativeCost;
    const auto [lo, hi] = param == SweepParameter::ManipulativeCost ? parse_range(o.range, 1.0, 5.0)
                                                                      : parse_range(o.range, 0.0, 1.0);
    SweepOptions opts;
    opts.tolerance = o.tolerance;
    opts.grid_step = o.step;
    opts.tie_tolerance = o.tie_tolerance;
    opts.base = resolve_scenario(o.scenario == "mdp_baseline" && model == ModelKind::Pomdp ? "pomdp_baseline"
                                                                                             : o.scenario);
    const SweepResult r = critical_threshold_sweep(model, param, lo, hi, opts);
    if (f == Format::Json) return sweep_to_json(r) + "\n";
    if (f == Format::Csv) return sweep_to_csv(r);
    return sweep_to_markdown(r);
}

}  // namespace

int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spoofing and pinging growth-grid solver laboratory", "spoofgrid"};
    app.require_subcommand(1, 1);
    app.set_version_flag("--version", "spoofgrid 1.0.0");

    Options o;
    auto add_common = [&](CLI::App* sub, bool scenario) {
        if (scenario) sub->add_option("--scenario", o.scenario, "Preset name or scenario JSON file");
        sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"markdown", "csv", "json"}));
        sub->add_option("--out", o.out, "Write output to this file instead of stdout");
        sub->add_option("--tie-tolerance", o.tie_tolerance, "Tie tolerance for optimal-action sets")
            ->check(CLI::Range(0.0, 1.0));
        sub->add_option("--seed", o.seed, "Reserved for stochastic rollouts");
    };

    auto* solve_mdp_cmd = app.add_subcommand("solve-mdp", "Solve the spoofing MDP and list optimal actions");
    add_common(solve_mdp_cmd, true);

    auto* solve_pomdp_cmd = app.add_subcommand("solve-pomdp", "Solve the pinging POMDP per observation");
    add_common(solve_pomdp_cmd, true);
    solve_pomdp_cmd->add_option("--beliefs", o.beliefs, "Reporting beliefs")
        ->check(CLI::IsMember({"segment", "uniform"}));

    auto* table1_cmd = app.add_subcommand("table1", "Backtest profitability summary over price files");
    add_common(table1_cmd, false);
    table1_cmd->add_option("--prices", o.prices, "Price CSV files (default: bundled samples)");

    auto* table2_cmd = app.add_subcommand("table2", "MDP optimal actions under four regimes");
    add_common(table2_cmd, false);

    auto* table3_cmd = app.add_subcommand("table3", "POMDP optimal actions under four regimes");
    add_common(table3_cmd, false);
    table3_cmd->add_option("--beliefs", o.beliefs, "Reporting beliefs")->check(CLI::IsMember({"segment", "uniform"}));

    auto* sweep_cmd = app.add_subcommand("sweep", "Locate the critical fine or toggle probability");
    add_common(sweep_cmd, true);
    sweep_cmd->add_option("model", o.model, "mdp or pomdp")->check(CLI::IsMember({"mdp", "pomdp"}));
    sweep_cmd->add_option("--param", o.param, "Swept parameter")
        ->check(CLI::IsMember({"manip_cost", "toggle_probability"}));
    sweep_cmd->add_option("--range", o.range, "lo:hi");
    sweep_cmd->add_option("--tolerance", o.tolerance, "Bisection bracket width")->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--step", o.step, "Grid step")->check(CLI::PositiveNumber);

    auto* backtest_cmd = app.add_subcommand("backtest", "Run the three strategies on one price file");
    add_common(backtest_cmd, false);
    backtest_cmd->add_option("--prices", o.prices, "Price CSV file");

    auto* trajectory_cmd = app.add_subcommand("trajectory", "Greedy optimal path from a start state");
    add_common(trajectory_cmd, true);
    trajectory_cmd->add_option("--start", o.start, "Start state (x1..x8)");

    try {
        app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::CallForHelp&) {
        err << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        err << app.version() << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    const Format f = parse_format(o.format);
    std::string data;
    try {
        if (*solve_mdp_cmd) data = solve_mdp(o, f);
        else if (*solve_pomdp_cmd) data = solve_pomdp(o, f);
        else if (*table1_cmd) data = table1(o, f);
        else if (*table2_cmd) data = emit_table(run_table2({o.tie_tolerance, false}), f);
        else if (*table3_cmd) data = emit_table(run_table3({o.tie_tolerance, o.beliefs == "uniform"}), f);
        else if (*sweep_cmd) data = sweep(o, f);
        else if (*backtest_cmd) data = backtest(o, f);
        else if (*trajectory_cmd) data = trajectory(o, f);
    } catch (const CLI::ValidationError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitDomainError;
    }

    if (!o.out.empty()) {
        std::ofstream file(o.out, std::ios::binary);
        if (!file || !(file << data)) {
            err << "error: cannot write " << o.out << '\n';
            return kExitDomainError;
        }
        return kExitOk;
    }
    out << data;
    return kExitOk;
}

}  // namespace spoofgrid::cli
