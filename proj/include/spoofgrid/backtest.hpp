#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace spoofgrid {

/// Closing prices for contracts A and B over ticks 0..T.
struct PriceSeries {
    std::string name;
    std::vector<double> price_a;
    std::vector<double> price_b;

    std::size_t size() const { return price_a.size(); }
    /// Last tick index T.
    std::size_t last_tick() const { return price_a.size() - 1; }

    /// Throws ContractViolation on unequal lengths, fewer than two ticks, or
    /// non-positive prices.
    void validate() const;
};

/// Reads the `tick,price_a,price_b` CSV format. Ticks must run 0,1,2,... in
/// file order. Throws ParseError naming the offending line.
PriceSeries load_price_csv(const std::filesystem::path& path);
PriceSeries parse_price_csv(std::istream& in, std::string name = {});

struct Portfolio {
    long long qty_a = 0;
    long long qty_b = 0;
    double cash = 0.0;

    double market_value(double price_a, double price_b) const {
        return static_cast<double>(qty_a) * price_a + static_cast<double>(qty_b) * price_b;
    }
    double capital(double price_a, double price_b) const { return market_value(price_a, price_b) + cash; }

    /// Holdings of `qty_each` contracts per asset plus cash topping the account
    /// up to `capital` at the given prices.
    static Portfolio with_capital(double capital, long long qty_each, double price_a, double price_b);
};

enum class StrategyKind { BuyAndHold, Honest, Spoofing };

std::string_view to_string(StrategyKind k);

struct StrategySpec {
    StrategyKind kind = StrategyKind::Honest;
    /// Ticks at which the strategy buys `trade_size` contracts of each asset.
    std::vector<std::size_t> trade_ticks;
    /// Subset of trade_ticks executed with a spoof order (Spoofing only).
    std::vector<std::size_t> manipulative_ticks;
    long long trade_size = 100;
    /// Fee charged per executed trade as a fraction of its notional.
    double fee_rate = 0.0005;
    /// Execution-price improvement of manipulative trades, basis points.
    double impact_bps = 25.0;

    void validate(std::size_t last_tick) const;

    static StrategySpec buy_and_hold();
    /// Buys at ticks 23, 46, 69 and 92.
    static StrategySpec honest();
    /// The honest schedule with the trades at 46 and 92 spoofed.
    static StrategySpec spoofing();
};

struct TradeRecord {
    std::size_t tick = 0;
    char asset = 'A';
    long long quantity = 0;
    double price = 0.0;
    double fee = 0.0;
    bool manipulative = false;
    bool filled = true;
    std::string note;
};

struct BacktestReport {
    StrategyKind strategy = StrategyKind::Honest;
    std::string series;
    double initial_capital = 0.0;
    double final_capital = 0.0;
    /// G_T = I_T - I_0.
    double growth = 0.0;
    double total_fees = 0.0;
    /// Π = G_T - Σ z.
    double net_profit = 0.0;
    /// 100 * Π / I_0.
    double profit_pct = 0.0;
    /// I_τ after each tick's trades.
    std::vector<double> capital_curve;
    /// Largest |I_τ - (A_τ + C_τ)| seen during the run.
    double max_accounting_error = 0.0;
    std::vector<TradeRecord> trade_log;
    Portfolio final_portfolio;
};

/// Marks to market every tick and executes the scheduled buys at the close
/// (or the impact-improved price for manipulative trades). Fees are tracked
/// apart from cash so that Π = G_T - Σ z. A buy costing more than the cash on
/// hand is not filled: it is logged and charges no fee.
BacktestReport run_strategy(const PriceSeries& series, const StrategySpec& spec, const Portfolio& initial);

struct StrategySummary {
    StrategyKind strategy = StrategyKind::Honest;
    std::size_t runs = 0;
    double mean_profit_pct = 0.0;
    /// Population standard deviation.
    double stddev_profit_pct = 0.0;
};

/// Per-strategy mean and standard deviation of profit_pct, in BuyAndHold,
/// Honest, Spoofing order for the strategies present. Throws
/// ContractViolation on empty input.
std::vector<StrategySummary> summarize_runs(const std::vector<BacktestReport>& reports);

std::string report_to_json(const BacktestReport& report, int indent = 2);
/// Header plus one row per report: strategy,series,growth,total_fees,net_profit,profit_pct.
std::string reports_to_csv(const std::vector<BacktestReport>& reports);

}  // namespace spoofgrid
