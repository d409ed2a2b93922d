#include "spoofgrid/backtest.hpp"

#include "spoofgrid/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

namespace spoofgrid {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    return s;
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
    text = trim(text);
    if (text.empty()) return false;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

bool contains(const std::vector<std::size_t>& v, std::size_t x) { return std::find(v.begin(), v.end(), x) != v.end(); }

std::string format_money(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(6) << v;
    return os.str();
}

}  // namespace

void PriceSeries::validate() const {
    if (price_a.size() != price_b.size()) throw ContractViolation("price columns have unequal lengths");
    if (price_a.size() < 2) throw ContractViolation("a price series needs at least two ticks");
    for (std::size_t t = 0; t < price_a.size(); ++t)
        if (!(price_a[t] > 0.0) || !(price_b[t] > 0.0) || !std::isfinite(price_a[t]) || !std::isfinite(price_b[t]))
            throw ContractViolation("non-positive price at tick " + std::to_string(t));
}

PriceSeries parse_price_csv(std::istream& in, std::string name) {
    PriceSeries series;
    series.name = std::move(name);
    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(in, line)) throw ParseError("empty price file", 1);
    ++line_no;
    if (trim(line) != "tick,price_a,price_b") throw ParseError("expected header 'tick,price_a,price_b'", line_no);

    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view row = trim(line);
        if (row.empty()) continue;

        std::vector<std::string_view> fields;
        std::size_t start = 0;
        for (;;) {
            const std::size_t comma = row.find(',', start);
            fields.push_back(row.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (fields.size() != 3) throw ParseError("expected 3 columns, found " + std::to_string(fields.size()), line_no);

        std::size_t tick = 0;
        double a = 0.0;
        double b = 0.0;
        if (!parse_number(fields[0], tick)) throw ParseError("malformed tick", line_no);
        if (!parse_number(fields[1], a)) throw ParseError("malformed price_a", line_no);
        if (!parse_number(fields[2], b)) throw ParseError("malformed price_b", line_no);
        if (tick != series.price_a.size())
            throw ParseError("expected tick " + std::to_string(series.price_a.size()) + ", found " + std::to_string(tick),
                             line_no);
        if (!(a > 0.0) || !std::isfinite(a)) throw ParseError("price_a must be positive", line_no);
        if (!(b > 0.0) || !std::isfinite(b)) throw ParseError("price_b must be positive", line_no);
        series.price_a.push_back(a);
        series.price_b.push_back(b);
    }
    if (series.price_a.size() < 2) throw ParseError("a price series needs at least two ticks", line_no);
    return series;
}

PriceSeries load_price_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open price file " + path.string());
    return parse_price_csv(in, path.stem().string());
}

Portfolio Portfolio::with_capital(double capital, long long qty_each, double price_a, double price_b) {
    if (qty_each < 0) throw ContractViolation("holdings cannot be negative");
    Portfolio p{qty_each, qty_each, 0.0};
    p.cash = capital - p.market_value(price_a, price_b);
    if (p.cash < 0.0) throw ContractViolation("initial holdings exceed the initial capital");
    return p;
}

std::string_view to_string(StrategyKind k) {
    switch (k) {
        case StrategyKind::BuyAndHold: return "BuyAndHold";
        case StrategyKind::Honest: return "Honest";
        case StrategyKind::Spoofing: return "Spoofing";
    }
    return "?";
}

void StrategySpec::validate(std::size_t last_tick) const {
    if (kind == StrategyKind::BuyAndHold && !trade_ticks.empty())
        throw ContractViolation("buy-and-hold has no trade schedule");
    for (std::size_t t : trade_ticks)
        if (t > last_tick) throw ContractViolation("trade tick " + std::to_string(t) + " is past the last tick");
    for (std::size_t t : manipulative_ticks)
        if (!contains(trade_ticks, t)) throw ContractViolation("manipulative tick " + std::to_string(t) + " is not a trade tick");
    if (trade_size < 0) throw ContractViolation("trade size cannot be negative");
    if (!(fee_rate >= 0.0)) throw ContractViolation("fee rate cannot be negative");
    if (!(impact_bps >= 0.0) || impact_bps >= 10000.0) throw ContractViolation("impact must lie in [0, 10000) bps");
}

StrategySpec StrategySpec::buy_and_hold() {
    StrategySpec s;
    s.kind = StrategyKind::BuyAndHold;
    return s;
}

StrategySpec StrategySpec::honest() {
    StrategySpec s;
    s.kind = StrategyKind::Honest;
    s.trade_ticks = {23, 46, 69, 92};
    return s;
}

StrategySpec StrategySpec::spoofing() {
    StrategySpec s;
    s.kind = StrategyKind::Spoofing;
    s.trade_ticks = {23, 46, 69, 92};
    s.manipulative_ticks = {46, 92};
    return s;
}

BacktestReport run_strategy(const PriceSeries& series, const StrategySpec& spec, const Portfolio& initial) {
    series.validate();
    spec.validate(series.last_tick());
    if (initial.qty_a < 0 || initial.qty_b < 0) throw ContractViolation("initial holdings cannot be negative");

    BacktestReport report;
    report.strategy = spec.kind;
    report.series = series.name;

    long long qty_a = initial.qty_a;
    long long qty_b = initial.qty_b;
    long double cash = initial.cash;
    auto market_value = [&](std::size_t t) {
        return static_cast<long double>(qty_a) * series.price_a[t] + static_cast<long double>(qty_b) * series.price_b[t];
    };

    // Capital carried forward by P&L alone: mark-to-market moves plus the
    // gap between close and execution price of each fill.
    long double ledger = market_value(0) + cash;
    report.initial_capital = static_cast<double>(ledger);
    long double fees = 0.0L;

    for (std::size_t t = 0; t <= series.last_tick(); ++t) {
        if (t > 0)
            ledger += static_cast<long double>(qty_a) * (series.price_a[t] - series.price_a[t - 1]) +
                      static_cast<long double>(qty_b) * (series.price_b[t] - series.price_b[t - 1]);

        if (contains(spec.trade_ticks, t)) {
            const bool manip = spec.kind == StrategyKind::Spoofing && contains(spec.manipulative_ticks, t);
            const double factor = manip ? 1.0 - spec.impact_bps / 10000.0 : 1.0;
            for (char asset : {'A', 'B'}) {
                const double close = asset == 'A' ? series.price_a[t] : series.price_b[t];
                TradeRecord rec{t, asset, spec.trade_size, close * factor, 0.0, manip, true, {}};
                const long double cost = static_cast<long double>(rec.quantity) * rec.price;
                if (cost > cash) {
                    rec.filled = false;
                    rec.note = "insufficient cash";
                } else {
                    cash -= cost;
                    (asset == 'A' ? qty_a : qty_b) += rec.quantity;
                    rec.fee = spec.fee_rate * static_cast<double>(cost);
                    fees += rec.fee;
                    ledger += static_cast<long double>(rec.quantity) * (close - rec.price);
                }
                report.trade_log.push_back(std::move(rec));
            }
        }

        const long double capital = market_value(t) + cash;
        report.max_accounting_error =
            std::max(report.max_accounting_error, static_cast<double>(std::abs(capital - ledger)));
        report.capital_curve.push_back(static_cast<double>(capital));
    }

    report.final_capital = report.capital_curve.back();
    report.growth = report.final_capital - report.initial_capital;
    report.total_fees = static_cast<double>(fees);
    report.net_profit = report.growth - report.total_fees;
    report.profit_pct = 100.0 * report.net_profit / report.initial_capital;
    report.final_portfolio = Portfolio{qty_a, qty_b, static_cast<double>(cash)};
    return report;
}

std::vector<StrategySummary> summarize_runs(const std::vector<BacktestReport>& reports) {
    if (reports.empty()) throw ContractViolation("no backtest reports to summarise");
    std::map<StrategyKind, std::vector<double>> by_kind;
    for (const auto& r : reports) by_kind[r.strategy].push_back(r.profit_pct);

    std::vector<StrategySummary> out;
    for (StrategyKind k : {StrategyKind::BuyAndHold, StrategyKind::Honest, StrategyKind::Spoofing}) {
        const auto it = by_kind.find(k);
        if (it == by_kind.end()) continue;
        const auto& v = it->second;
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= static_cast<double>(v.size());
        double var = 0.0;
        for (double x : v) var += (x - mean) * (x - mean);
        var /= static_cast<double>(v.size());
        out.push_back({k, v.size(), mean, std::sqrt(var)});
    }
    return out;
}

std::string report_to_json(const BacktestReport& r, int indent) {
    nlohmann::ordered_json doc;
    doc["strategy"] = std::string(to_string(r.strategy));
    doc["series"] = r.series;
    doc["initial_capital"] = r.initial_capital;
    doc["final_capital"] = r.final_capital;
    doc["growth"] = r.growth;
    doc["total_fees"] = r.total_fees;
    doc["net_profit"] = r.net_profit;
    doc["profit_pct"] = r.profit_pct;
    doc["max_accounting_error"] = r.max_accounting_error;
    doc["capital_curve"] = r.capital_curve;
    auto& log = doc["trade_log"] = nlohmann::ordered_json::array();
    for (const auto& t : r.trade_log) {
        nlohmann::ordered_json e;
        e["tick"] = t.tick;
        e["asset"] = std::string(1, t.asset);
        e["quantity"] = t.quantity;
        e["price"] = t.price;
        e["fee"] = t.fee;
        e["manipulative"] = t.manipulative;
        e["filled"] = t.filled;
        if (!t.note.empty()) e["note"] = t.note;
        log.push_back(std::move(e));
    }
    return doc.dump(indent);
}

std::string reports_to_csv(const std::vector<BacktestReport>& reports) {
    std::ostringstream os;
    os << "strategy,series,growth,total_fees,net_profit,profit_pct\n";
    for (const auto& r : reports) {
        os << to_string(r.strategy) << ',' << r.series << ',' << format_money(r.growth) << ','
           << format_money(r.total_fees) << ',' << format_money(r.net_profit) << ',' << std::setprecision(10)
           << r.profit_pct << '\n';
    }
    return os.str();
}

}  // namespace spoofgrid
