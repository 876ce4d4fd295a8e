#include "mar/backtest.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mar/allocators.hpp"
#include "mar/errors.hpp"
#include "mar/ratios.hpp"

namespace mar {

std::string strategy_kind_name(StrategyKind kind) {
    switch (kind) {
        case StrategyKind::EqualWeight: return "equal_weight";
        case StrategyKind::Tangency: return "tangency";
        case StrategyKind::RiskBudgeting: return "risk_budgeting";
        case StrategyKind::RrlSharpe: return "rrl_sharpe";
        case StrategyKind::RrlMarketAdaptive: return "rrl_market_adaptive";
    }
    throw InvalidInputError("unknown strategy kind");
}

namespace {

void validate_config(const BacktestConfig& config) {
    if (!(config.pretrain_start <= config.pretrain_end))
        throw ConfigError("backtest: pretrain range is empty");
    if (!(config.pretrain_end < config.test_start))
        throw ConfigError("backtest: pretrain end must precede test start");
    if (!(config.test_start <= config.test_end)) throw ConfigError("backtest: test range is empty");
    if (config.retrain_months < 1) throw ConfigError("backtest: retrain period must be >= 1 month");
    if (config.rebalance_months < 1)
        throw ConfigError("backtest: rebalance period must be >= 1 month");
    if (!(config.annualization_factor > 0.0))
        throw ConfigError("backtest: annualization factor must be positive");
}

void check_sorted(const std::vector<Date>& calendar) {
    if (calendar.empty()) throw InvalidCalendarError("calendar is empty");
    for (std::size_t i = 1; i < calendar.size(); ++i)
        if (!(calendar[i - 1] < calendar[i]))
            throw InvalidCalendarError("calendar not strictly increasing at index " +
                                       std::to_string(i));
}

int month_index(const Date& d) { return d.year * 12 + d.month - 1; }

}  // namespace

std::vector<Segment> rolling_schedule(const std::vector<Date>& calendar,
                                      const BacktestConfig& config) {
    validate_config(config);
    check_sorted(calendar);

    const bool has_pretrain = std::any_of(calendar.begin(), calendar.end(), [&](const Date& d) {
        return config.pretrain_start <= d && d <= config.pretrain_end;
    });
    if (!has_pretrain) throw InvalidCalendarError("rolling_schedule: pretrain range has no trading dates");

    std::vector<Segment> schedule;
    Date boundary = config.test_start;
    while (boundary <= config.test_end) {
        const Date next = add_months(boundary, config.retrain_months);
        Segment seg;
        seg.train_start = config.pretrain_start;
        // Expanding window: train through the last trading date before the
        // test segment begins.
        seg.train_end = config.pretrain_end;
        seg.test_start = Date{9999, 12, 31};
        seg.test_end = Date{1, 1, 1};
        for (const Date& d : calendar) {
            if (d < boundary) {
                if (d > seg.train_end && boundary != config.test_start) seg.train_end = d;
                continue;
            }
            if (d >= next || d > config.test_end) break;
            if (d < seg.test_start) seg.test_start = d;
            if (d > seg.test_end) seg.test_end = d;
        }
        if (seg.test_end < seg.test_start)
            throw InvalidCalendarError("rolling_schedule: no trading dates in test segment starting " +
                                       to_string(boundary));
        schedule.push_back(seg);
        boundary = next;
    }
    return schedule;
}

std::vector<Date> rebalance_dates(const std::vector<Date>& calendar, int period_months,
                                  const Date& start, const Date& end) {
    if (period_months < 1) throw InvalidInputError("rebalance_dates: period must be >= 1 month");
    if (!(start <= end)) throw InvalidInputError("rebalance_dates: empty range");
    check_sorted(calendar);

    const int anchor = month_index(start);
    std::vector<Date> out;
    int last_block = -1;
    for (const Date& d : calendar) {
        if (d < start || d > end) continue;
        const int block = (month_index(d) - anchor) / period_months;
        if (block != last_block) {
            out.push_back(d);
            last_block = block;
        }
    }
    if (out.empty()) throw InvalidInputError("rebalance_dates: no trading dates in range");
    return out;
}

Metrics compute_metrics(std::span<const double> portfolio_returns, double risk_free_annual,
                        double annualization_factor) {
    const ReturnStats stats = compute_stats(portfolio_returns, 0.0);
    if (!(stats.std > 0.0)) throw DegenerateRiskError("compute_metrics: zero risk");
    Metrics m;
    m.profit = stats.mean * annualization_factor;
    m.risk = stats.std * std::sqrt(annualization_factor);
    m.sharpe = (m.profit - risk_free_annual) / m.risk;
    return m;
}

namespace {

// Per-strategy simulation state carried across segments.
struct StrategyState {
    PolicyParams params;     // RRL only
    bool trained = false;
};

Eigen::VectorXd decide_weights(const StrategySpec& spec, const StrategyState& state,
                               const ReturnTable& rt, Eigen::Index t, double rf_per_period,
                               const Eigen::VectorXd& held) {
    const int n = static_cast<int>(rt.returns.cols());
    switch (spec.kind) {
        case StrategyKind::EqualWeight:
            return equal_weight(n);
        case StrategyKind::Tangency: {
            const auto est = estimate_moments(rt.returns.topRows(t), static_cast<int>(t));
            return tangency(est, rf_per_period);
        }
        case StrategyKind::RiskBudgeting: {
            const auto est = estimate_moments(rt.returns.topRows(t), static_cast<int>(t));
            Eigen::VectorXd budgets = spec.budgets.size() == n
                                          ? spec.budgets
                                          : Eigen::VectorXd::Constant(n, 1.0 / n);
            return risk_budgeting(est.covariance, budgets);
        }
        case StrategyKind::RrlSharpe:
        case StrategyKind::RrlMarketAdaptive: {
            const int lags = spec.train.feature_lags;
            if (t < lags)
                throw InsufficientDataError("backtest: not enough history for RRL features at " +
                                            to_string(rt.dates[static_cast<std::size_t>(t)]));
            Eigen::MatrixXd features(n, lags);
            for (int i = 0; i < n; ++i)
                features.row(i) = rt.returns.col(i).segment(t - lags, lags).transpose();
            return forward(state.params, features, held);
        }
    }
    throw InvalidInputError("unknown strategy kind");
}

}  // namespace

BacktestReport run(const BacktestConfig& config, const PriceTable& prices) {
    validate_config(config);
    validate_price_table(prices);

    if (prices.dates.front() > config.pretrain_start)
        throw InsufficientDataError("backtest: price data for '" + prices.assets.front() +
                                    "' begins " + to_string(prices.dates.front()) +
                                    ", after pretrain start " + to_string(config.pretrain_start));
    if (prices.dates.back() < config.test_end)
        throw InsufficientDataError("backtest: price data for '" + prices.assets.front() +
                                    "' ends " + to_string(prices.dates.back()) +
                                    ", before test end " + to_string(config.test_end));

    const ReturnTable rt = to_returns(prices);
    const int n = static_cast<int>(rt.returns.cols());
    const double rf_per_period = config.risk_free / config.annualization_factor;

    BacktestReport report;
    report.schedule = rolling_schedule(prices.dates, config);
    report.annualization_factor = config.annualization_factor;
    report.risk_free = config.risk_free;

    // Return rows covered by each test segment.
    std::vector<std::vector<Eigen::Index>> segment_rows(report.schedule.size());
    for (std::size_t k = 0; k < report.schedule.size(); ++k) {
        const Segment& seg = report.schedule[k];
        for (std::size_t t = 0; t < rt.dates.size(); ++t)
            if (seg.test_start <= rt.dates[t] && rt.dates[t] <= seg.test_end)
                segment_rows[k].push_back(static_cast<Eigen::Index>(t));
        if (segment_rows[k].empty())
            throw InsufficientDataError("backtest: no return observations in test segment " +
                                        to_string(seg.test_start));
        for (Eigen::Index t : segment_rows[k])
            report.equity_dates.push_back(rt.dates[static_cast<std::size_t>(t)]);
    }

    for (const StrategySpec& spec : config.strategies) {
        StrategyResult result;
        result.name = spec.name.empty() ? strategy_kind_name(spec.kind) : spec.name;

        StrategyState state;
        Eigen::VectorXd held = equal_weight(n);
        double wealth = 1.0;
        result.equity.push_back(1.0);

        for (std::size_t k = 0; k < report.schedule.size(); ++k) {
            const Segment& seg = report.schedule[k];

            if (spec.kind == StrategyKind::RrlSharpe ||
                spec.kind == StrategyKind::RrlMarketAdaptive) {
                std::vector<Eigen::Index> train_rows;
                for (std::size_t t = 0; t < rt.dates.size(); ++t)
                    if (seg.train_start <= rt.dates[t] && rt.dates[t] <= seg.train_end)
                        train_rows.push_back(static_cast<Eigen::Index>(t));
                Eigen::MatrixXd window(train_rows.size(), n);
                for (std::size_t r = 0; r < train_rows.size(); ++r)
                    window.row(static_cast<Eigen::Index>(r)) = rt.returns.row(train_rows[r]);

                TrainConfig tc = spec.train;
                tc.reward_kind = spec.kind == StrategyKind::RrlSharpe ? RewardKind::Sharpe
                                                                      : RewardKind::MarketAdaptive;
                const PolicyParams start = state.trained
                                               ? state.params
                                               : init_params(n, tc.feature_lags, tc.seed);
                state.params = train(start, window, tc).params;
                state.trained = true;
            }

            const std::vector<Date> rebal =
                rebalance_dates(rt.dates, config.rebalance_months, seg.test_start, seg.test_end);
            std::size_t next_rebal = 0;

            for (Eigen::Index t : segment_rows[k]) {
                const Date& date = rt.dates[static_cast<std::size_t>(t)];
                const Eigen::VectorXd day = rt.returns.row(t).transpose();
                double rp;
                if (next_rebal < rebal.size() && date == rebal[next_rebal]) {
                    const Eigen::VectorXd target =
                        decide_weights(spec, state, rt, t, rf_per_period, held);
                    rp = target.dot(day) - spec.cost_rate * (target - held).lpNorm<1>();
                    held = target;
                    result.weights.push_back({date, target});
                    ++next_rebal;
                } else {
                    rp = held.dot(day);
                }
                result.returns.push_back(rp);
                wealth *= 1.0 + rp;
                result.equity.push_back(wealth);

                // Buy-and-hold drift until the next rebalance.
                const double gross = held.dot(day);
                held = held.cwiseProduct((1.0 + day.array()).matrix()) / (1.0 + gross);
            }
        }

        result.metrics = compute_metrics(result.returns, config.risk_free,
                                         config.annualization_factor);
        result.total_return = wealth - 1.0;
        result.whole_period_std = compute_stats(result.returns, 0.0).std;
        report.strategies.push_back(std::move(result));
    }
    return report;
}

}  // namespace mar
