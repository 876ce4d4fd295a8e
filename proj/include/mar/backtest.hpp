#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "mar/data.hpp"
#include "mar/rrl.hpp"

namespace mar {

enum class StrategyKind { EqualWeight, Tangency, RiskBudgeting, RrlSharpe, RrlMarketAdaptive };

std::string strategy_kind_name(StrategyKind kind);

struct StrategySpec {
    StrategyKind kind = StrategyKind::EqualWeight;
    std::string name;            // defaults to the kind name
    TrainConfig train;           // RRL strategies
    Eigen::VectorXd budgets;     // risk budgeting; empty = equal budgets
    double cost_rate = 0.0;      // turnover cost charged at rebalance
};

struct BacktestConfig {
    Date pretrain_start;
    Date pretrain_end;
    Date test_start;
    Date test_end;
    int retrain_months = 12;
    int rebalance_months = 1;
    double annualization_factor = 252.0;
    double risk_free = 0.0;  // annualized
    std::vector<StrategySpec> strategies;
};

struct Segment {
    Date train_start;
    Date train_end;
    Date test_start;
    Date test_end;
};

// Expanding train windows, one per retrain period; test segments tile the
// test range with no gaps or overlaps.
std::vector<Segment> rolling_schedule(const std::vector<Date>& calendar,
                                      const BacktestConfig& config);

// First trading date of each period (blocks of `period_months` calendar
// months anchored at the range start) within [start, end].
std::vector<Date> rebalance_dates(const std::vector<Date>& calendar, int period_months,
                                  const Date& start, const Date& end);

struct Metrics {
    double profit = 0.0;  // annualized mean return
    double risk = 0.0;    // annualized standard deviation
    double sharpe = 0.0;  // (profit - annual risk-free) / risk
};

Metrics compute_metrics(std::span<const double> portfolio_returns, double risk_free_annual,
                        double annualization_factor);

struct WeightSnapshot {
    Date date;
    Eigen::VectorXd weights;
};

struct StrategyResult {
    std::string name;
    Metrics metrics;
    double total_return = 0.0;        // whole-period cumulative return
    double whole_period_std = 0.0;    // per-period std, unannualized
    std::vector<double> returns;      // per-period test returns
    std::vector<double> equity;       // starts at 1.0
    std::vector<WeightSnapshot> weights;  // at each rebalance date
};

struct BacktestReport {
    std::vector<Segment> schedule;
    std::vector<Date> equity_dates;  // test-period trading dates
    std::vector<StrategyResult> strategies;
    double annualization_factor = 252.0;
    double risk_free = 0.0;
};

BacktestReport run(const BacktestConfig& config, const PriceTable& prices);

}  // namespace mar
