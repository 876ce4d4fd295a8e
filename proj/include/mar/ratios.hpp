#pragma once

#include <cstddef>
#include <span>

namespace mar {

// Per-window summary statistics of a return series.
struct ReturnStats {
    double mean = 0.0;          // arithmetic mean per period
    double std = 0.0;           // sample (n-1) standard deviation
    double downside_dev = 0.0;  // RMS shortfall below the threshold, full-count denominator
    std::size_t count = 0;
};

// Parameters of the regime coefficient and the adaptive ratio.
struct RatioConfig {
    double alpha = 5.0;        // steepness of the regime sigmoid
    double risk_free = 0.0;    // per-period risk-free rate
    int regime_lookback = 21;  // trading days forming the regime return
};

struct BenchmarkStats {
    double beta = 0.0;
    double benchmark_return = 0.0;
    double tracking_error = 0.0;
};

ReturnStats compute_stats(std::span<const double> returns, double downside_threshold);

double sharpe(double mu, double risk_free, double sigma);
double treynor(double mu, double risk_free, double beta);
double sortino(double mu, double risk_free, double downside_dev);

// OLS slope of portfolio on benchmark returns.
double beta(std::span<const double> portfolio_returns, std::span<const double> benchmark_returns);

// Mean active return over the sample std of active returns.
double information_ratio(std::span<const double> portfolio_returns,
                         std::span<const double> benchmark_returns);

BenchmarkStats benchmark_stats(std::span<const double> portfolio_returns,
                               std::span<const double> benchmark_returns);

// Regime coefficient in (0, 2): 2 / (1 + exp(-alpha * regime_return)).
double rho(double regime_return, double alpha);

// Regime-weighted risk-adjusted return:
//   sgn(mu - rf) * |mu - rf|^rho / sigma^(1/rho).
// Reduces exactly to the Sharpe ratio at rho == 1.
double market_adaptive_ratio(double mu, double risk_free, double sigma, double rho);

// Trailing compounded return over the last `lookback` periods.
double regime_return(std::span<const double> returns, int lookback);

}  // namespace mar
