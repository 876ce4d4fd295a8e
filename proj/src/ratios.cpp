#include "mar/ratios.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "mar/errors.hpp"

namespace mar {

namespace {

void require_finite(std::span<const double> xs, const char* what) {
    for (double x : xs)
        if (!std::isfinite(x)) throw InvalidInputError(std::string("non-finite value in ") + what);
}

}  // namespace

ReturnStats compute_stats(std::span<const double> returns, double downside_threshold) {
    if (returns.size() < 2) throw InsufficientDataError("compute_stats: need at least 2 observations");
    require_finite(returns, "returns");
    if (!std::isfinite(downside_threshold))
        throw InvalidInputError("compute_stats: non-finite downside threshold");

    const double n = static_cast<double>(returns.size());
    double sum = 0.0;
    for (double r : returns) sum += r;
    const double mean = sum / n;

    const bool constant =
        std::all_of(returns.begin(), returns.end(), [&](double r) { return r == returns[0]; });

    double ss = 0.0;
    double shortfall_ss = 0.0;
    for (double r : returns) {
        const double d = r - mean;
        ss += d * d;
        const double s = std::min(r - downside_threshold, 0.0);
        shortfall_ss += s * s;
    }

    ReturnStats stats;
    stats.mean = mean;
    stats.std = constant ? 0.0 : std::sqrt(ss / (n - 1.0));
    stats.downside_dev = std::sqrt(shortfall_ss / n);
    stats.count = returns.size();
    return stats;
}

double sharpe(double mu, double risk_free, double sigma) {
    if (!(sigma > 0.0)) throw DegenerateRiskError("sharpe: sigma must be positive");
    return (mu - risk_free) / sigma;
}

double treynor(double mu, double risk_free, double beta) {
    if (beta == 0.0) throw DegenerateBetaError("treynor: beta is zero");
    return (mu - risk_free) / beta;
}

double sortino(double mu, double risk_free, double downside_dev) {
    if (!(downside_dev > 0.0))
        throw DegenerateDownsideError("sortino: downside deviation is zero, ratio undefined");
    return (mu - risk_free) / downside_dev;
}

double beta(std::span<const double> portfolio_returns, std::span<const double> benchmark_returns) {
    if (portfolio_returns.size() != benchmark_returns.size())
        throw InvalidInputError("beta: series length mismatch");
    if (portfolio_returns.size() < 2) throw InsufficientDataError("beta: need at least 2 observations");
    require_finite(portfolio_returns, "portfolio returns");
    require_finite(benchmark_returns, "benchmark returns");

    const double n = static_cast<double>(portfolio_returns.size());
    double mp = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < portfolio_returns.size(); ++i) {
        mp += portfolio_returns[i];
        mb += benchmark_returns[i];
    }
    mp /= n;
    mb /= n;

    double cov = 0.0, var_b = 0.0;
    for (std::size_t i = 0; i < portfolio_returns.size(); ++i) {
        cov += (portfolio_returns[i] - mp) * (benchmark_returns[i] - mb);
        var_b += (benchmark_returns[i] - mb) * (benchmark_returns[i] - mb);
    }
    if (var_b == 0.0) throw DegenerateBenchmarkError("beta: benchmark has zero variance");
    return cov / var_b;
}

BenchmarkStats benchmark_stats(std::span<const double> portfolio_returns,
                               std::span<const double> benchmark_returns) {
    BenchmarkStats out;
    out.beta = beta(portfolio_returns, benchmark_returns);

    const double n = static_cast<double>(benchmark_returns.size());
    double mb = 0.0;
    for (double r : benchmark_returns) mb += r;
    out.benchmark_return = mb / n;

    double ma = 0.0;
    for (std::size_t i = 0; i < portfolio_returns.size(); ++i)
        ma += portfolio_returns[i] - benchmark_returns[i];
    ma /= n;
    double ss = 0.0;
    for (std::size_t i = 0; i < portfolio_returns.size(); ++i) {
        const double d = (portfolio_returns[i] - benchmark_returns[i]) - ma;
        ss += d * d;
    }
    out.tracking_error = std::sqrt(ss / (n - 1.0));
    return out;
}

double information_ratio(std::span<const double> portfolio_returns,
                         std::span<const double> benchmark_returns) {
    if (portfolio_returns.size() != benchmark_returns.size())
        throw InvalidInputError("information_ratio: series length mismatch");
    if (portfolio_returns.size() < 2)
        throw InsufficientDataError("information_ratio: need at least 2 observations");

    std::vector<double> active(portfolio_returns.size());
    for (std::size_t i = 0; i < portfolio_returns.size(); ++i)
        active[i] = portfolio_returns[i] - benchmark_returns[i];

    const ReturnStats stats = compute_stats(active, 0.0);
    if (stats.std == 0.0)
        throw DegenerateTrackingError("information_ratio: zero tracking error");
    return stats.mean / stats.std;
}

double rho(double regime_return, double alpha) {
    if (!(alpha > 0.0)) throw InvalidInputError("rho: alpha must be positive");
    if (!std::isfinite(regime_return)) throw InvalidInputError("rho: non-finite regime return");
    return 2.0 / (1.0 + std::exp(-alpha * regime_return));
}

double market_adaptive_ratio(double mu, double risk_free, double sigma, double rho) {
    if (!(sigma > 0.0)) throw DegenerateRiskError("market_adaptive_ratio: sigma must be positive");
    if (!(rho > 0.0) || !(rho < 2.0))
        throw InvalidRegimeError("market_adaptive_ratio: rho outside (0, 2)");

    const double excess = mu - risk_free;
    // rho == 1 is the Sharpe ratio; evaluate it the same way sharpe() does
    // so the two code paths agree bit for bit.
    if (rho == 1.0) return excess / sigma;
    if (excess == 0.0) return 0.0;
    const double sign = excess > 0.0 ? 1.0 : -1.0;
    return sign * std::pow(std::abs(excess), rho) / std::pow(sigma, 1.0 / rho);
}

double regime_return(std::span<const double> returns, int lookback) {
    if (lookback < 1) throw InvalidInputError("regime_return: lookback must be positive");
    if (returns.size() < static_cast<std::size_t>(lookback))
        throw InsufficientDataError("regime_return: fewer observations than lookback");
    require_finite(returns, "returns");

    double growth = 1.0;
    for (std::size_t i = returns.size() - lookback; i < returns.size(); ++i)
        growth *= 1.0 + returns[i];
    return growth - 1.0;
}

}  // namespace mar
