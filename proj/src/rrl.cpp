#include "mar/rrl.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "mar/errors.hpp"

namespace mar {

namespace {

void validate_config(const TrainConfig& config) {
    if (!(config.learning_rate > 0.0)) throw InvalidInputError("rrl: learning_rate must be positive");
    if (config.epochs < 1) throw InvalidInputError("rrl: epochs must be >= 1");
    if (config.feature_lags < 1) throw InvalidInputError("rrl: feature_lags must be >= 1");
    if (config.cost_rate < 0.0) throw InvalidInputError("rrl: cost_rate must be non-negative");
    if (!(config.ratio.alpha > 0.0)) throw InvalidInputError("rrl: alpha must be positive");
    if (config.ratio.regime_lookback < 1)
        throw InvalidInputError("rrl: regime_lookback must be >= 1");
}

Eigen::VectorXd softmax(const Eigen::VectorXd& scores) {
    const Eigen::VectorXd shifted = scores.array() - scores.maxCoeff();
    Eigen::VectorXd e = shifted.array().exp();
    return e / e.sum();
}

struct Path {
    std::vector<Eigen::VectorXd> prev;     // allocation held before each decision
    std::vector<Eigen::VectorXd> weights;  // decided allocation per step
    std::vector<double> rp;                // realized portfolio return per step
};

// Step s decides from return rows [s, s+L) and applies to row s+L.
Path run_path(const PolicyParams& params, const Eigen::MatrixXd& returns,
              const TrainConfig& config) {
    const int lags = config.feature_lags;
    const Eigen::Index n = params.bias.size();
    if (returns.cols() != n) throw InvalidInputError("rrl: asset count mismatch");
    const Eigen::Index steps = returns.rows() - lags;
    if (steps < 2)
        throw InsufficientDataError("rrl: window length must exceed feature_lags + 1");

    Path path;
    path.prev.reserve(static_cast<std::size_t>(steps));
    path.weights.reserve(static_cast<std::size_t>(steps));
    path.rp.reserve(static_cast<std::size_t>(steps));

    Eigen::VectorXd held = equal_weight(static_cast<int>(n));
    for (Eigen::Index s = 0; s < steps; ++s) {
        const Eigen::Index t = s + lags;
        Eigen::VectorXd scores = params.bias + params.recurrence_weights.cwiseProduct(held);
        for (Eigen::Index i = 0; i < n; ++i)
            scores(i) += params.feature_weights.row(i).dot(
                returns.col(i).segment(t - lags, lags).transpose());
        const Eigen::VectorXd w = softmax(scores);

        double r = w.dot(returns.row(t).transpose());
        if (config.cost_rate > 0.0) r -= config.cost_rate * (w - held).lpNorm<1>();

        path.prev.push_back(held);
        path.weights.push_back(w);
        path.rp.push_back(r);
        held = w;
    }
    return path;
}

double resolve_rho(const std::vector<double>& rp, const TrainConfig& config) {
    if (config.reward_kind == RewardKind::Sharpe) return 1.0;
    const double regime = config.pin_regime_return
                              ? *config.pin_regime_return
                              : regime_return(rp, config.ratio.regime_lookback);
    return rho(regime, config.ratio.alpha);
}

// Reward over the realized path and its derivative w.r.t. each return.
// The regime coefficient is a fixed label of the window, not a function
// of the parameters, so it carries no derivative.
struct RewardGrad {
    double reward;
    Eigen::VectorXd d_rp;
};

RewardGrad reward_and_grad(const std::vector<double>& rp, const TrainConfig& config,
                           double fixed_rho, bool want_grad) {
    const ReturnStats stats = compute_stats(rp, config.ratio.risk_free);
    if (!(stats.std > 0.0)) throw DegenerateRiskError("rrl: zero-variance portfolio returns");

    const double n = static_cast<double>(stats.count);
    const double mu = stats.mean;
    const double sigma = stats.std;
    const double rf = config.ratio.risk_free;
    const double excess = mu - rf;

    RewardGrad out;
    double d_mu;     // d reward / d mean
    double d_sigma;  // d reward / d std
    if (config.reward_kind == RewardKind::Sharpe || fixed_rho == 1.0) {
        out.reward = excess / sigma;
        d_mu = 1.0 / sigma;
        d_sigma = -excess / (sigma * sigma);
    } else {
        out.reward = market_adaptive_ratio(mu, rf, sigma, fixed_rho);
        const double sign = excess >= 0.0 ? 1.0 : -1.0;
        const double sigma_pow = std::pow(sigma, -1.0 / fixed_rho);
        d_mu = fixed_rho * std::pow(std::abs(excess), fixed_rho - 1.0) * sigma_pow;
        d_sigma = -(1.0 / fixed_rho) * sign * std::pow(std::abs(excess), fixed_rho) *
                  std::pow(sigma, -1.0 / fixed_rho - 1.0);
    }
    if (!std::isfinite(out.reward)) throw NumericalFailureError("rrl: non-finite reward");

    if (want_grad) {
        out.d_rp.resize(static_cast<Eigen::Index>(rp.size()));
        for (std::size_t s = 0; s < rp.size(); ++s) {
            const double d_sigma_d_r = (rp[s] - mu) / ((n - 1.0) * sigma);
            out.d_rp(static_cast<Eigen::Index>(s)) = d_mu / n + d_sigma * d_sigma_d_r;
        }
        if (!out.d_rp.allFinite()) throw NumericalFailureError("rrl: non-finite reward gradient");
    }
    return out;
}

}  // namespace

PolicyParams init_params(int n_assets, int feature_lags, std::uint64_t seed) {
    if (n_assets < 1 || feature_lags < 1) throw InvalidInputError("init_params: bad dimensions");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-0.1, 0.1);

    PolicyParams p;
    p.feature_weights.resize(n_assets, feature_lags);
    for (int i = 0; i < n_assets; ++i)
        for (int k = 0; k < feature_lags; ++k) p.feature_weights(i, k) = uni(rng);
    p.recurrence_weights.resize(n_assets);
    for (int i = 0; i < n_assets; ++i) p.recurrence_weights(i) = uni(rng);
    p.bias.resize(n_assets);
    for (int i = 0; i < n_assets; ++i) p.bias(i) = uni(rng);
    return p;
}

void validate_params(const PolicyParams& params) {
    const Eigen::Index n = params.bias.size();
    if (n < 1 || params.recurrence_weights.size() != n || params.feature_weights.rows() != n ||
        params.feature_weights.cols() < 1)
        throw InvalidInputError("rrl: inconsistent parameter dimensions");
    if (!params.feature_weights.allFinite() || !params.recurrence_weights.allFinite() ||
        !params.bias.allFinite())
        throw InvalidInputError("rrl: non-finite parameters");
}

WeightVector forward(const PolicyParams& params, const Eigen::MatrixXd& features,
                     const WeightVector& prev_weights) {
    validate_params(params);
    const Eigen::Index n = params.bias.size();
    if (features.rows() != n || features.cols() != params.feature_weights.cols())
        throw InvalidInputError("forward: feature dimensions do not match parameters");
    if (prev_weights.size() != n) throw InvalidInputError("forward: prev_weights size mismatch");

    Eigen::VectorXd scores = params.bias + params.recurrence_weights.cwiseProduct(prev_weights);
    for (Eigen::Index i = 0; i < n; ++i) scores(i) += params.feature_weights.row(i).dot(features.row(i));
    return softmax(scores);
}

EpisodeResult episode(const PolicyParams& params, const Eigen::MatrixXd& returns_window,
                      const TrainConfig& config) {
    validate_params(params);
    validate_config(config);

    const Path path = run_path(params, returns_window, config);
    EpisodeResult result;
    result.weight_path = path.weights;
    result.portfolio_returns = path.rp;
    result.rho = resolve_rho(path.rp, config);
    result.reward = reward_and_grad(path.rp, config, result.rho, false).reward;
    return result;
}

double episode_reward_fixed_rho(const PolicyParams& params, const Eigen::MatrixXd& returns_window,
                                const TrainConfig& config, double fixed_rho) {
    validate_params(params);
    validate_config(config);
    const Path path = run_path(params, returns_window, config);
    return reward_and_grad(path.rp, config, fixed_rho, false).reward;
}

namespace {

PolicyGradient backprop(const PolicyParams& params, const Eigen::MatrixXd& returns,
                        const TrainConfig& config, const Path& path, double* reward_out) {
    const int lags = config.feature_lags;
    const Eigen::Index n = params.bias.size();
    const Eigen::Index steps = static_cast<Eigen::Index>(path.rp.size());

    const double rho_used = resolve_rho(path.rp, config);
    const RewardGrad rg = reward_and_grad(path.rp, config, rho_used, true);
    if (reward_out) *reward_out = rg.reward;

    PolicyGradient grad;
    grad.feature_weights = Eigen::MatrixXd::Zero(n, params.feature_weights.cols());
    grad.recurrence_weights = Eigen::VectorXd::Zero(n);
    grad.bias = Eigen::VectorXd::Zero(n);

    // delta_next = d reward / d scores at step s+1; feeds step s through
    // the recurrence on the held allocation.
    Eigen::VectorXd delta_next = Eigen::VectorXd::Zero(n);
    for (Eigen::Index s = steps - 1; s >= 0; --s) {
        const Eigen::Index t = s + lags;
        const Eigen::VectorXd& w = path.weights[static_cast<std::size_t>(s)];
        const Eigen::VectorXd& held = path.prev[static_cast<std::size_t>(s)];
        const double g = rg.d_rp(s);

        // d reward / d w_s: the day's return, turnover cost at s and s+1,
        // and the recurrence into the next decision.
        Eigen::VectorXd lambda = g * returns.row(t).transpose();
        if (config.cost_rate > 0.0) {
            lambda -= g * config.cost_rate * (w - held).cwiseSign();
            if (s + 1 < steps) {
                const Eigen::VectorXd& w_next = path.weights[static_cast<std::size_t>(s + 1)];
                lambda += rg.d_rp(s + 1) * config.cost_rate * (w_next - w).cwiseSign();
            }
        }
        lambda += params.recurrence_weights.cwiseProduct(delta_next);

        // Softmax Jacobian: delta = w .* (lambda - lambda . w).
        const Eigen::VectorXd shifted = lambda.array() - lambda.dot(w);
        const Eigen::VectorXd delta = w.cwiseProduct(shifted);

        for (Eigen::Index i = 0; i < n; ++i)
            grad.feature_weights.row(i) +=
                delta(i) * returns.col(i).segment(t - lags, lags).transpose();
        grad.recurrence_weights += delta.cwiseProduct(held);
        grad.bias += delta;

        delta_next = delta;
    }

    if (!grad.feature_weights.allFinite() || !grad.recurrence_weights.allFinite() ||
        !grad.bias.allFinite())
        throw NumericalFailureError("rrl: non-finite gradient");
    return grad;
}

}  // namespace

PolicyGradient gradient(const PolicyParams& params, const Eigen::MatrixXd& returns_window,
                        const TrainConfig& config) {
    validate_params(params);
    validate_config(config);
    const Path path = run_path(params, returns_window, config);
    return backprop(params, returns_window, config, path, nullptr);
}

TrainResult train(const PolicyParams& initial, const Eigen::MatrixXd& returns_window,
                  const TrainConfig& config) {
    validate_params(initial);
    validate_config(config);

    PolicyParams params = initial;
    PolicyParams best = initial;
    double best_reward = -std::numeric_limits<double>::infinity();
    TrainResult result;
    result.reward_trace.reserve(static_cast<std::size_t>(config.epochs) + 1);

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        double reward = 0.0;
        PolicyGradient grad;
        try {
            const Path path = run_path(params, returns_window, config);
            grad = backprop(params, returns_window, config, path, &reward);
        } catch (const NumericError& e) {
            throw NumericalFailureError("rrl train: epoch " + std::to_string(epoch) + ": " +
                                        e.what());
        }
        result.reward_trace.push_back(reward);
        if (reward > best_reward) {
            best_reward = reward;
            best = params;
        }
        params.feature_weights += config.learning_rate * grad.feature_weights;
        params.recurrence_weights += config.learning_rate * grad.recurrence_weights;
        params.bias += config.learning_rate * grad.bias;
    }

    // Score the post-update parameters as well.
    try {
        const Path path = run_path(params, returns_window, config);
        const double reward = reward_and_grad(path.rp, config, resolve_rho(path.rp, config), false).reward;
        result.reward_trace.push_back(reward);
        if (reward > best_reward) best = params;
    } catch (const NumericError& e) {
        throw NumericalFailureError(std::string("rrl train: final evaluation: ") + e.what());
    }

    result.params = best;
    return result;
}

}  // namespace mar
