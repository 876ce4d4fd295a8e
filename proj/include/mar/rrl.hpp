#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "mar/allocators.hpp"
#include "mar/ratios.hpp"

namespace mar {

enum class RewardKind { Sharpe, MarketAdaptive };

// Single-layer recurrent scorer: per-asset score from lagged returns,
// the previous allocation, and a bias; softmax keeps the output on the
// simplex (long-only, fully invested).
struct PolicyParams {
    Eigen::MatrixXd feature_weights;     // n_assets x feature_lags
    Eigen::VectorXd recurrence_weights;  // n_assets
    Eigen::VectorXd bias;                // n_assets

    int n_assets() const { return static_cast<int>(bias.size()); }
    int feature_lags() const { return static_cast<int>(feature_weights.cols()); }
};

struct TrainConfig {
    double learning_rate = 0.05;
    int epochs = 500;
    int feature_lags = 21;
    RewardKind reward_kind = RewardKind::Sharpe;
    RatioConfig ratio;      // alpha / risk-free / regime lookback
    double cost_rate = 0.0;  // proportional turnover cost
    std::uint64_t seed = 0;
    // When set, the regime return is held at this value instead of being
    // measured from the realized path. Pinning it to 0 makes the adaptive
    // reward coincide with the Sharpe reward exactly.
    std::optional<double> pin_regime_return;
};

struct EpisodeResult {
    std::vector<WeightVector> weight_path;
    std::vector<double> portfolio_returns;
    double reward = 0.0;
    double rho = 1.0;  // regime coefficient used by the reward
};

struct PolicyGradient {
    Eigen::MatrixXd feature_weights;
    Eigen::VectorXd recurrence_weights;
    Eigen::VectorXd bias;
};

struct TrainResult {
    PolicyParams params;  // best parameters seen during ascent
    std::vector<double> reward_trace;
};

// Uniform(-0.1, 0.1) initialization, deterministic per seed.
PolicyParams init_params(int n_assets, int feature_lags, std::uint64_t seed);

void validate_params(const PolicyParams& params);

// softmax(feature score + recurrence * prev weight + bias), one score per
// asset. `features` row i holds asset i's lagged returns, oldest first.
WeightVector forward(const PolicyParams& params, const Eigen::MatrixXd& features,
                     const WeightVector& prev_weights);

// Runs the policy through the window. The weight applied to return row t
// is decided from rows before t; the first decision starts from equal
// weights.
EpisodeResult episode(const PolicyParams& params, const Eigen::MatrixXd& returns_window,
                      const TrainConfig& config);

// Exact reward gradient via backpropagation through the unrolled
// recurrence. The regime coefficient is treated as a constant of the
// window (it labels the regime; it is not a decision variable).
PolicyGradient gradient(const PolicyParams& params, const Eigen::MatrixXd& returns_window,
                        const TrainConfig& config);

// Episode reward for a fixed regime coefficient; the finite-difference
// counterpart of gradient().
double episode_reward_fixed_rho(const PolicyParams& params, const Eigen::MatrixXd& returns_window,
                                const TrainConfig& config, double fixed_rho);

// Full-batch gradient ascent; returns the best-reward parameters.
TrainResult train(const PolicyParams& initial, const Eigen::MatrixXd& returns_window,
                  const TrainConfig& config);

}  // namespace mar
