#pragma once

#include <Eigen/Dense>

#include "mar/data.hpp"

namespace mar {

using WeightVector = Eigen::VectorXd;

// Sample means and covariance over a trailing window of a return table.
struct MomentEstimate {
    Eigen::VectorXd mean;
    Eigen::MatrixXd covariance;
    int window = 0;
};

// True when weights sum to 1 within 1e-10 and are all non-negative.
bool is_valid_weights(const WeightVector& w);

MomentEstimate estimate_moments(const ReturnTable& returns, int window);

MomentEstimate estimate_moments(const Eigen::MatrixXd& returns, int window);

WeightVector equal_weight(int n_assets);

// Long-only maximum-Sharpe portfolio. Uses the closed-form solution
// w ∝ Σ⁻¹(μ - rf·1) when it is already non-negative, otherwise searches
// asset subsets for the best feasible restricted solution.
WeightVector tangency(const MomentEstimate& moments, double risk_free);

// RC_i = w_i (Σw)_i / sqrt(w'Σw); entries sum to the portfolio volatility.
Eigen::VectorXd risk_contributions(const Eigen::MatrixXd& covariance, const WeightVector& weights);

// Long-only weights whose normalized risk contributions match the budgets,
// solved by cyclical coordinate descent.
WeightVector risk_budgeting(const Eigen::MatrixXd& covariance, const Eigen::VectorXd& budgets);

}  // namespace mar
