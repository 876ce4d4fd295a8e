#include "mar/allocators.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "mar/errors.hpp"

namespace mar {

namespace {

constexpr double kConditionCap = 1e12;
constexpr double kWeightSumTol = 1e-10;

void check_square(const Eigen::MatrixXd& cov, Eigen::Index n, const char* who) {
    if (cov.rows() != n || cov.cols() != n)
        throw InvalidInputError(std::string(who) + ": covariance dimension mismatch");
    if (!cov.isApprox(cov.transpose(), 1e-12))
        throw InvalidInputError(std::string(who) + ": covariance not symmetric");
}

}  // namespace

bool is_valid_weights(const WeightVector& w) {
    if (w.size() == 0) return false;
    if (std::abs(w.sum() - 1.0) > kWeightSumTol) return false;
    return (w.array() >= 0.0).all();
}

MomentEstimate estimate_moments(const Eigen::MatrixXd& returns, int window) {
    if (window < 2) throw InvalidInputError("estimate_moments: window must be >= 2");
    if (returns.rows() < window)
        throw InsufficientDataError("estimate_moments: " + std::to_string(returns.rows()) +
                                    " rows available, window " + std::to_string(window));

    const Eigen::MatrixXd block = returns.bottomRows(window);
    MomentEstimate est;
    est.window = window;
    est.mean = block.colwise().mean();
    const Eigen::MatrixXd centered = block.rowwise() - est.mean.transpose();
    est.covariance = centered.transpose() * centered / static_cast<double>(window - 1);
    est.covariance = ((est.covariance + est.covariance.transpose()) / 2.0).eval();
    return est;
}

MomentEstimate estimate_moments(const ReturnTable& returns, int window) {
    return estimate_moments(returns.returns, window);
}

WeightVector equal_weight(int n_assets) {
    if (n_assets < 1) throw InvalidInputError("equal_weight: need at least one asset");
    return WeightVector::Constant(n_assets, 1.0 / n_assets);
}

namespace {

double portfolio_sharpe(const WeightVector& w, const MomentEstimate& m, double risk_free) {
    const double var = w.dot(m.covariance * w);
    if (!(var > 0.0)) return -std::numeric_limits<double>::infinity();
    return (w.dot(m.mean) - risk_free) / std::sqrt(var);
}

}  // namespace

WeightVector tangency(const MomentEstimate& moments, double risk_free) {
    const Eigen::Index n = moments.mean.size();
    if (n < 1) throw InvalidInputError("tangency: empty moment estimate");
    check_square(moments.covariance, n, "tangency");

    // Fully symmetric universe: every simplex point is optimal; return 1/n.
    const bool same_mean = (moments.mean.array() == moments.mean(0)).all();
    const bool same_cov = (moments.covariance.array() == moments.covariance(0, 0)).all();
    if (same_mean && same_cov && n > 1) {
        if (!(moments.mean(0) > risk_free)) throw NoTangencyError("tangency: no asset beats the risk-free rate");
        return equal_weight(static_cast<int>(n));
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(moments.covariance);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    if (!(lo > 0.0) || hi / lo > kConditionCap)
        throw SingularMatrixError("tangency: covariance singular or ill-conditioned");

    const Eigen::VectorXd excess = moments.mean.array() - risk_free;
    if (!(excess.maxCoeff() > 0.0))
        throw NoTangencyError("tangency: no asset beats the risk-free rate");

    Eigen::LLT<Eigen::MatrixXd> llt(moments.covariance);
    Eigen::VectorXd w = llt.solve(excess);
    if (w.sum() > 0.0 && (w.array() >= -1e-12).all()) {
        w = w.cwiseMax(0.0);
        return w / w.sum();
    }

    // Unconstrained solution shorts some asset. The long-only optimum sits
    // on a face of the simplex; enumerate asset subsets and keep the best
    // feasible restricted tangency portfolio.
    if (n > 16) throw NumericError("tangency: long-only fallback limited to 16 assets");
    WeightVector best;
    double best_sharpe = -std::numeric_limits<double>::infinity();
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        std::vector<Eigen::Index> idx;
        for (Eigen::Index i = 0; i < n; ++i)
            if (mask & (1u << i)) idx.push_back(i);

        Eigen::VectorXd ex(idx.size());
        Eigen::MatrixXd cov(idx.size(), idx.size());
        for (std::size_t a = 0; a < idx.size(); ++a) {
            ex(static_cast<Eigen::Index>(a)) = excess(idx[a]);
            for (std::size_t b = 0; b < idx.size(); ++b)
                cov(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                    moments.covariance(idx[a], idx[b]);
        }
        Eigen::LLT<Eigen::MatrixXd> sub(cov);
        if (sub.info() != Eigen::Success) continue;
        Eigen::VectorXd ws = sub.solve(ex);
        if (!(ws.sum() > 0.0) || !(ws.array() >= -1e-12).all()) continue;
        ws = ws.cwiseMax(0.0);
        ws /= ws.sum();

        WeightVector full = WeightVector::Zero(n);
        for (std::size_t a = 0; a < idx.size(); ++a) full(idx[a]) = ws(static_cast<Eigen::Index>(a));
        const double s = portfolio_sharpe(full, moments, risk_free);
        if (s > best_sharpe) {
            best_sharpe = s;
            best = full;
        }
    }
    if (best.size() == 0) throw NoTangencyError("tangency: no feasible long-only portfolio found");
    return best;
}

Eigen::VectorXd risk_contributions(const Eigen::MatrixXd& covariance, const WeightVector& weights) {
    check_square(covariance, weights.size(), "risk_contributions");
    const Eigen::VectorXd cov_w = covariance * weights;
    const double var = weights.dot(cov_w);
    if (!(var > 0.0)) throw DegeneratePortfolioError("risk_contributions: zero portfolio variance");
    return weights.cwiseProduct(cov_w) / std::sqrt(var);
}

WeightVector risk_budgeting(const Eigen::MatrixXd& covariance, const Eigen::VectorXd& budgets) {
    const Eigen::Index n = budgets.size();
    check_square(covariance, n, "risk_budgeting");
    if (!(budgets.array() > 0.0).all())
        throw InvalidInputError("risk_budgeting: budgets must be strictly positive");
    if (std::abs(budgets.sum() - 1.0) > 1e-8)
        throw InvalidInputError("risk_budgeting: budgets must sum to 1");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(covariance);
    if (!(eig.eigenvalues().minCoeff() > 0.0))
        throw InvalidCovarianceError("risk_budgeting: covariance not positive definite");

    const Eigen::VectorXd b = budgets / budgets.sum();
    const Eigen::VectorXd vol = covariance.diagonal().cwiseSqrt();

    // Cyclical coordinate descent on x_i (Σx)_i = b_i σ(x); scale-invariant
    // in the normalized weights, so normalize only for the stopping test.
    Eigen::VectorXd x = vol.cwiseInverse();
    x /= x.sum();
    Eigen::VectorXd prev_norm = x;
    constexpr int kMaxSweeps = 10000;
    bool converged = false;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        for (Eigen::Index i = 0; i < n; ++i) {
            const double sigma_p = std::sqrt(x.dot(covariance * x));
            const double ci = (covariance.row(i) * x) - covariance(i, i) * x(i);
            x(i) = (-ci + std::sqrt(ci * ci + 4.0 * covariance(i, i) * b(i) * sigma_p)) /
                   (2.0 * covariance(i, i));
        }
        const Eigen::VectorXd norm = x / x.sum();
        if ((norm - prev_norm).cwiseAbs().maxCoeff() < 1e-10) {
            converged = true;
            prev_norm = norm;
            break;
        }
        prev_norm = norm;
    }

    WeightVector w = x / x.sum();
    const Eigen::VectorXd rc = risk_contributions(covariance, w);
    const double residual = (rc / rc.sum() - b).cwiseAbs().maxCoeff();
    if (!converged || residual >= 1e-8)
        throw ConvergenceFailureError("risk_budgeting: residual " + std::to_string(residual) +
                                      " after coordinate descent");
    return w;
}

}  // namespace mar
