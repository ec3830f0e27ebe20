#pragma once

#include "vmat/ar_forecast.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <string_view>
#include <vector>

namespace vmat {

enum class NormState { UnitL2, UnitL1 };
enum class InitMethod { Coint, MaxVar };

[[nodiscard]] std::string_view to_string(InitMethod init) noexcept;

struct WeightProvenance {
    InitMethod init = InitMethod::MaxVar;
    double lambda = 1.0;
    int steps_run = 0;
    /// Objective after the initial beta fit, then after every w-step and beta-step.
    std::vector<double> objective_trace;
    /// Unit-L2 weights after every full step.
    std::vector<Eigen::VectorXd> step_weights;
};

struct PortfolioWeights {
    Eigen::VectorXd w;
    NormState norm_state = NormState::UnitL2;
    WeightProvenance provenance;
};

/// Rescales to unit L1 (keeps direction and sign).
[[nodiscard]] PortfolioWeights to_unit_l1(PortfolioWeights weights);

/**
 * Predictability / volatility trade-off on one formation window.
 *
 * Window rows are x_0..x_L (log prices). With xbar the mean over all L+1 rows
 * and z_s = x_s - xbar, the objective for unit-L2 w and AR coefficients beta is
 *
 *   -sum_{s=p..L} (w'z_s - sum_j beta_j w'z_{s-j})^2 + lambda * sum_{s=0..L} (w'z_s)^2
 *
 * The AR term is exactly the loss minimised by fit_ar on the series w'x, so
 * alternating eigen steps and AR refits never decrease it.
 */
class TradeoffObjective {
public:
    TradeoffObjective(double lambda, Eigen::MatrixXd log_window, std::size_t order);

    [[nodiscard]] double lambda() const noexcept { return lambda_; }
    [[nodiscard]] std::size_t order() const noexcept { return order_; }
    [[nodiscard]] std::size_t assets() const noexcept {
        return static_cast<std::size_t>(window_.cols());
    }
    [[nodiscard]] const Eigen::MatrixXd& log_window() const noexcept { return window_; }
    [[nodiscard]] const Eigen::MatrixXd& centered() const noexcept { return centered_; }
    /// Sum over all window rows of z z'.
    [[nodiscard]] const Eigen::MatrixXd& scatter() const noexcept { return scatter_; }

    /// Series w'x over the window, oldest first.
    [[nodiscard]] std::vector<double> series(const Eigen::VectorXd& w) const;

private:
    double lambda_;
    std::size_t order_;
    Eigen::MatrixXd window_;
    Eigen::MatrixXd centered_;
    Eigen::MatrixXd scatter_;
};

[[nodiscard]] double objective_value(const TradeoffObjective& obj, const Eigen::VectorXd& w,
                                     const std::vector<double>& beta);

/// K(beta) = lambda * sum z z' - sum r r', r_s = z_s - sum_j beta_j z_{s-j}; w'Kw = objective.
[[nodiscard]] Eigen::MatrixXd k_matrix(const TradeoffObjective& obj,
                                       const std::vector<double>& beta);

[[nodiscard]] PortfolioWeights maxvar_weights(const Eigen::MatrixXd& log_window);

/// Engle-Granger style hedge regression of asset 1 on the rest plus intercept.
[[nodiscard]] PortfolioWeights coint_weights(const Eigen::MatrixXd& log_window);

/// Alternating maximisation: w <- top eigenvector of K(beta), beta <- AR refit.
/// Returns unit-L1 weights.
[[nodiscard]] PortfolioWeights vmat_descent(const TradeoffObjective& obj, InitMethod init,
                                            int n_steps = 1);

/// AR fit of the final direction returned by vmat_descent (any scaling of w).
[[nodiscard]] ArModel fit_direction(const TradeoffObjective& obj, const Eigen::VectorXd& w);

[[nodiscard]] InitMethod default_init(std::size_t assets) noexcept;

/// Angle between the lines spanned by a and b, in [0, pi/2].
[[nodiscard]] double line_angle(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

}  // namespace vmat
