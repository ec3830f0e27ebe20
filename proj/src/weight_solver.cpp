#include "vmat/weight_solver.hpp"

#include "vmat/error.hpp"
#include "vmat/stats.hpp"

#include <algorithm>
#include <cmath>

namespace vmat {

std::string_view to_string(InitMethod init) noexcept {
    return init == InitMethod::Coint ? "coint" : "maxvar";
}

PortfolioWeights to_unit_l1(PortfolioWeights weights) {
    const double l1 = weights.w.lpNorm<1>();
    if (!(l1 > 0.0) || !std::isfinite(l1)) {
        throw Error(ErrorCode::DegenerateDirection, "cannot normalise a zero weight vector");
    }
    weights.w /= l1;
    weights.norm_state = NormState::UnitL1;
    return weights;
}

TradeoffObjective::TradeoffObjective(double lambda, Eigen::MatrixXd log_window, std::size_t order)
    : lambda_(lambda), order_(order), window_(std::move(log_window)) {
    if (!(lambda_ >= 1.0) || !std::isfinite(lambda_)) {
        throw Error(ErrorCode::InvalidArgument, "lambda must be >= 1");
    }
    if (order_ < 1) {
        throw Error(ErrorCode::InvalidArgument, "AR order must be >= 1");
    }
    if (static_cast<std::size_t>(window_.rows()) < order_ + 1 || window_.cols() < 1) {
        throw Error(ErrorCode::InsufficientData, "window shorter than AR order + 1");
    }
    centered_ = window_.rowwise() - window_.colwise().mean();
    scatter_ = centered_.transpose() * centered_;
}

std::vector<double> TradeoffObjective::series(const Eigen::VectorXd& w) const {
    const Eigen::VectorXd y = window_ * w;
    return {y.data(), y.data() + y.size()};
}

namespace {

void check_beta(const TradeoffObjective& obj, const std::vector<double>& beta) {
    if (beta.size() != obj.order()) {
        throw Error(ErrorCode::InvalidArgument, "beta length differs from AR order");
    }
}

/// Rows s = p..L of r_s = z_s - sum_j beta_j z_{s-j}.
Eigen::MatrixXd ar_residual_rows(const TradeoffObjective& obj, const std::vector<double>& beta) {
    const auto& z = obj.centered();
    const auto p = static_cast<Eigen::Index>(obj.order());
    const Eigen::Index rows = z.rows() - p;
    Eigen::MatrixXd r = z.bottomRows(rows);
    for (Eigen::Index j = 1; j <= p; ++j) {
        r.noalias() -= beta[static_cast<std::size_t>(j - 1)] * z.middleRows(p - j, rows);
    }
    return r;
}

}  // namespace

double objective_value(const TradeoffObjective& obj, const Eigen::VectorXd& w,
                       const std::vector<double>& beta) {
    check_beta(obj, beta);
    const Eigen::VectorXd y = obj.centered() * w;
    const std::size_t p = obj.order();
    double sse = 0.0;
    for (std::size_t s = p; s < static_cast<std::size_t>(y.size()); ++s) {
        double e = y(static_cast<Eigen::Index>(s));
        for (std::size_t j = 1; j <= p; ++j) e -= beta[j - 1] * y(static_cast<Eigen::Index>(s - j));
        sse += e * e;
    }
    return -sse + obj.lambda() * y.squaredNorm();
}

Eigen::MatrixXd k_matrix(const TradeoffObjective& obj, const std::vector<double>& beta) {
    check_beta(obj, beta);
    const Eigen::MatrixXd r = ar_residual_rows(obj, beta);
    Eigen::MatrixXd k = obj.lambda() * obj.scatter();
    k.noalias() -= r.transpose() * r;
    return 0.5 * (k + k.transpose());
}

PortfolioWeights maxvar_weights(const Eigen::MatrixXd& log_window) {
    if (log_window.rows() < 2) {
        throw Error(ErrorCode::InsufficientData, "maxvar needs at least 2 rows");
    }
    const Eigen::MatrixXd c = log_window.rowwise() - log_window.colwise().mean();
    const Eigen::MatrixXd scatter = c.transpose() * c;
    if (!(scatter.trace() > 0.0)) {
        throw Error(ErrorCode::DegenerateSeries, "zero scatter: all window rows identical");
    }
    const auto top = stats::top_eigenpair(scatter);
    PortfolioWeights out;
    out.w = top.vector;
    out.provenance.init = InitMethod::MaxVar;
    return out;
}

PortfolioWeights coint_weights(const Eigen::MatrixXd& log_window) {
    const Eigen::Index n = log_window.rows();
    const Eigen::Index k = log_window.cols();
    if (k < 2) {
        throw Error(ErrorCode::InvalidArgument, "cointegration weights need k >= 2");
    }
    if (n < k + 5) {
        throw Error(ErrorCode::InsufficientData, "cointegration regression needs >= k + 5 rows");
    }
    Eigen::MatrixXd design(n, k);
    design.col(0).setOnes();
    design.rightCols(k - 1) = log_window.rightCols(k - 1);
    const auto fit = stats::ols(design, log_window.col(0));

    PortfolioWeights out;
    out.w.resize(k);
    out.w(0) = 1.0;
    out.w.tail(k - 1) = -fit.coefficients.tail(k - 1);
    out.w.normalize();
    stats::apply_sign_convention(out.w);
    out.provenance.init = InitMethod::Coint;
    return out;
}

ArModel fit_direction(const TradeoffObjective& obj, const Eigen::VectorXd& w) {
    try {
        return fit_ar(obj.series(w), obj.order());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::RankDeficient) {
            throw Error(ErrorCode::DegenerateDirection, e.what());
        }
        throw;
    }
}

PortfolioWeights vmat_descent(const TradeoffObjective& obj, InitMethod init, int n_steps) {
    if (n_steps < 1) {
        throw Error(ErrorCode::InvalidArgument, "n_steps must be >= 1");
    }
    const std::size_t rows = static_cast<std::size_t>(obj.log_window().rows());
    const std::size_t p = obj.order();
    if (rows - p < p + 5) {
        throw Error(ErrorCode::InsufficientData,
                    "formation window leaves " + std::to_string(rows - p) +
                        " AR rows, need >= p + 5 = " + std::to_string(p + 5));
    }

    PortfolioWeights current = init == InitMethod::Coint ? coint_weights(obj.log_window())
                                                         : maxvar_weights(obj.log_window());
    Eigen::VectorXd w = current.w;
    auto beta = fit_direction(obj, w).beta;

    WeightProvenance prov;
    prov.init = init;
    prov.lambda = obj.lambda();
    prov.objective_trace.push_back(objective_value(obj, w, beta));
    for (int step = 0; step < n_steps; ++step) {
        w = stats::top_eigenpair(k_matrix(obj, beta)).vector;
        prov.objective_trace.push_back(objective_value(obj, w, beta));
        beta = fit_direction(obj, w).beta;
        prov.objective_trace.push_back(objective_value(obj, w, beta));
        prov.step_weights.push_back(w);
        ++prov.steps_run;
    }

    PortfolioWeights out;
    out.w = w;
    out.norm_state = NormState::UnitL2;
    out.provenance = std::move(prov);
    return to_unit_l1(std::move(out));
}

InitMethod default_init(std::size_t assets) noexcept {
    return assets == 2 ? InitMethod::Coint : InitMethod::MaxVar;
}

double line_angle(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const Eigen::VectorXd an = a.normalized();
    const Eigen::VectorXd bn = b.normalized();
    const double c = an.dot(bn);
    return std::atan2((an - c * bn).norm(), std::abs(c));
}

}  // namespace vmat
