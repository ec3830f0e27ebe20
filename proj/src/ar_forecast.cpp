#include "vmat/ar_forecast.hpp"

#include "vmat/error.hpp"
#include "vmat/stats.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace vmat {

ArModel fit_ar(std::span<const double> series, std::size_t order) {
    const std::size_t n = series.size();
    if (order < 1) {
        throw Error(ErrorCode::InvalidArgument, "AR order must be >= 1");
    }
    if (n < order + 5 || n - order <= order) {
        throw Error(ErrorCode::InsufficientData, "AR(" + std::to_string(order) + ") fit needs more than " +
                                                     std::to_string(n) + " observations");
    }

    ArModel model;
    model.order = order;
    model.series_mean = stats::mean(series);

    const auto rows = static_cast<Eigen::Index>(n - order);
    const auto p = static_cast<Eigen::Index>(order);
    Eigen::MatrixXd design(rows, p);
    Eigen::VectorXd response(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const std::size_t t = static_cast<std::size_t>(r) + order;
        response(r) = series[t] - model.series_mean;
        for (Eigen::Index j = 0; j < p; ++j) {
            design(r, j) = series[t - 1 - static_cast<std::size_t>(j)] - model.series_mean;
        }
    }

    const auto fit = stats::ols(design, response);
    model.beta.assign(fit.coefficients.data(), fit.coefficients.data() + p);
    model.residual_variance = fit.residual_variance;
    model.residuals.assign(fit.residuals.data(), fit.residuals.data() + rows);
    return model;
}

std::vector<double> psi_weights(const ArModel& model, std::size_t count) {
    std::vector<double> psi(count, 0.0);
    if (count == 0) return psi;
    psi[0] = 1.0;
    for (std::size_t j = 1; j < count; ++j) {
        double s = 0.0;
        for (std::size_t i = 1; i <= std::min(j, model.order); ++i) {
            s += model.beta[i - 1] * psi[j - i];
        }
        psi[j] = s;
    }
    return psi;
}

ForecastPath forecast(const ArModel& model, std::span<const double> recent, std::size_t horizon) {
    if (horizon < 1) {
        throw Error(ErrorCode::InvalidArgument, "forecast horizon must be >= 1");
    }
    const std::size_t p = model.order;
    if (recent.size() < p || model.beta.size() != p) {
        throw Error(ErrorCode::InvalidArgument, "forecast needs the last p observations");
    }

    // Centred history followed by the forecasts, newest last.
    std::vector<double> path;
    path.reserve(p + horizon);
    for (std::size_t i = recent.size() - p; i < recent.size(); ++i) {
        path.push_back(recent[i] - model.series_mean);
    }

    ForecastPath out;
    out.point.reserve(horizon);
    for (std::size_t h = 0; h < horizon; ++h) {
        double next = 0.0;
        for (std::size_t j = 1; j <= p; ++j) next += model.beta[j - 1] * path[path.size() - j];
        path.push_back(next);
        out.point.push_back(next + model.series_mean);
    }

    const auto psi = psi_weights(model, horizon);
    out.err_std.reserve(horizon);
    double cumulative = 0.0;
    for (std::size_t i = 0; i < horizon; ++i) {
        cumulative += psi[i] * psi[i];
        out.err_std.push_back(std::sqrt(model.residual_variance * cumulative));
    }
    return out;
}

}  // namespace vmat
