#include "vmat/signal_engine.hpp"

#include "vmat/error.hpp"
#include "vmat/stats.hpp"

#include <algorithm>
#include <cmath>

namespace vmat {

std::string_view to_string(QuantileConvention c) noexcept {
    return c == QuantileConvention::Literal ? "literal" : "upper-tail";
}

std::string_view to_string(ThresholdMethod m) noexcept {
    return m == ThresholdMethod::ArProduct ? "ar-product" : "stationary-quantile";
}

double profit_product(const ForecastPath& path, double sigma) {
    double product = 1.0;
    for (std::size_t i = 0; i < path.point.size(); ++i) {
        product *= stats::normal_cdf((sigma - path.point[i]) / path.err_std[i]);
    }
    return product;
}

namespace {

constexpr int kMaxIterations = 200;

double solve_product(const ForecastPath& path, double target) {
    const auto [lo_it, hi_it] = std::minmax_element(path.point.begin(), path.point.end());
    const double spread = *std::max_element(path.err_std.begin(), path.err_std.end());
    double width = 10.0 * spread;
    double lo = *lo_it - width;
    double hi = *hi_it + width;
    // Widen geometrically until the target is enclosed.
    for (int i = 0; i < 64 && profit_product(path, lo) > target; ++i) {
        width *= 2.0;
        lo = *lo_it - width;
    }
    width = 10.0 * spread;
    for (int i = 0; i < 64 && profit_product(path, hi) < target; ++i) {
        width *= 2.0;
        hi = *hi_it + width;
    }

    double mid = 0.5 * (lo + hi);
    for (int i = 0; i < kMaxIterations; ++i) {
        mid = 0.5 * (lo + hi);
        if (!(lo < mid && mid < hi)) break;  // bracket exhausted at double resolution
        const double value = profit_product(path, mid);
        if (value == target) break;
        if (value < target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return mid;
}

}  // namespace

ThresholdPair ar_thresholds(const ForecastPath& path, double alpha) {
    if (!(alpha > 0.5 && alpha < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "AR thresholds need 0.5 < alpha < 1");
    }
    if (path.point.empty() || path.point.size() != path.err_std.size()) {
        throw Error(ErrorCode::InvalidArgument, "forecast path is empty or inconsistent");
    }
    for (std::size_t i = 0; i < path.point.size(); ++i) {
        if (!std::isfinite(path.point[i]) || !std::isfinite(path.err_std[i])) {
            throw Error(ErrorCode::NonFiniteForecast,
                        "forecast step " + std::to_string(i + 1) + " is not finite");
        }
        if (!(path.err_std[i] > 0.0)) {
            throw Error(ErrorCode::DegenerateSeries, "forecast error must be positive");
        }
    }
    ThresholdPair out;
    out.method = ThresholdMethod::ArProduct;
    out.alpha = alpha;
    out.horizon = path.point.size();
    out.short_threshold = solve_product(path, alpha);
    out.long_threshold = solve_product(path, 1.0 - alpha);
    return out;
}

double quantile_level(double alpha, std::size_t horizon, QuantileConvention convention) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");
    }
    if (horizon < 1) {
        throw Error(ErrorCode::InvalidArgument, "horizon must be >= 1");
    }
    const double inv_d = 1.0 / static_cast<double>(horizon);
    if (convention == QuantileConvention::Literal) {
        return std::pow(1.0 - alpha, inv_d) / 2.0;
    }
    return 1.0 - (1.0 - std::pow(alpha, inv_d)) / 2.0;
}

ThresholdPair stationary_thresholds_at(std::span<const double> formation_series, double level) {
    if (formation_series.size() < 10) {
        throw Error(ErrorCode::InsufficientData, "stationary thresholds need >= 10 observations");
    }
    const double mu = stats::mean(formation_series);
    const double var = stats::sample_variance(formation_series);
    if (!(var > 0.0)) {
        throw Error(ErrorCode::DegenerateSeries, "formation series has zero variance");
    }
    ThresholdPair out;
    out.method = ThresholdMethod::StationaryQuantile;
    out.quantile_level = level;
    out.short_threshold = stats::normal_quantile(level, mu, var);
    out.long_threshold = 2.0 * mu - out.short_threshold;
    return out;
}

ThresholdPair stationary_thresholds(std::span<const double> formation_series, double alpha,
                                    std::size_t horizon, QuantileConvention convention) {
    auto out = stationary_thresholds_at(formation_series, quantile_level(alpha, horizon, convention));
    out.alpha = alpha;
    out.horizon = horizon;
    return out;
}

Signal make_signal(double y_now, const ThresholdPair& thresholds) {
    Signal s;
    s.y_now = y_now;
    s.thresholds = thresholds;
    if (y_now < thresholds.long_threshold) {
        s.delta = 1;
    } else if (y_now > thresholds.short_threshold) {
        s.delta = -1;
    }
    return s;
}

}  // namespace vmat
