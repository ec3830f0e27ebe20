#pragma once

#include "vmat/ar_forecast.hpp"

#include <cstddef>
#include <span>
#include <string_view>

namespace vmat {

enum class ThresholdMethod { ArProduct, StationaryQuantile };

/// How the stationary baseline turns (alpha, d) into a normal quantile level.
///   Literal:   q = (1 - alpha)^(1/d) / 2
///   UpperTail: q = 1 - (1 - alpha^(1/d)) / 2
enum class QuantileConvention { Literal, UpperTail };

[[nodiscard]] std::string_view to_string(QuantileConvention c) noexcept;
[[nodiscard]] std::string_view to_string(ThresholdMethod m) noexcept;

struct ThresholdPair {
    double long_threshold = 0.0;
    double short_threshold = 0.0;
    ThresholdMethod method = ThresholdMethod::ArProduct;
    double alpha = 0.0;
    std::size_t horizon = 0;
    double quantile_level = 0.0;  ///< StationaryQuantile only
};

struct Signal {
    int delta = 0;
    double y_now = 0.0;
    ThresholdPair thresholds;
};

/// prod_i Phi((sigma - yhat_i) / err_i)
[[nodiscard]] double profit_product(const ForecastPath& path, double sigma);

/// Solves prod Phi((sigma - yhat_i)/err_i) = alpha for the short threshold and
/// = 1 - alpha for the long threshold, by bracketed bisection.
[[nodiscard]] ThresholdPair ar_thresholds(const ForecastPath& path, double alpha);

[[nodiscard]] double quantile_level(double alpha, std::size_t horizon, QuantileConvention convention);

/// Short threshold at the given normal quantile of the formation sample; the long
/// threshold mirrors it about the sample mean.
[[nodiscard]] ThresholdPair stationary_thresholds_at(std::span<const double> formation_series,
                                                     double level);

[[nodiscard]] ThresholdPair stationary_thresholds(std::span<const double> formation_series,
                                                  double alpha, std::size_t horizon,
                                                  QuantileConvention convention =
                                                      QuantileConvention::Literal);

/// +1 if y < long, else -1 if y > short, else 0 (cases checked in that order).
[[nodiscard]] Signal make_signal(double y_now, const ThresholdPair& thresholds);

}  // namespace vmat
