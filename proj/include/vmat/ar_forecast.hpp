#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace vmat {

/// AR(p) fitted by OLS on the mean-centred series, no intercept.
struct ArModel {
    std::size_t order = 0;
    std::vector<double> beta;          ///< beta[j-1] multiplies y_{t-j}
    double series_mean = 0.0;
    double residual_variance = 0.0;
    std::vector<double> residuals;     ///< n - p in-sample residuals, oldest first
};

struct ForecastPath {
    std::vector<double> point;    ///< yhat_{t+1..t+d}
    std::vector<double> err_std;  ///< forecast error standard deviation per step
};

/// Requires n >= p + 5 and at least one more regression row than lags (n - p > p).
[[nodiscard]] ArModel fit_ar(std::span<const double> series, std::size_t order);

/// psi_0..psi_{count-1} of the MA(infinity) representation; psi_0 = 1.
[[nodiscard]] std::vector<double> psi_weights(const ArModel& model, std::size_t count);

/// `recent` holds at least the last p observations in chronological order.
[[nodiscard]] ForecastPath forecast(const ArModel& model, std::span<const double> recent,
                                    std::size_t horizon);

}  // namespace vmat
