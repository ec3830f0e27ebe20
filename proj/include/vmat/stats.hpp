#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace vmat::stats {

struct OlsFit {
    Eigen::VectorXd coefficients;
    Eigen::VectorXd residuals;
    double residual_variance = 0.0;  ///< SSR / (n - m)
};

/// Least squares without intercept via column-pivoted Householder QR.
/// Throws InsufficientData when n <= m and RankDeficient when the design's
/// condition (largest over smallest pivot) exceeds 1e10.
[[nodiscard]] OlsFit ols(const Eigen::MatrixXd& design, const Eigen::VectorXd& response);

struct EigenPair {
    double value = 0.0;
    Eigen::VectorXd vector;  ///< unit L2; largest-magnitude component positive
};

/// Algebraically largest eigenvalue of the symmetric part (K + K^T) / 2.
/// A repeated top eigenvalue is resolved toward the lowest-index basis vector
/// with a nonzero projection onto the eigenspace.
[[nodiscard]] EigenPair top_eigenpair(const Eigen::MatrixXd& matrix);

/// Flips v so its largest-magnitude component is positive; ties go to the lowest index.
void apply_sign_convention(Eigen::VectorXd& v);

[[nodiscard]] double normal_cdf(double z);

/// q-quantile of Normal(mean, variance).
[[nodiscard]] double normal_quantile(double p, double mean = 0.0, double variance = 1.0);

/// Upper tail of the chi-square distribution, Q(dof/2, x/2).
[[nodiscard]] double chi2_sf(double x, int dof);

[[nodiscard]] double mean(std::span<const double> xs);

/// Sample variance with n - 1 in the denominator.
[[nodiscard]] double sample_variance(std::span<const double> xs);

/// Sample autocorrelations rho_0..rho_max_lag of the mean-centred series.
[[nodiscard]] std::vector<double> autocorrelation(std::span<const double> xs, std::size_t max_lag);

struct LjungBoxResult {
    double statistic = 0.0;
    double p_value = 1.0;
    int dof = 0;
};

/// Q = n(n+2) sum_{j=1..h} rho_j^2 / (n - j), referred to chi-square with h - m dof.
[[nodiscard]] LjungBoxResult ljung_box(std::span<const double> residuals, std::size_t max_lag,
                                       std::size_t fitted_params);

}  // namespace vmat::stats
