#include "vmat/stats.hpp"

#include "vmat/error.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace vmat::stats {

namespace {
constexpr double kRankTolerance = 1e-10;
}

OlsFit ols(const Eigen::MatrixXd& design, const Eigen::VectorXd& response) {
    const Eigen::Index n = design.rows();
    const Eigen::Index m = design.cols();
    if (response.size() != n) {
        throw Error(ErrorCode::InvalidArgument, "design and response row counts differ");
    }
    if (m < 1 || n <= m) {
        throw Error(ErrorCode::InsufficientData,
                    "ols needs more rows than columns (" + std::to_string(n) + " x " +
                        std::to_string(m) + ")");
    }
    if (!design.allFinite() || !response.allFinite()) {
        throw Error(ErrorCode::NonFiniteInput, "ols input contains non-finite values");
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    qr.setThreshold(kRankTolerance);
    if (qr.rank() < m) {
        throw Error(ErrorCode::RankDeficient, "design matrix rank " + std::to_string(qr.rank()) +
                                                  " < " + std::to_string(m));
    }

    OlsFit fit;
    fit.coefficients = qr.solve(response);
    fit.residuals = response - design * fit.coefficients;
    fit.residual_variance = fit.residuals.squaredNorm() / static_cast<double>(n - m);
    return fit;
}

void apply_sign_convention(Eigen::VectorXd& v) {
    if (v.size() == 0) return;
    const double largest = v.cwiseAbs().maxCoeff();
    const double tol = 1e-12 * largest;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) >= largest - tol) {
            if (v(i) < 0.0) v = -v;
            return;
        }
    }
}

EigenPair top_eigenpair(const Eigen::MatrixXd& matrix) {
    if (matrix.rows() != matrix.cols() || matrix.rows() == 0) {
        throw Error(ErrorCode::InvalidArgument, "top_eigenpair needs a non-empty square matrix");
    }
    if (!matrix.allFinite()) {
        throw Error(ErrorCode::NonFiniteInput, "matrix contains non-finite entries");
    }
    const Eigen::MatrixXd sym = 0.5 * (matrix + matrix.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::NonFiniteInput, "eigen decomposition failed");
    }
    const Eigen::VectorXd& values = solver.eigenvalues();  // ascending
    const Eigen::Index k = values.size();
    const double top = values(k - 1);

    // Eigenvalues within this tolerance of the top are treated as one eigenspace.
    const double scale = std::max(values.cwiseAbs().maxCoeff(), sym.norm());
    const double tie_tol = 1e-12 * std::max(scale, 1e-300);
    Eigen::Index first = k - 1;
    while (first > 0 && top - values(first - 1) <= tie_tol) --first;

    EigenPair out;
    out.value = top;
    if (first == k - 1) {
        out.vector = solver.eigenvectors().col(k - 1);
    } else {
        const Eigen::MatrixXd basis = solver.eigenvectors().rightCols(k - first);
        for (Eigen::Index i = 0; i < k; ++i) {
            Eigen::VectorXd projected = basis * basis.row(i).transpose();
            if (projected.norm() > 1e-6) {
                out.vector = projected.normalized();
                break;
            }
        }
    }
    out.vector.normalize();
    apply_sign_convention(out.vector);
    return out;
}

double normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

double normal_quantile(double p, double mean, double variance) {
    if (!(p > 0.0 && p < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "quantile level must lie in (0, 1)");
    }
    if (!(variance > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "variance must be positive");
    }
    const double z = -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * p);
    return mean + std::sqrt(variance) * z;
}

double chi2_sf(double x, int dof) {
    if (dof < 1) {
        throw Error(ErrorCode::InvalidArgument, "chi-square dof must be >= 1");
    }
    if (!(x >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "chi-square argument must be >= 0");
    }
    if (x == 0.0) return 1.0;
    return boost::math::gamma_q(0.5 * dof, 0.5 * x);
}

double mean(std::span<const double> xs) {
    if (xs.empty()) return 0.0;
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
    if (xs.size() < 2) return 0.0;
    const double mu = mean(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - mu) * (x - mu);
    return ss / static_cast<double>(xs.size() - 1);
}

std::vector<double> autocorrelation(std::span<const double> xs, std::size_t max_lag) {
    const std::size_t n = xs.size();
    const double mu = mean(xs);
    double denom = 0.0;
    for (double x : xs) denom += (x - mu) * (x - mu);
    if (!(denom > 0.0)) {
        throw Error(ErrorCode::DegenerateSeries, "series has zero variance");
    }
    std::vector<double> acf(max_lag + 1, 0.0);
    for (std::size_t lag = 0; lag <= max_lag && lag < n; ++lag) {
        double num = 0.0;
        for (std::size_t t = lag; t < n; ++t) num += (xs[t] - mu) * (xs[t - lag] - mu);
        acf[lag] = num / denom;
    }
    return acf;
}

LjungBoxResult ljung_box(std::span<const double> residuals, std::size_t max_lag,
                         std::size_t fitted_params) {
    const std::size_t n = residuals.size();
    if (max_lag < 1 || n <= max_lag) {
        throw Error(ErrorCode::InvalidArgument, "ljung_box needs n > h >= 1");
    }
    if (max_lag <= fitted_params) {
        throw Error(ErrorCode::InvalidArgument, "ljung_box needs h > fitted parameters");
    }
    const auto acf = autocorrelation(residuals, max_lag);
    const double nd = static_cast<double>(n);
    double sum = 0.0;
    for (std::size_t j = 1; j <= max_lag; ++j) {
        sum += acf[j] * acf[j] / (nd - static_cast<double>(j));
    }
    LjungBoxResult out;
    out.statistic = nd * (nd + 2.0) * sum;
    out.dof = static_cast<int>(max_lag - fitted_params);
    out.p_value = chi2_sf(out.statistic, out.dof);
    return out;
}

}  // namespace vmat::stats
