#pragma once

#include "vmat/market_data.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <vector>

namespace vmat {

/**
 * Reproducible normal draws.
 *
 * Uniforms come from std::mt19937_64 (the standard 64-bit Mersenne Twister,
 * default seeding by the given 64-bit seed) as ((x >> 11) + 1) * 2^-53; normals use
 * the Box-Muller transform, returning the cosine and then the sine branch of
 * each pair. std::normal_distribution is avoided because its algorithm is
 * implementation-defined.
 */
class NormalRng {
public:
    explicit NormalRng(std::uint64_t seed) : engine_(seed) {}

    double uniform();        ///< (0, 1]
    double normal();
    double normal(double mean, double sd) { return mean + sd * normal(); }

private:
    std::mt19937_64 engine_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

/// Extra direction f_t = reversion * f_{t-lag} + g_t with g_t = momentum * g_{t-1} + sigma * e_t.
/// reversion = 1, lag = 1 gives an integrated (nonstationary) factor; below 1 a mean-reverting
/// one. A lag beyond the AR order leaves dependence that the AR fit cannot absorb.
struct ExtraFactor {
    Eigen::VectorXd loading;  ///< projected orthogonal to the hedge vector
    double sigma = 0.05;
    double momentum = 0.0;
    double reversion = 1.0;
    std::size_t lag = 1;
};

struct SynthSpec {
    std::size_t k = 2;
    std::size_t T = 1500;
    Eigen::VectorXd hedge_vector = Eigen::Vector2d(1.0, -1.0);
    double phi = 0.9;
    double sigma_spread = 0.01;
    double sigma_trend = 0.02;
    std::vector<ExtraFactor> extra_factors;
    std::uint64_t seed = 42;
    double initial_price = 100.0;
    std::string start_date = "2016-04-08";

    /// Throws InvalidArgument on |phi| >= 1, negative sigmas, zero hedge vector or size mismatch.
    void validate() const;
};

/// The random-walk loading: the all-ones vector projected orthogonal to the hedge vector.
[[nodiscard]] Eigen::VectorXd trend_loading(const SynthSpec& spec);

/**
 * log X_t = log(initial_price) + tau_t * v + s_t * h / |h|^2 + sum_j f_{j,t} * u_j
 *
 * tau is a random walk (sigma_trend), s a stationary AR(1) spread (phi, sigma_spread)
 * started from its stationary law, and each f_j follows ExtraFactor's recursion from 0. Because v and
 * every u_j are orthogonal to h, h' log X_t = h' log X_0 + s_t exactly. Per time step
 * the draws are taken in the order trend, spread, factors.
 */
[[nodiscard]] PricePanel generate(const SynthSpec& spec);

/// Consecutive weekday ISO dates starting at `start` (itself moved forward to a weekday).
[[nodiscard]] std::vector<std::string> business_dates(const std::string& start, std::size_t count);

}  // namespace vmat
