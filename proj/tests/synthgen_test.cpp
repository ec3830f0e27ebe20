#include "vmat/ar_forecast.hpp"
#include "vmat/error.hpp"
#include "vmat/stats.hpp"
#include "vmat/synthgen.hpp"
#include "vmat/weight_solver.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace {

using vmat::SynthSpec;

std::vector<double> column_series(const Eigen::MatrixXd& x, const Eigen::VectorXd& w) {
    const Eigen::VectorXd y = x * w;
    return {y.data(), y.data() + y.size()};
}

TEST(NormalRng, DocumentedAlgorithm) {
    vmat::NormalRng rng(123);
    std::mt19937_64 engine(123);
    const double u1 = (static_cast<double>(engine() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = (static_cast<double>(engine() >> 11) + 1.0) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    EXPECT_EQ(rng.normal(), r * std::cos(2.0 * M_PI * u2));
    EXPECT_EQ(rng.normal(), r * std::sin(2.0 * M_PI * u2));
}

TEST(NormalRng, Moments) {
    vmat::NormalRng rng(9);
    double s = 0.0;
    double ss = 0.0;
    constexpr int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        s += z;
        ss += z * z;
    }
    EXPECT_NEAR(s / n, 0.0, 0.01);
    EXPECT_NEAR(ss / n, 1.0, 0.01);
    for (int i = 0; i < 1000; ++i) {
        const double u = rng.uniform();
        EXPECT_GT(u, 0.0);
        EXPECT_LE(u, 1.0);
    }
}

TEST(Generate, ZeroNoiseIsConstant) {
    SynthSpec spec;
    spec.sigma_spread = 0.0;
    spec.sigma_trend = 0.0;
    spec.T = 50;
    const auto panel = vmat::generate(spec);
    EXPECT_TRUE(panel.prices().isApproxToConstant(spec.initial_price, 1e-12));
}

TEST(Generate, Reproducible) {
    SynthSpec spec;
    spec.k = 3;
    spec.hedge_vector = Eigen::Vector3d(1.0, -0.5, -0.5);
    vmat::ExtraFactor f;
    f.loading = Eigen::Vector3d(0.0, 1.0, -1.0);
    f.momentum = 0.3;
    spec.extra_factors = {f};
    const auto a = vmat::generate(spec);
    const auto b = vmat::generate(spec);
    EXPECT_EQ(a.prices(), b.prices());
    EXPECT_EQ(a.timestamps(), b.timestamps());
    spec.seed = 43;
    EXPECT_NE(vmat::generate(spec).prices(), a.prices());
}

TEST(Generate, HedgeDirectionIsTheSpread) {
    SynthSpec spec;
    spec.k = 3;
    spec.hedge_vector = Eigen::Vector3d(2.0, -1.0, -0.5);
    vmat::ExtraFactor f;
    f.loading = Eigen::Vector3d(1.0, 2.0, 3.0);
    spec.extra_factors = {f};
    const auto panel = vmat::generate(spec);
    const auto y = column_series(panel.log_prices(), spec.hedge_vector);
    // Reconstruct the spread recursion from the same draws.
    vmat::NormalRng rng(spec.seed);
    const double sd0 = spec.sigma_spread / std::sqrt(1.0 - spec.phi * spec.phi);
    const double base = spec.hedge_vector.sum() * std::log(spec.initial_price);
    double s = 0.0;
    for (std::size_t t = 0; t < spec.T; ++t) {
        (void)rng.normal();
        const double e = rng.normal();
        (void)rng.normal();
        s = t == 0 ? sd0 * e : spec.phi * s + spec.sigma_spread * e;
        ASSERT_NEAR(y[t] - base, s, 1e-11) << t;
    }
}

TEST(Generate, DefaultPairWhitenessContrast) {
    const SynthSpec spec;
    const auto panel = vmat::generate(spec);
    const auto spread = column_series(panel.log_prices(), spec.hedge_vector);
    const auto model = vmat::fit_ar(spread, 1);
    EXPECT_GT(vmat::stats::ljung_box(model.residuals, 20, 1).p_value, 0.01);
    EXPECT_NEAR(model.beta[0], spec.phi, 0.05);

    const auto raw = column_series(panel.log_prices(), Eigen::Vector2d(1.0, 0.0));
    EXPECT_LT(vmat::stats::ljung_box(raw, 20, 0).p_value, 0.01);
}

TEST(Generate, TrendScalingDoublesMaxVarSpread) {
    SynthSpec spec;
    const auto base_panel = vmat::generate(spec);
    spec.sigma_trend *= 2.0;
    const auto doubled_panel = vmat::generate(spec);
    const auto sd_of_maxvar = [](const vmat::PricePanel& p) {
        const auto w = vmat::maxvar_weights(p.log_prices());
        return std::sqrt(vmat::stats::sample_variance(column_series(p.log_prices(), w.w)));
    };
    EXPECT_NEAR(sd_of_maxvar(doubled_panel) / sd_of_maxvar(base_panel), 2.0, 0.2);
}

TEST(Generate, CointRecoversHedgeOnLongWindows) {
    for (std::uint64_t seed : {1U, 2U, 3U, 4U, 5U, 6U, 7U, 8U}) {
        SynthSpec spec;
        spec.seed = seed;
        spec.T = 251;
        const auto panel = vmat::generate(spec);
        const auto w = vmat::coint_weights(panel.log_prices());
        EXPECT_LT(vmat::line_angle(w.w, spec.hedge_vector), 0.1) << seed;
    }
}

TEST(Generate, FactorLagRecursion) {
    SynthSpec spec;
    spec.T = 40;
    spec.sigma_trend = 0.0;
    spec.sigma_spread = 0.0;
    vmat::ExtraFactor f;
    f.loading = Eigen::Vector2d(1.0, 1.0);
    f.sigma = 0.1;
    f.reversion = 0.5;
    f.lag = 3;
    spec.extra_factors = {f};
    const auto panel = vmat::generate(spec);
    // Loading (1, 1) is already orthogonal to the hedge, so asset 1 carries f.
    const Eigen::VectorXd level = panel.log_prices().col(0).array() - std::log(100.0);
    vmat::NormalRng rng(spec.seed);
    std::vector<double> expected;
    for (std::size_t t = 0; t < spec.T; ++t) {
        (void)rng.normal();
        (void)rng.normal();
        const double e = rng.normal();
        double v = 0.0;
        if (t > 0) v = 0.1 * e + (t >= 3 ? 0.5 * expected[t - 3] : 0.0);
        expected.push_back(v);
        EXPECT_NEAR(level(static_cast<Eigen::Index>(t)), v, 1e-12) << t;
    }
}

TEST(Generate, RejectsInvalidSpecs) {
    SynthSpec spec;
    spec.phi = 1.0;
    EXPECT_THROW((void)vmat::generate(spec), vmat::Error);
    spec = SynthSpec{};
    spec.hedge_vector = Eigen::Vector2d::Zero();
    EXPECT_THROW((void)vmat::generate(spec), vmat::Error);
    spec = SynthSpec{};
    spec.k = 3;
    EXPECT_THROW((void)vmat::generate(spec), vmat::Error);
    spec = SynthSpec{};
    spec.sigma_trend = -0.1;
    EXPECT_THROW((void)vmat::generate(spec), vmat::Error);
    spec = SynthSpec{};
    vmat::ExtraFactor f;
    f.loading = Eigen::Vector2d(1.0, 1.0);
    f.lag = 0;
    spec.extra_factors = {f};
    EXPECT_THROW((void)vmat::generate(spec), vmat::Error);
}

TEST(BusinessDates, SkipsWeekends) {
    const auto dates = vmat::business_dates("2016-04-08", 4);
    EXPECT_EQ(dates, (std::vector<std::string>{"2016-04-08", "2016-04-11", "2016-04-12",
                                                "2016-04-13"}));
    EXPECT_EQ(vmat::business_dates("2016-04-09", 1).front(), "2016-04-11");
}

}  // namespace
