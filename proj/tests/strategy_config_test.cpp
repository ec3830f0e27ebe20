#include "vmat/backtester.hpp"
#include "vmat/error.hpp"
#include "vmat/strategy_config.hpp"
#include "vmat/synthgen.hpp"

#include <gtest/gtest.h>

namespace {

using vmat::Method;
using vmat::StrategyConfig;

TEST(Parsers, NamesRoundTrip) {
    for (Method m : vmat::all_methods()) {
        EXPECT_EQ(vmat::parse_method(vmat::to_string(m)), m);
    }
    EXPECT_EQ(vmat::parse_method("vmat_cv"), Method::VMATCV);
    EXPECT_EQ(vmat::parse_method("COINT-ar"), Method::CointAR);
    EXPECT_EQ(vmat::parse_lambda_mode("Tame"), vmat::LambdaMode::Tame);
    EXPECT_EQ(vmat::parse_quantile_convention("upper-tail"), vmat::QuantileConvention::UpperTail);
    EXPECT_EQ(vmat::parse_quantile_convention("literal"), vmat::QuantileConvention::Literal);
    EXPECT_EQ(vmat::parse_init("MaxVar"), vmat::InitMethod::MaxVar);
    EXPECT_THROW((void)vmat::parse_method("pca"), vmat::Error);
    EXPECT_THROW((void)vmat::parse_lambda_mode("auto"), vmat::Error);
    EXPECT_THROW((void)vmat::parse_quantile_convention("lower"), vmat::Error);
    EXPECT_THROW((void)vmat::parse_init("random"), vmat::Error);
    EXPECT_EQ(vmat::all_methods().size(), 6U);
}

TEST(StrategyConfig, Defaults) {
    const StrategyConfig cfg;
    EXPECT_EQ(cfg.d, 7U);
    EXPECT_EQ(cfg.p, 10U);
    EXPECT_EQ(cfg.L, 60U);
    EXPECT_EQ(cfg.alpha, 0.999);
    EXPECT_EQ(cfg.effective_lb_lag(), 20U);
    EXPECT_EQ(cfg.effective_init(2), vmat::InitMethod::Coint);
    EXPECT_EQ(cfg.effective_init(3), vmat::InitMethod::MaxVar);
    EXPECT_EQ(cfg.warmup(), 60U + 10U + 7U + 10U);
    EXPECT_NO_THROW(cfg.validate());
}

TEST(StrategyConfig, EffectiveLambdaMode) {
    StrategyConfig cfg;
    cfg.lambda_mode = vmat::LambdaMode::CV;
    EXPECT_EQ(cfg.effective_lambda_mode(), vmat::LambdaMode::CV);
    cfg.method = Method::VMATTame;
    EXPECT_EQ(cfg.effective_lambda_mode(), vmat::LambdaMode::Tame);
    cfg.method = Method::VMATCV;
    cfg.lambda_mode = vmat::LambdaMode::Fixed;
    EXPECT_EQ(cfg.effective_lambda_mode(), vmat::LambdaMode::CV);
}

TEST(StrategyConfig, Validation) {
    const auto rejects = [](auto mutate) {
        StrategyConfig cfg;
        mutate(cfg);
        try {
            cfg.validate();
        } catch (const vmat::Error& e) {
            return e.code() == vmat::ErrorCode::InvalidArgument;
        }
        return false;
    };
    EXPECT_TRUE(rejects([](StrategyConfig& c) { c.d = 0; }));
    EXPECT_TRUE(rejects([](StrategyConfig& c) { c.p = 0; }));
    EXPECT_TRUE(rejects([](StrategyConfig& c) { c.L = c.p + 9; }));
    EXPECT_FALSE(rejects([](StrategyConfig& c) { c.L = c.p + 10; }));
    EXPECT_TRUE(rejects([](StrategyConfig& c) { c.alpha = 0.0; }));
    EXPECT_TRUE(rejects([](StrategyConfig& c) { c.alpha = 1.0; }));
    EXPECT_TRUE(rejects([](StrategyConfig& c) { c.lambda = 0.99; }));
    EXPECT_TRUE(rejects([](StrategyConfig& c) { c.n_steps = 0; }));
    EXPECT_TRUE(rejects([](StrategyConfig& c) { c.cv_lookback = 0; }));
    EXPECT_TRUE(rejects([](StrategyConfig& c) { c.lb_alpha = 1.0; }));
}

// The stationary baseline's band narrows as the horizon grows, so it trades
// at least as often.
TEST(StrategyConfig, CointSignalRateGrowsWithHorizon) {
    const auto panel = vmat::generate(vmat::SynthSpec{});
    StrategyConfig short_h;
    short_h.method = Method::Coint;
    short_h.d = 3;
    StrategyConfig long_h = short_h;
    long_h.d = 14;
    const vmat::EvalRange range{long_h.warmup(), long_h.warmup() + 1000};
    const auto a = vmat::run_backtest(panel, short_h, range);
    const auto b = vmat::run_backtest(panel, long_h, range);
    EXPECT_LE(a.signal_rate, b.signal_rate);
}

}  // namespace
