#include "fixtures.hpp"
#include "test_support.hpp"

#include "vmat/backtester.hpp"
#include "vmat/error.hpp"
#include "vmat/synthgen.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace {

using vmat::Method;
using vmat::StrategyConfig;
using vmat::TradeDecision;

const vmat::PricePanel& default_panel() {
    static const vmat::PricePanel panel = vmat::generate(vmat::SynthSpec{});
    return panel;
}

StrategyConfig config_for(Method m) {
    StrategyConfig cfg;
    cfg.method = m;
    return cfg;
}

TEST(Settle, ImmediateProfitOnLong) {
    TradeDecision d;
    d.delta = 1;
    d.y_now = 0.2;
    vmat::settle(d, std::vector<double>{0.25, 0.3, 0.4});
    ASSERT_TRUE(d.bail_offset);
    EXPECT_EQ(*d.bail_offset, 1U);
    EXPECT_TRUE(d.exited_early);
    EXPECT_GT(d.pl, 0.0);
    EXPECT_DOUBLE_EQ(d.pl, 0.25 - 0.2);
}

TEST(Settle, FlatPathExitsAtHorizon) {
    TradeDecision d;
    d.delta = -1;
    d.y_now = 1.5;
    vmat::settle(d, std::vector<double>(7, 1.5));
    EXPECT_FALSE(d.bail_offset);
    EXPECT_FALSE(d.exited_early);
    EXPECT_EQ(d.pl, 0.0);
}

TEST(Settle, TwoAssetShortFixture) {
    const auto panel = vmat::testing::two_asset_fixture();
    TradeDecision d;
    d.time_index = 7;
    d.weights = Eigen::Vector2d(0.5, 0.5);
    d.delta = -1;
    const auto y = [&](Eigen::Index r) { return panel.log_prices().row(r).dot(d.weights); };
    d.y_now = y(7);
    vmat::settle(d, std::vector<double>{y(8), y(9)});
    ASSERT_TRUE(d.bail_offset);
    EXPECT_EQ(*d.bail_offset, 2U);
    // Hand computation: -(0.5 log(99 * 98) - 0.5 log(100 * 100)).
    const double expected = 0.5 * std::log(100.0 * 100.0 / (99.0 * 98.0));
    EXPECT_NEAR(d.pl, expected, 1e-12);
}

TEST(Summarize, ScriptedTenDays) {
    const auto report = vmat::summarize(vmat::testing::scripted_ten_days());
    const vmat::testing::ScriptedExpectation want;
    EXPECT_NEAR(report.pl_mean, want.pl_mean, 1e-12);
    EXPECT_NEAR(report.pl_se, want.pl_se, 1e-12);
    EXPECT_EQ(report.signal_rate, want.signal_rate);
    EXPECT_EQ(report.control_rate, want.control_rate);
    EXPECT_EQ(report.profit_rate, want.profit_rate);
    EXPECT_NEAR(report.max_drawdown, want.max_drawdown, 1e-12);
    ASSERT_EQ(report.cumulative_pl.size(), 10U);
    EXPECT_NEAR(report.cumulative_pl.back(), 10 * report.pl_mean, 1e-12);
}

TEST(Summarize, EmptyIsRejected) {
    EXPECT_THROW((void)vmat::summarize({}), vmat::Error);
}

TEST(RunTrade, RangeChecks) {
    const auto& panel = default_panel();
    const auto cfg = config_for(Method::CointAR);
    EXPECT_THROW((void)vmat::run_trade(panel, cfg.L + cfg.p - 1, cfg), vmat::Error);
    EXPECT_THROW((void)vmat::run_trade(panel, panel.rows() - cfg.d, cfg), vmat::Error);
    EXPECT_NO_THROW((void)vmat::run_trade(panel, cfg.L + cfg.p, cfg));
}

TEST(RunTrade, CausalUnderTruncation) {
    const auto& panel = default_panel();
    std::mt19937_64 rng(1);
    for (Method m : vmat::all_methods()) {
        const auto cfg = config_for(m);
        std::uniform_int_distribution<std::size_t> pick(cfg.warmup(), panel.rows() - cfg.d - 1);
        for (int rep = 0; rep < 5; ++rep) {
            const std::size_t t = pick(rng);
            const auto full = vmat::run_trade(panel, t, cfg);
            const auto cut = vmat::run_trade(panel.truncated(t + cfg.d + 1), t, cfg);
            EXPECT_TRUE(full == cut) << vmat::to_string(m) << " t=" << t;
        }
    }
}

TEST(RunTrade, ExitedEarlyImpliesProfit) {
    const auto& panel = default_panel();
    for (Method m : {Method::Coint, Method::CointAR, Method::VMAT}) {
        const auto cfg = config_for(m);
        const auto report = vmat::run_backtest(panel, cfg, {cfg.warmup(), cfg.warmup() + 200});
        for (const auto& d : report.decisions) {
            if (d.exited_early) {
                EXPECT_GT(d.pl, 0.0);
            }
            if (d.delta == 0) {
                EXPECT_EQ(d.pl, 0.0);
            } else {
                EXPECT_NEAR(d.weights.lpNorm<1>(), 1.0, 1e-10);
            }
        }
    }
}

TEST(RunBacktest, IndependentAndDeterministic) {
    const auto& panel = default_panel();
    auto cfg = config_for(Method::VMATCV);
    const vmat::EvalRange range{cfg.warmup(), cfg.warmup() + 40};
    const auto serial = vmat::run_backtest(panel, cfg, range, 1);
    const auto parallel = vmat::run_backtest(panel, cfg, range, 3);
    ASSERT_EQ(serial.decisions.size(), 40U);
    for (std::size_t i = 0; i < 40; ++i) {
        EXPECT_TRUE(serial.decisions[i] == parallel.decisions[i]);
        EXPECT_TRUE(serial.decisions[i] == vmat::run_trade(panel, range.begin + i, cfg));
    }
    EXPECT_EQ(serial.pl_mean, parallel.pl_mean);
    EXPECT_EQ(serial.pl_se, parallel.pl_se);
    EXPECT_NEAR(serial.pl_mean * 40.0, serial.cumulative_pl.back(), 1e-12);
}

TEST(RunBacktest, ExtremeAlphaNeverTrades) {
    const auto& panel = default_panel();
    auto cfg = config_for(Method::CointAR);
    cfg.alpha = 1.0 - 1e-12;
    const auto report = vmat::run_backtest(panel, cfg, {cfg.warmup(), cfg.warmup() + 100});
    EXPECT_EQ(report.signal_rate, 0.0);
    EXPECT_EQ(report.pl_mean, 0.0);
    EXPECT_EQ(report.profit_rate, 0.0);
    EXPECT_EQ(report.max_drawdown, 0.0);
}

TEST(RunBacktest, DefaultRangeStartsAtWarmup) {
    const auto& panel = default_panel();
    const StrategyConfig cfg;
    const auto range = vmat::default_eval_range(panel, cfg);
    EXPECT_EQ(range.begin, cfg.warmup());
    EXPECT_EQ(range.end, panel.rows() - cfg.d);
    EXPECT_THROW((void)vmat::run_backtest(panel, cfg, {10, 20}), vmat::Error);
}

// Statistical run on the default synthetic pair over 1000 evaluation days.
TEST(RunBacktest, CointArOnSyntheticPair) {
    const auto& panel = default_panel();
    const auto cfg = config_for(Method::CointAR);
    const auto report = vmat::run_backtest(panel, cfg, {cfg.warmup(), cfg.warmup() + 1000});
    EXPECT_GT(report.pl_mean, 0.0);
    EXPECT_GT(report.pl_mean / report.pl_se, 2.0);
    EXPECT_GT(report.control_rate, 0.90);
}

TEST(MetricTable, ExactFixture) {
    vmat::BacktestReport r;
    r.pl_mean = 0.0004549;
    r.pl_se = 0.0002745;
    r.signal_rate = 0.778;
    r.control_rate = 0.764;
    r.profit_rate = 0.611;
    r.max_drawdown = -0.053;
    const std::string expected =
        "method    PL mean        (se)     SR     CR     PR  maxDraw\n"
        "Coint     0.04549   (0.02745)   77.8   76.4   61.1     -5.3\n";
    EXPECT_EQ(vmat::metric_table({{"Coint", r}}), expected);
}

TEST(MetricTable, RowsInGivenOrder) {
    vmat::BacktestReport a;
    vmat::BacktestReport b;
    b.pl_mean = 0.01;
    const auto text = vmat::metric_table({{"zeta", a}, {"alpha", b}});
    EXPECT_LT(text.find("zeta"), text.find("alpha"));
    EXPECT_NE(text.find("    1 "), std::string::npos);
}

TEST(DecisionCsv, RoundTrip) {
    const auto& panel = default_panel();
    const auto cfg = config_for(Method::VMAT);
    const auto report = vmat::run_backtest(panel, cfg, {cfg.warmup(), cfg.warmup() + 60});
    vmat::testing::TempDir dir("bt");
    vmat::write_decisions_csv(report, panel, dir.path() / "d.csv");
    vmat::write_cumulative_csv(report, panel, dir.path() / "c.csv");
    const auto rows = vmat::read_decisions_csv(dir.path() / "d.csv");
    ASSERT_EQ(rows.size(), report.decisions.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& d = report.decisions[i];
        EXPECT_EQ(rows[i].t, d.time_index);
        EXPECT_EQ(rows[i].date, panel.timestamps()[d.time_index]);
        EXPECT_EQ(rows[i].delta, d.delta);
        EXPECT_EQ(rows[i].l, d.bail_offset);
        EXPECT_EQ(rows[i].pl, d.pl);
        EXPECT_EQ(rows[i].y, d.y_now);
        EXPECT_EQ(rows[i].long_threshold.has_value(), d.thresholds.has_value());
        if (d.thresholds) {
            EXPECT_EQ(*rows[i].short_threshold, d.thresholds->short_threshold);
        }
        EXPECT_EQ(rows[i].lambda, d.lambda);
    }
    const auto cumulative = vmat::testing::slurp(dir.path() / "c.csv");
    EXPECT_EQ(cumulative.rfind("t,date,pl,cumulative_pl\n", 0), 0U);
}

TEST(TwoSampleT, Formula) {
    vmat::BacktestReport a;
    vmat::BacktestReport b;
    a.pl_mean = 0.5;
    a.pl_se = 0.3;
    b.pl_mean = 0.1;
    b.pl_se = 0.4;
    EXPECT_NEAR(vmat::two_sample_t(a, b), 0.4 / 0.5, 1e-15);
}

}  // namespace
