#pragma once

#include "vmat/market_data.hpp"
#include "vmat/signal_engine.hpp"
#include "vmat/strategy_config.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace vmat {

struct TradeDecision {
    std::size_t time_index = 0;
    Eigen::VectorXd weights;  ///< unit L1; empty when no weights could be formed
    double y_now = 0.0;
    std::optional<ThresholdPair> thresholds;
    int delta = 0;
    std::optional<std::size_t> bail_offset;  ///< first l in [1, d] with profit
    bool exited_early = false;
    double pl = 0.0;
    double lambda = 0.0;  ///< lambda used by VMAT methods, 0 otherwise
    std::string diagnostic;

    friend bool operator==(const TradeDecision& a, const TradeDecision& b);
};

struct BacktestReport {
    double pl_mean = 0.0;
    double pl_se = 0.0;
    double signal_rate = 0.0;
    double control_rate = 0.0;
    double profit_rate = 0.0;
    double max_drawdown = 0.0;
    std::vector<TradeDecision> decisions;
    std::vector<double> cumulative_pl;
};

struct EvalRange {
    std::size_t begin = 0;
    std::size_t end = 0;  ///< exclusive
};

/// Default evaluation range: from cfg.warmup() to T - d.
[[nodiscard]] EvalRange default_eval_range(const PricePanel& panel, const StrategyConfig& cfg);

/// Greedy bail: exit at the first l in 1..d with delta * (y_{t+l} - y_t) > 0, else at d.
/// `future` holds y_{t+1}..y_{t+d}.
void settle(TradeDecision& decision, std::span<const double> future);

/// One independent trade at time t. Reads panel rows <= t + d only.
[[nodiscard]] TradeDecision run_trade(const PricePanel& panel, std::size_t t,
                                      const StrategyConfig& cfg);

/// VMAT trade at time t with lambda fixed (used by cross-validation).
[[nodiscard]] TradeDecision run_vmat_trade(const PricePanel& panel, std::size_t t,
                                           const StrategyConfig& cfg, double lambda);

/// Aggregates metrics over already-settled decisions.
[[nodiscard]] BacktestReport summarize(std::vector<TradeDecision> decisions);

[[nodiscard]] BacktestReport run_backtest(const PricePanel& panel, const StrategyConfig& cfg,
                                          EvalRange range, unsigned workers = 1);

/// Columns: method, PL mean, (se), SR, CR, PR, maxDraw; every value in percent.
[[nodiscard]] std::string metric_table(
    const std::vector<std::pair<std::string, BacktestReport>>& reports);

/// Per-decision CSV: t,date,delta,l,exited_early,pl,y,long_threshold,short_threshold,lambda
void write_decisions_csv(const BacktestReport& report, const PricePanel& panel,
                         const std::filesystem::path& path);

/// Cumulative PL CSV: t,date,pl,cumulative_pl
void write_cumulative_csv(const BacktestReport& report, const PricePanel& panel,
                          const std::filesystem::path& path);

struct DecisionRecord {
    std::size_t t = 0;
    std::string date;
    int delta = 0;
    std::optional<std::size_t> l;
    bool exited_early = false;
    double pl = 0.0;
    double y = 0.0;
    std::optional<double> long_threshold;
    std::optional<double> short_threshold;
    double lambda = 0.0;
};

[[nodiscard]] std::vector<DecisionRecord> read_decisions_csv(const std::filesystem::path& path);

/// Welch two-sample t statistic (mean_a - mean_b) / sqrt(se_a^2 + se_b^2).
[[nodiscard]] double two_sample_t(const BacktestReport& a, const BacktestReport& b);

}  // namespace vmat
