#pragma once

#include "vmat/market_data.hpp"
#include "vmat/strategy_config.hpp"
#include "vmat/weight_solver.hpp"

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace vmat {

struct CandidateDiagnostic {
    double lambda = 0.0;
    /// CV: mean realised PL over the lookback trades. Tame: Ljung-Box p-value.
    double score = 0.0;
    std::string note;
};

struct SelectionOutcome {
    double chosen_lambda = 1.0;
    LambdaMode method = LambdaMode::Fixed;
    std::vector<CandidateDiagnostic> diagnostics;
    bool none_adequate = false;  ///< Tame: no candidate passed the whiteness test
};

/// Trading times simulated by select_cv at time t: every trade completes by t - 1.
struct CvSchedule {
    std::size_t first = 0;
    std::size_t last = 0;  ///< inclusive
};
[[nodiscard]] CvSchedule cv_schedule(std::size_t t, const StrategyConfig& cfg, std::size_t lookback);

/**
 * Cross-validated lambda: for each candidate, trade VMAT with that fixed lambda at
 * the `lookback` most recent times whose holding period ends strictly before t,
 * and keep the candidate with the highest mean PL (ties to the smaller lambda).
 * Uses panel rows < t only.
 */
[[nodiscard]] SelectionOutcome select_cv(const PricePanel& panel, std::size_t t,
                                         const LambdaGrid& grid, std::size_t lookback,
                                         const StrategyConfig& cfg);

using ObjectiveFactory = std::function<TradeoffObjective(double lambda)>;

/**
 * Backward selection: walk the grid from the largest lambda down and accept the
 * first whose final AR residuals pass Ljung-Box (p-value > significance) with
 * fitted_params = p. Falls back to the smallest lambda when nothing passes.
 */
[[nodiscard]] SelectionOutcome select_tame(const ObjectiveFactory& factory, const LambdaGrid& grid,
                                           std::size_t lb_lag, double significance,
                                           InitMethod init, int n_steps = 1);

}  // namespace vmat
