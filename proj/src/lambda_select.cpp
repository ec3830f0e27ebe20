#include "vmat/lambda_select.hpp"

#include "vmat/backtester.hpp"
#include "vmat/error.hpp"
#include "vmat/stats.hpp"

#include <algorithm>
#include <cmath>

namespace vmat {

CvSchedule cv_schedule(std::size_t t, const StrategyConfig& cfg, std::size_t lookback) {
    const std::size_t earliest = cfg.L + cfg.p;
    if (lookback < 1 || t < earliest + cfg.d + lookback) {
        throw Error(ErrorCode::InsufficientHistory,
                    "cross-validation at t=" + std::to_string(t) + " needs t >= " +
                        std::to_string(earliest + cfg.d + lookback));
    }
    return {t - cfg.d - lookback, t - cfg.d - 1};
}

SelectionOutcome select_cv(const PricePanel& panel, std::size_t t, const LambdaGrid& grid,
                           std::size_t lookback, const StrategyConfig& cfg) {
    SelectionOutcome out;
    out.method = LambdaMode::CV;
    if (grid.size() == 1) {
        out.chosen_lambda = grid.values().front();
        out.diagnostics.push_back({out.chosen_lambda, 0.0, "single candidate"});
        return out;
    }
    const auto schedule = cv_schedule(t, cfg, lookback);

    double best = -std::numeric_limits<double>::infinity();
    for (double lambda : grid.values()) {
        double total = 0.0;
        std::size_t skipped = 0;
        for (std::size_t s = schedule.first; s <= schedule.last; ++s) {
            const auto trade = run_vmat_trade(panel, s, cfg, lambda);
            total += trade.pl;
            if (!trade.diagnostic.empty()) ++skipped;
        }
        const double score = total / static_cast<double>(lookback);
        out.diagnostics.push_back(
            {lambda, score, skipped ? std::to_string(skipped) + " degenerate trades" : ""});
        // Strict improvement only, so ties stay with the smaller lambda.
        if (score > best) {
            best = score;
            out.chosen_lambda = lambda;
        }
    }
    return out;
}

SelectionOutcome select_tame(const ObjectiveFactory& factory, const LambdaGrid& grid,
                             std::size_t lb_lag, double significance, InitMethod init,
                             int n_steps) {
    SelectionOutcome out;
    out.method = LambdaMode::Tame;
    const auto& values = grid.values();
    for (auto it = values.rbegin(); it != values.rend(); ++it) {
        const double lambda = *it;
        try {
            const auto obj = factory(lambda);
            const auto weights = vmat_descent(obj, init, n_steps);
            const auto model = fit_direction(obj, weights.w);
            const auto lb = stats::ljung_box(model.residuals, lb_lag, obj.order());
            out.diagnostics.push_back({lambda, lb.p_value, ""});
            if (lb.p_value > significance) {
                out.chosen_lambda = lambda;
                return out;
            }
        } catch (const Error& e) {
            out.diagnostics.push_back({lambda, std::nan(""), e.what()});
        }
    }
    out.chosen_lambda = values.front();
    out.none_adequate = true;
    return out;
}

}  // namespace vmat
