#include "vmat/backtester.hpp"

#include "vmat/ar_forecast.hpp"
#include "vmat/error.hpp"
#include "vmat/lambda_select.hpp"
#include "vmat/weight_solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

namespace vmat {

bool operator==(const TradeDecision& a, const TradeDecision& b) {
    const bool same_thresholds =
        a.thresholds.has_value() == b.thresholds.has_value() &&
        (!a.thresholds || (a.thresholds->long_threshold == b.thresholds->long_threshold &&
                           a.thresholds->short_threshold == b.thresholds->short_threshold &&
                           a.thresholds->method == b.thresholds->method));
    return a.time_index == b.time_index && a.weights.size() == b.weights.size() &&
           (a.weights.size() == 0 || a.weights == b.weights) && a.y_now == b.y_now &&
           same_thresholds && a.delta == b.delta && a.bail_offset == b.bail_offset &&
           a.exited_early == b.exited_early && a.pl == b.pl && a.lambda == b.lambda &&
           a.diagnostic == b.diagnostic;
}

EvalRange default_eval_range(const PricePanel& panel, const StrategyConfig& cfg) {
    const std::size_t end = panel.rows() > cfg.d ? panel.rows() - cfg.d : 0;
    return {std::min(cfg.warmup(), end), end};
}

void settle(TradeDecision& decision, std::span<const double> future) {
    decision.bail_offset.reset();
    decision.exited_early = false;
    decision.pl = 0.0;
    if (decision.delta == 0 || future.empty()) return;
    const double delta = decision.delta;
    for (std::size_t l = 1; l <= future.size(); ++l) {
        if (delta * (future[l - 1] - decision.y_now) > 0.0) {
            decision.bail_offset = l;
            decision.exited_early = true;
            decision.pl = delta * (future[l - 1] - decision.y_now);
            return;
        }
    }
    decision.pl = delta * (future.back() - decision.y_now);
}

namespace {

double resolve_lambda(const PricePanel& panel, std::size_t t, const StrategyConfig& cfg,
                      const Eigen::MatrixXd& window, std::string& diagnostic) {
    switch (cfg.effective_lambda_mode()) {
        case LambdaMode::Fixed:
            return cfg.lambda;
        case LambdaMode::CV:
            try {
                return select_cv(panel, t, cfg.lambda_grid, cfg.cv_lookback, cfg).chosen_lambda;
            } catch (const Error& e) {
                if (e.code() != ErrorCode::InsufficientHistory) throw;
                diagnostic = "cv fallback to smallest lambda: " + std::string(e.what());
                return cfg.lambda_grid.values().front();
            }
        case LambdaMode::Tame: {
            const auto factory = [&](double lambda) {
                return TradeoffObjective(lambda, window, cfg.p);
            };
            const auto outcome =
                select_tame(factory, cfg.lambda_grid, cfg.effective_lb_lag(), cfg.lb_alpha,
                            cfg.effective_init(panel.assets()), cfg.n_steps);
            if (outcome.none_adequate) diagnostic = "tame: no lambda passed Ljung-Box";
            return outcome.chosen_lambda;
        }
    }
    return cfg.lambda;
}

TradeDecision trade_impl(const PricePanel& panel, std::size_t t, const StrategyConfig& cfg,
                         std::optional<double> fixed_lambda) {
    cfg.validate();
    if (t < cfg.L + cfg.p || t + cfg.d >= panel.rows()) {
        throw Error(ErrorCode::OutOfRange,
                    "trade at t=" + std::to_string(t) + " needs L + p <= t < T - d");
    }

    TradeDecision decision;
    decision.time_index = t;
    const Eigen::MatrixXd window = log_window({&panel, t, cfg.L});
    try {
        PortfolioWeights weights;
        switch (fixed_lambda ? Method::VMAT : cfg.method) {
            case Method::Coint:
            case Method::CointAR:
                weights = to_unit_l1(coint_weights(window));
                break;
            case Method::MaxVarAR:
                weights = to_unit_l1(maxvar_weights(window));
                break;
            case Method::VMAT:
            case Method::VMATCV:
            case Method::VMATTame: {
                const double lambda = fixed_lambda ? *fixed_lambda
                                                   : resolve_lambda(panel, t, cfg, window,
                                                                    decision.diagnostic);
                decision.lambda = lambda;
                const TradeoffObjective obj(lambda, window, cfg.p);
                weights = vmat_descent(obj, cfg.effective_init(panel.assets()), cfg.n_steps);
                break;
            }
        }
        decision.weights = weights.w;

        const Eigen::VectorXd y = window * weights.w;
        const std::span<const double> series(y.data(), static_cast<std::size_t>(y.size()));
        decision.y_now = series.back();

        ThresholdPair thresholds;
        if (!fixed_lambda && cfg.method == Method::Coint) {
            thresholds = stationary_thresholds(series, cfg.alpha, cfg.d, cfg.quantile_convention);
        } else {
            const auto model = fit_ar(series, cfg.p);
            thresholds = ar_thresholds(forecast(model, series, cfg.d), cfg.alpha);
        }
        decision.thresholds = thresholds;
        decision.delta = make_signal(decision.y_now, thresholds).delta;
    } catch (const Error& e) {
        decision.delta = 0;
        decision.thresholds.reset();
        if (!decision.diagnostic.empty()) decision.diagnostic += "; ";
        decision.diagnostic += e.what();
        return decision;
    }

    if (decision.delta != 0) {
        std::vector<double> future(cfg.d);
        for (std::size_t l = 1; l <= cfg.d; ++l) {
            future[l - 1] =
                panel.log_prices().row(static_cast<Eigen::Index>(t + l)).dot(decision.weights);
        }
        settle(decision, future);
    }
    return decision;
}

}  // namespace

TradeDecision run_trade(const PricePanel& panel, std::size_t t, const StrategyConfig& cfg) {
    return trade_impl(panel, t, cfg, std::nullopt);
}

TradeDecision run_vmat_trade(const PricePanel& panel, std::size_t t, const StrategyConfig& cfg,
                             double lambda) {
    return trade_impl(panel, t, cfg, lambda);
}

BacktestReport summarize(std::vector<TradeDecision> decisions) {
    BacktestReport report;
    const std::size_t n = decisions.size();
    if (n == 0) {
        throw Error(ErrorCode::InvalidArgument, "no decisions to summarise");
    }
    std::size_t participating = 0;
    std::size_t controlled = 0;
    std::size_t profitable = 0;
    double worst = 0.0;
    double running = 0.0;
    report.cumulative_pl.reserve(n);
    for (const auto& d : decisions) {
        running += d.pl;
        report.cumulative_pl.push_back(running);
        if (d.pl > 0.0) ++profitable;
        if (d.delta != 0) {
            ++participating;
            if (d.bail_offset) ++controlled;
            worst = std::min(worst, d.pl);
        }
    }
    const double nd = static_cast<double>(n);
    report.pl_mean = running / nd;
    if (n > 1) {
        double ss = 0.0;
        for (const auto& d : decisions) ss += (d.pl - report.pl_mean) * (d.pl - report.pl_mean);
        report.pl_se = std::sqrt(ss / (nd - 1.0)) / std::sqrt(nd);
    }
    report.signal_rate = static_cast<double>(participating) / nd;
    report.control_rate =
        participating ? static_cast<double>(controlled) / static_cast<double>(participating) : 0.0;
    report.profit_rate = static_cast<double>(profitable) / nd;
    report.max_drawdown = worst;
    report.decisions = std::move(decisions);
    return report;
}

BacktestReport run_backtest(const PricePanel& panel, const StrategyConfig& cfg, EvalRange range,
                            unsigned workers) {
    cfg.validate();
    if (range.begin >= range.end) {
        throw Error(ErrorCode::InvalidArgument, "empty evaluation range");
    }
    if (range.begin < cfg.L + cfg.p || range.end + cfg.d > panel.rows()) {
        throw Error(ErrorCode::OutOfRange,
                    "evaluation range must lie within [L + p, T - d) = [" +
                        std::to_string(cfg.L + cfg.p) + ", " +
                        std::to_string(panel.rows() > cfg.d ? panel.rows() - cfg.d : 0) + ")");
    }
    const std::size_t count = range.end - range.begin;
    std::vector<TradeDecision> decisions(count);
    const unsigned threads = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(count)));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) decisions[i] = run_trade(panel, range.begin + i, cfg);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::atomic<bool> failed{false};
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned w = 0; w < threads; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < count && !failed; i = next++) {
                    try {
                        decisions[i] = run_trade(panel, range.begin + i, cfg);
                    } catch (...) {
                        if (!failed.exchange(true)) failure = std::current_exception();
                    }
                }
            });
        }
        for (auto& th : pool) th.join();
        if (failure) std::rethrow_exception(failure);
    }
    return summarize(std::move(decisions));
}

namespace {

std::string format_number(const char* fmt, double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), fmt, value);
    return buf;
}

std::string pad_left(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string pad_right(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

}  // namespace

std::string metric_table(const std::vector<std::pair<std::string, BacktestReport>>& reports) {
    std::size_t name_width = 6;
    for (const auto& [name, _] : reports) name_width = std::max(name_width, name.size());

    std::ostringstream out;
    out << pad_right("method", name_width) << pad_left("PL mean", 11) << pad_left("(se)", 12)
        << pad_left("SR", 7) << pad_left("CR", 7) << pad_left("PR", 7) << pad_left("maxDraw", 9)
        << '\n';
    for (const auto& [name, r] : reports) {
        out << pad_right(name, name_width) << pad_left(format_number("%.4g", 100.0 * r.pl_mean), 11)
            << pad_left("(" + format_number("%.4g", 100.0 * r.pl_se) + ")", 12)
            << pad_left(format_number("%.3g", 100.0 * r.signal_rate), 7)
            << pad_left(format_number("%.3g", 100.0 * r.control_rate), 7)
            << pad_left(format_number("%.3g", 100.0 * r.profit_rate), 7)
            << pad_left(format_number("%.2g", 100.0 * r.max_drawdown), 9) << '\n';
    }
    return out.str();
}

void write_decisions_csv(const BacktestReport& report, const PricePanel& panel,
                         const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    out << "t,date,delta,l,exited_early,pl,y,long_threshold,short_threshold,lambda\n";
    for (const auto& d : report.decisions) {
        out << d.time_index << ',' << panel.timestamps().at(d.time_index) << ',' << d.delta << ','
            << (d.bail_offset ? std::to_string(*d.bail_offset) : std::string()) << ','
            << (d.exited_early ? 1 : 0) << ',' << format_number("%.17g", d.pl) << ','
            << format_number("%.17g", d.y_now) << ','
            << (d.thresholds ? format_number("%.17g", d.thresholds->long_threshold) : std::string())
            << ','
            << (d.thresholds ? format_number("%.17g", d.thresholds->short_threshold) : std::string())
            << ',' << format_number("%.17g", d.lambda) << '\n';
    }
}

void write_cumulative_csv(const BacktestReport& report, const PricePanel& panel,
                          const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    out << "t,date,pl,cumulative_pl\n";
    for (std::size_t i = 0; i < report.decisions.size(); ++i) {
        const auto& d = report.decisions[i];
        out << d.time_index << ',' << panel.timestamps().at(d.time_index) << ','
            << format_number("%.17g", d.pl) << ','
            << format_number("%.17g", report.cumulative_pl[i]) << '\n';
    }
}

std::vector<DecisionRecord> read_decisions_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    std::string line;
    std::getline(in, line);
    if (line != "t,date,delta,l,exited_early,pl,y,long_threshold,short_threshold,lambda") {
        throw Error(ErrorCode::ParseError, path.string() + ": unexpected decision CSV header");
    }
    std::vector<DecisionRecord> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (!line.empty() && line.back() == ',') f.emplace_back();
        if (f.size() != 10) throw Error(ErrorCode::ParseError, "bad decision row: " + line);
        DecisionRecord r;
        r.t = std::stoul(f[0]);
        r.date = f[1];
        r.delta = std::stoi(f[2]);
        if (!f[3].empty()) r.l = std::stoul(f[3]);
        r.exited_early = f[4] == "1";
        r.pl = std::stod(f[5]);
        r.y = std::stod(f[6]);
        if (!f[7].empty()) r.long_threshold = std::stod(f[7]);
        if (!f[8].empty()) r.short_threshold = std::stod(f[8]);
        r.lambda = std::stod(f[9]);
        out.push_back(std::move(r));
    }
    return out;
}

double two_sample_t(const BacktestReport& a, const BacktestReport& b) {
    const double se = std::sqrt(a.pl_se * a.pl_se + b.pl_se * b.pl_se);
    if (!(se > 0.0)) {
        return a.pl_mean == b.pl_mean ? 0.0
                                      : std::copysign(std::numeric_limits<double>::infinity(),
                                                      a.pl_mean - b.pl_mean);
    }
    return (a.pl_mean - b.pl_mean) / se;
}

}  // namespace vmat
