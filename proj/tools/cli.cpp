#include "cli.hpp"

#include "vmat/backtester.hpp"
#include "vmat/error.hpp"
#include "vmat/market_data.hpp"
#include "vmat/synthgen.hpp"
#include "vmat/weight_solver.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace vmat::cli {

std::vector<double> default_sweep_values(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::Lambda: return {1, 3, 5, 7, 10, 13, 20, 30};
        case SweepAxis::Alpha: return {0.4, 0.65, 0.8, 0.9, 0.95, 0.99};
        case SweepAxis::P: return {5, 7, 10, 13, 17, 21, 25, 30};
        case SweepAxis::L: return {30, 40, 50, 60, 70, 80};
    }
    return {};
}

std::string_view to_string(SweepAxis axis) noexcept {
    switch (axis) {
        case SweepAxis::Lambda: return "lambda";
        case SweepAxis::Alpha: return "alpha";
        case SweepAxis::P: return "p";
        case SweepAxis::L: return "L";
    }
    return "?";
}

namespace {

SweepAxis parse_axis(const std::string& text) {
    if (text == "lambda") return SweepAxis::Lambda;
    if (text == "alpha") return SweepAxis::Alpha;
    if (text == "p") return SweepAxis::P;
    if (text == "L") return SweepAxis::L;
    throw Error(ErrorCode::InvalidArgument, "sweep axis must be one of lambda, alpha, p, L");
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), f, v);
    return buf;
}

PricePanel load_data(const RunConfig& config) {
    if (config.data.empty()) {
        throw Error(ErrorCode::InvalidArgument, "--data is required");
    }
    return load_csv(config.data);
}

void ensure_out_dir(const RunConfig& config) {
    std::error_code ec;
    std::filesystem::create_directories(config.out, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create " + config.out.string() + ": " + ec.message());
}

EvalRange eval_range_for(const PricePanel& panel, const RunConfig& config,
                         const StrategyConfig& cfg) {
    auto range = default_eval_range(panel, cfg);
    if (config.eval_start) range.begin = *config.eval_start;
    if (config.eval_end) range.end = *config.eval_end;
    return range;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw Error(ErrorCode::Io, "cannot write " + path.string());
    f << text;
}

std::string range_note(const EvalRange& range, const PricePanel& panel) {
    std::ostringstream s;
    s << "evaluation days: " << (range.end - range.begin) << " [t=" << range.begin << " "
      << panel.timestamps().at(range.begin) << " .. t=" << range.end - 1 << " "
      << panel.timestamps().at(range.end - 1) << "]\n";
    return s.str();
}

std::string config_note(const StrategyConfig& cfg) {
    std::ostringstream s;
    s << "d=" << cfg.d << " p=" << cfg.p << " L=" << cfg.L << " alpha=" << cfg.alpha
      << " lambda=" << cfg.lambda << " quantile-convention=" << to_string(cfg.quantile_convention)
      << "\n";
    return s.str();
}

}  // namespace

void cmd_backtest(const RunConfig& config, std::ostream& out) {
    const auto panel = load_data(config);
    const auto& cfg = config.strategy;
    cfg.validate();
    ensure_out_dir(config);
    const auto range = eval_range_for(panel, config, cfg);
    const auto report = run_backtest(panel, cfg, range, config.workers);
    const std::string name(to_string(cfg.method));
    const std::string table = config_note(cfg) + range_note(range, panel) + metric_table({{name, report}});
    write_text(config.out / "backtest_table.txt", table);
    write_decisions_csv(report, panel, config.out / (name + "_decisions.csv"));
    write_cumulative_csv(report, panel, config.out / (name + "_cumulative.csv"));
    out << table;
}

void cmd_compare(const RunConfig& config, std::ostream& out) {
    const auto panel = load_data(config);
    config.strategy.validate();
    ensure_out_dir(config);
    const auto range = eval_range_for(panel, config, config.strategy);

    std::vector<std::pair<std::string, BacktestReport>> rows;
    for (Method method : all_methods()) {
        StrategyConfig cfg = config.strategy;
        cfg.method = method;
        if (method == Method::VMAT) cfg.lambda_mode = LambdaMode::Fixed;
        auto report = run_backtest(panel, cfg, range, config.workers);
        const std::string name(to_string(method));
        write_decisions_csv(report, panel, config.out / (name + "_decisions.csv"));
        write_cumulative_csv(report, panel, config.out / (name + "_cumulative.csv"));
        rows.emplace_back(name, std::move(report));
    }
    const std::string table =
        config_note(config.strategy) + range_note(range, panel) + metric_table(rows);
    write_text(config.out / "compare_table.txt", table);
    out << table;
}

void cmd_sweep(const RunConfig& config, std::ostream& out) {
    const auto panel = load_data(config);
    ensure_out_dir(config);
    const auto values =
        config.sweep_values.empty() ? default_sweep_values(config.sweep_axis) : config.sweep_values;
    if (values.empty()) throw Error(ErrorCode::InvalidArgument, "sweep needs at least one value");

    StrategyConfig base = config.strategy;
    if (!config.d_given) base.d = 3;
    if (base.method != Method::VMATCV && base.method != Method::VMATTame) {
        base.method = Method::VMAT;
    }

    std::vector<StrategyConfig> configs;
    for (double v : values) {
        StrategyConfig cfg = base;
        switch (config.sweep_axis) {
            case SweepAxis::Lambda:
                cfg.method = Method::VMAT;
                cfg.lambda_mode = LambdaMode::Fixed;
                cfg.lambda = v;
                break;
            case SweepAxis::Alpha: cfg.alpha = v; break;
            case SweepAxis::P: cfg.p = static_cast<std::size_t>(std::lround(v)); break;
            case SweepAxis::L: cfg.L = static_cast<std::size_t>(std::lround(v)); break;
        }
        cfg.validate();
        configs.push_back(cfg);
    }
    // Shared evaluation days: the latest warm-up across the swept configurations.
    EvalRange range = eval_range_for(panel, config, configs.front());
    if (!config.eval_start) {
        for (const auto& cfg : configs) range.begin = std::max(range.begin, cfg.warmup());
    }

    const std::string axis(to_string(config.sweep_axis));
    std::ostringstream csv;
    csv << "axis,value,pl_mean,pl_se,ci_low,ci_high,signal_rate,control_rate,profit_rate,max_drawdown\n";
    std::ostringstream table;
    table << config_note(base) << range_note(range, panel);
    table << axis << " sweep (" << to_string(base.method) << "), PL in %, 95% CI = mean +/- 1.96 se\n";
    table << "   value     PL mean        95% CI             SR     CR     PR  maxDraw\n";

    std::vector<double> means;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const auto report = run_backtest(panel, configs[i], range, config.workers);
        const double lo = report.pl_mean - 1.96 * report.pl_se;
        const double hi = report.pl_mean + 1.96 * report.pl_se;
        means.push_back(report.pl_mean);
        csv << axis << ',' << fmt("%.17g", values[i]) << ',' << fmt("%.17g", report.pl_mean) << ','
            << fmt("%.17g", report.pl_se) << ',' << fmt("%.17g", lo) << ',' << fmt("%.17g", hi)
            << ',' << fmt("%.17g", report.signal_rate) << ',' << fmt("%.17g", report.control_rate)
            << ',' << fmt("%.17g", report.profit_rate) << ',' << fmt("%.17g", report.max_drawdown)
            << '\n';
        char line[160];
        std::snprintf(line, sizeof(line), "%8g  %10.4g  [%9.4g, %9.4g]  %5.3g  %5.3g  %5.3g  %7.2g\n",
                      values[i], 100 * report.pl_mean, 100 * lo, 100 * hi,
                      100 * report.signal_rate, 100 * report.control_rate,
                      100 * report.profit_rate, 100 * report.max_drawdown);
        table << line;
    }

    const auto best = static_cast<std::size_t>(std::max_element(means.begin(), means.end()) - means.begin());
    const auto worst = static_cast<std::size_t>(std::min_element(means.begin(), means.end()) - means.begin());
    const auto interior = [&](std::size_t i) { return i > 0 && i + 1 < means.size(); };
    table << "shape: max PL at " << axis << "=" << values[best] << ", min PL at " << axis << "="
          << values[worst];
    if (interior(best)) {
        table << "; interior maximum (upside-down U)";
    } else if (interior(worst)) {
        table << "; interior minimum (U)";
    } else {
        table << "; extremes at the grid ends (monotone-like)";
    }
    table << "; PL range " << fmt("%.4g", 100 * (means[best] - means[worst])) << "%\n";

    write_text(config.out / ("sweep_" + axis + ".csv"), csv.str());
    write_text(config.out / ("sweep_" + axis + ".txt"), table.str());
    out << table.str();
}

void cmd_trace(const RunConfig& config, std::ostream& out) {
    const auto panel = load_data(config);
    const auto& cfg = config.strategy;
    ensure_out_dir(config);
    if (panel.rows() <= cfg.L) {
        throw Error(ErrorCode::InsufficientData, "panel shorter than the formation window");
    }
    const std::size_t t = config.eval_end ? *config.eval_end : panel.rows() - 1;
    const TradeoffObjective obj(cfg.lambda, log_window({&panel, t, cfg.L}), cfg.p);
    constexpr int kSteps = 10;

    std::ostringstream csv;
    csv << "init,step";
    for (std::size_t j = 0; j < panel.assets(); ++j) csv << ",w" << j + 1;
    csv << ",objective\n";

    std::ostringstream summary;
    summary << "trace at t=" << t << " (" << panel.timestamps()[t] << "), lambda=" << cfg.lambda
            << ", p=" << cfg.p << ", L=" << cfg.L << "\n";
    std::vector<Eigen::VectorXd> finals;
    for (InitMethod init : {InitMethod::Coint, InitMethod::MaxVar}) {
        const auto result = vmat_descent(obj, init, kSteps);
        const auto& steps = result.provenance.step_weights;
        double drift = 0.0;
        for (std::size_t s = 0; s < steps.size(); ++s) {
            const Eigen::VectorXd w1 = steps[s] / steps[s].lpNorm<1>();
            csv << to_string(init) << ',' << s + 1;
            for (Eigen::Index j = 0; j < w1.size(); ++j) csv << ',' << fmt("%.17g", w1(j));
            csv << ',' << fmt("%.17g", result.provenance.objective_trace[2 * s + 2]) << '\n';
            if (s > 0) drift = std::max(drift, (steps[s] - steps[0]).norm());
        }
        summary << to_string(init) << ": w1 after step 1 = "
                << fmt("%.9f", steps.front()(0) / steps.front().lpNorm<1>())
                << ", after step " << kSteps << " = "
                << fmt("%.9f", steps.back()(0) / steps.back().lpNorm<1>())
                << ", max |w_s - w_1| (L2) = " << fmt("%.3g", drift) << "\n";
        finals.push_back(steps.back());
    }
    summary << "angle between final directions: " << fmt("%.3g", line_angle(finals[0], finals[1]))
            << " rad\n";
    write_text(config.out / "trace.csv", csv.str());
    out << summary.str();
}

void cmd_synth(const RunConfig& config, std::ostream& out) {
    const auto& o = config.synth;
    SynthSpec spec;
    spec.k = o.k;
    spec.T = o.T;
    spec.seed = config.seed;
    spec.phi = o.phi;
    spec.sigma_spread = o.sigma_spread;
    spec.sigma_trend = o.sigma_trend;
    spec.hedge_vector = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(o.k));
    if (o.hedge.empty()) {
        spec.hedge_vector(0) = 1.0;
        spec.hedge_vector(1) = -1.0;
    } else {
        if (o.hedge.size() != o.k) throw Error(ErrorCode::InvalidArgument, "--hedge needs k values");
        for (std::size_t j = 0; j < o.k; ++j) spec.hedge_vector(static_cast<Eigen::Index>(j)) = o.hedge[j];
    }
    if (o.factor_sigma > 0.0) {
        ExtraFactor f;
        f.loading = trend_loading(spec);
        f.sigma = o.factor_sigma;
        f.momentum = o.factor_momentum;
        f.reversion = o.factor_reversion;
        f.lag = o.factor_lag;
        spec.extra_factors.push_back(f);
    }
    const auto panel = generate(spec);
    std::filesystem::path path = config.out;
    if (path.extension() != ".csv") {
        ensure_out_dir(config);
        path /= "synthetic.csv";
    } else if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    write_csv(panel, path);
    out << "wrote " << panel.rows() << " x " << panel.assets() << " panel to " << path.string() << "\n";
}

namespace {

struct RawOptions {
    std::string method = "VMAT";
    std::string lambda_mode = "fixed";
    std::vector<double> lambda_grid;
    std::string quantile = "literal";
    std::string init;
    std::string axis = "lambda";
    std::size_t lb_lag = 0;
};

void add_strategy_options(CLI::App* sub, RunConfig& c, RawOptions& raw) {
    auto& s = c.strategy;
    sub->add_option("--data", c.data, "Wide price CSV(s): date,T1,...,Tk")->check(CLI::ExistingFile);
    sub->add_option("--method", raw.method, "Coint|CointAR|MaxVarAR|VMAT|VMATCV|VMATTame");
    sub->add_option_function<std::size_t>("--d", [&](std::size_t v) { s.d = v; c.d_given = true; },
                                           "Trading period (days)");
    sub->add_option("--p", s.p, "AR lag order");
    sub->add_option("--L", s.L, "Formation length");
    sub->add_option("--alpha", s.alpha, "Profit probability level");
    sub->add_option("--lambda", s.lambda, "Fixed lambda (>= 1)");
    sub->add_option("--lambda-mode", raw.lambda_mode, "fixed|cv|tame");
    sub->add_option("--lambda-grid", raw.lambda_grid, "Comma-separated lambda candidates")->delimiter(',');
    sub->add_option("--cv-lookback", s.cv_lookback, "Trading times used by CV selection");
    sub->add_option("--lb-lag", raw.lb_lag, "Ljung-Box lag (default 2p)");
    sub->add_option("--lb-alpha", s.lb_alpha, "Ljung-Box significance");
    sub->add_option("--coint-quantile-convention", raw.quantile, "literal|upper-tail");
    sub->add_option("--eval-start", c.eval_start, "First evaluation index");
    sub->add_option("--eval-end", c.eval_end, "One past the last evaluation index");
    sub->add_option("--n-steps", s.n_steps, "Coordinate descent steps");
    sub->add_option("--init", raw.init, "coint|maxvar (default: coint for k=2)");
    sub->add_option("--workers", c.workers, "Worker threads");
    sub->add_option("--seed", c.seed, "Random seed");
    sub->add_option("--out", c.out, "Output directory");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"VMAT multivariate pair-trading research engine"};
    app.require_subcommand(1);
    app.set_config("--config", "", "INI/TOML config file (flags override it)");

    RunConfig config;
    RawOptions raw;

    auto* backtest = app.add_subcommand("backtest", "Backtest one strategy");
    auto* compare = app.add_subcommand("compare", "Backtest all six strategies side by side");
    auto* sweep = app.add_subcommand("sweep", "Sweep one VMAT parameter");
    auto* trace = app.add_subcommand("trace", "Coordinate-descent convergence trace");
    auto* synth = app.add_subcommand("synth", "Write a synthetic price panel");
    for (auto* sub : {backtest, compare, sweep, trace, synth}) add_strategy_options(sub, config, raw);

    sweep->add_option("--sweep-axis", raw.axis, "lambda|alpha|p|L");
    sweep->add_option("--sweep-values", config.sweep_values, "Comma-separated values")->delimiter(',');

    auto& so = config.synth;
    synth->add_option("--k", so.k, "Asset count");
    synth->add_option("--T", so.T, "Rows");
    synth->add_option("--hedge", so.hedge, "Hedge vector, comma-separated")->delimiter(',');
    synth->add_option("--phi", so.phi, "Spread AR(1) coefficient");
    synth->add_option("--sigma-spread", so.sigma_spread, "Spread innovation sd");
    synth->add_option("--sigma-trend", so.sigma_trend, "Common trend innovation sd");
    synth->add_option("--factor-sigma", so.factor_sigma, "Extra momentum factor innovation sd (0 = none)");
    synth->add_option("--factor-momentum", so.factor_momentum, "Extra factor increment AR(1) coefficient");
    synth->add_option("--factor-reversion", so.factor_reversion, "Extra factor level AR(1) coefficient (1 = integrated)");
    synth->add_option("--factor-lag", so.factor_lag, "Lag of the extra factor level recursion");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        auto& s = config.strategy;
        s.method = parse_method(raw.method);
        s.lambda_mode = parse_lambda_mode(raw.lambda_mode);
        if (!raw.lambda_grid.empty()) s.lambda_grid = LambdaGrid(raw.lambda_grid);
        s.quantile_convention = parse_quantile_convention(raw.quantile);
        if (!raw.init.empty()) s.init = parse_init(raw.init);
        s.lb_lag = raw.lb_lag;
        config.sweep_axis = parse_axis(raw.axis);
        if (config.workers == 0) config.workers = 1;

        if (backtest->parsed()) {
            config.command = Command::Backtest;
            cmd_backtest(config, out);
        } else if (compare->parsed()) {
            config.command = Command::Compare;
            cmd_compare(config, out);
        } else if (sweep->parsed()) {
            config.command = Command::Sweep;
            cmd_sweep(config, out);
        } else if (trace->parsed()) {
            config.command = Command::Trace;
            cmd_trace(config, out);
        } else {
            config.command = Command::Synth;
            cmd_synth(config, out);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace vmat::cli
