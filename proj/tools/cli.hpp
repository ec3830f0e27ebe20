#pragma once

#include "vmat/strategy_config.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace vmat::cli {

enum class Command { Backtest, Compare, Sweep, Trace, Synth };
enum class SweepAxis { Lambda, Alpha, P, L };

struct SynthOptions {
    std::size_t k = 2;
    std::size_t T = 1500;
    std::vector<double> hedge;  ///< empty: (1, -1, 0, ...)
    double phi = 0.9;
    double sigma_spread = 0.01;
    double sigma_trend = 0.02;
    double factor_sigma = 0.0;  ///< 0: no extra factor
    double factor_momentum = 0.0;
    double factor_reversion = 1.0;
    std::size_t factor_lag = 1;
};

struct RunConfig {
    Command command = Command::Backtest;
    std::vector<std::filesystem::path> data;
    StrategyConfig strategy;
    bool d_given = false;
    std::optional<std::size_t> eval_start;
    std::optional<std::size_t> eval_end;
    SweepAxis sweep_axis = SweepAxis::Lambda;
    std::vector<double> sweep_values;  ///< empty: the axis default grid
    std::filesystem::path out = "out";
    unsigned workers = 1;
    std::uint64_t seed = 42;
    SynthOptions synth;
};

[[nodiscard]] std::vector<double> default_sweep_values(SweepAxis axis);
[[nodiscard]] std::string_view to_string(SweepAxis axis) noexcept;

/// Parses argv-style arguments (without the program name) and runs the command.
/// Returns the process exit code; 0 iff no operation failed.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Individual commands, for callers that build RunConfig directly.
void cmd_backtest(const RunConfig& config, std::ostream& out);
void cmd_compare(const RunConfig& config, std::ostream& out);
void cmd_sweep(const RunConfig& config, std::ostream& out);
void cmd_trace(const RunConfig& config, std::ostream& out);
void cmd_synth(const RunConfig& config, std::ostream& out);

}  // namespace vmat::cli
