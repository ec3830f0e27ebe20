#pragma once

#include "vmat/signal_engine.hpp"
#include "vmat/weight_solver.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vmat {

enum class Method { Coint, CointAR, MaxVarAR, VMAT, VMATCV, VMATTame };
enum class LambdaMode { Fixed, CV, Tame };

[[nodiscard]] std::string_view to_string(Method m) noexcept;
[[nodiscard]] std::string_view to_string(LambdaMode m) noexcept;
[[nodiscard]] Method parse_method(std::string_view text);
[[nodiscard]] LambdaMode parse_lambda_mode(std::string_view text);
[[nodiscard]] QuantileConvention parse_quantile_convention(std::string_view text);
[[nodiscard]] InitMethod parse_init(std::string_view text);

[[nodiscard]] const std::vector<Method>& all_methods();

/// Strictly ascending lambda candidates, all >= 1.
class LambdaGrid {
public:
    LambdaGrid();
    explicit LambdaGrid(std::vector<double> values);

    [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }

private:
    std::vector<double> values_;
};

struct StrategyConfig {
    Method method = Method::VMAT;
    std::size_t d = 7;
    std::size_t p = 10;
    std::size_t L = 60;
    double alpha = 0.999;

    double lambda = 1.0;
    /// Only consulted for Method::VMAT; VMATCV and VMATTame imply their mode.
    LambdaMode lambda_mode = LambdaMode::Fixed;
    LambdaGrid lambda_grid;
    std::size_t cv_lookback = 10;
    std::size_t lb_lag = 0;  ///< 0 means 2p
    double lb_alpha = 0.05;

    std::optional<InitMethod> init;  ///< unset: Coint for k = 2, MaxVar otherwise
    int n_steps = 1;
    QuantileConvention quantile_convention = QuantileConvention::Literal;

    /// Throws InvalidArgument unless d >= 1, p >= 1, L >= p + 10, 0 < alpha < 1.
    void validate() const;

    [[nodiscard]] LambdaMode effective_lambda_mode() const noexcept;
    [[nodiscard]] std::size_t effective_lb_lag() const noexcept { return lb_lag == 0 ? 2 * p : lb_lag; }
    [[nodiscard]] InitMethod effective_init(std::size_t assets) const noexcept {
        return init.value_or(default_init(assets));
    }
    /// First index at which every method, including CV selection, can trade.
    [[nodiscard]] std::size_t warmup() const noexcept;
};

}  // namespace vmat
