#include "vmat/strategy_config.hpp"

#include "vmat/error.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <string>

namespace vmat {

namespace {

std::string lower(std::string_view text) {
    std::string s(text);
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == '_' || c == '-' || c == ' '; }),
            s.end());
    return s;
}

}  // namespace

std::string_view to_string(Method m) noexcept {
    switch (m) {
        case Method::Coint: return "Coint";
        case Method::CointAR: return "CointAR";
        case Method::MaxVarAR: return "MaxVarAR";
        case Method::VMAT: return "VMAT";
        case Method::VMATCV: return "VMATCV";
        case Method::VMATTame: return "VMATTame";
    }
    return "?";
}

std::string_view to_string(LambdaMode m) noexcept {
    switch (m) {
        case LambdaMode::Fixed: return "fixed";
        case LambdaMode::CV: return "cv";
        case LambdaMode::Tame: return "tame";
    }
    return "?";
}

Method parse_method(std::string_view text) {
    const auto s = lower(text);
    for (Method m : all_methods()) {
        if (lower(to_string(m)) == s) return m;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown method '" + std::string(text) + "'");
}

LambdaMode parse_lambda_mode(std::string_view text) {
    const auto s = lower(text);
    if (s == "fixed") return LambdaMode::Fixed;
    if (s == "cv") return LambdaMode::CV;
    if (s == "tame") return LambdaMode::Tame;
    throw Error(ErrorCode::InvalidArgument, "unknown lambda mode '" + std::string(text) + "'");
}

QuantileConvention parse_quantile_convention(std::string_view text) {
    const auto s = lower(text);
    if (s == "literal") return QuantileConvention::Literal;
    if (s == "uppertail") return QuantileConvention::UpperTail;
    throw Error(ErrorCode::InvalidArgument,
                "unknown quantile convention '" + std::string(text) + "'");
}

InitMethod parse_init(std::string_view text) {
    const auto s = lower(text);
    if (s == "coint") return InitMethod::Coint;
    if (s == "maxvar") return InitMethod::MaxVar;
    throw Error(ErrorCode::InvalidArgument, "unknown init method '" + std::string(text) + "'");
}

const std::vector<Method>& all_methods() {
    static const std::vector<Method> methods{Method::Coint, Method::CointAR,  Method::MaxVarAR,
                                             Method::VMAT,  Method::VMATCV,   Method::VMATTame};
    return methods;
}

LambdaGrid::LambdaGrid() : values_{1, 3, 5, 7, 10, 13, 20, 30} {}

LambdaGrid::LambdaGrid(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) {
        throw Error(ErrorCode::InvalidArgument, "lambda grid is empty");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i]) || values_[i] < 1.0) {
            throw Error(ErrorCode::InvalidArgument, "lambda grid values must be >= 1");
        }
        if (i > 0 && !(values_[i - 1] < values_[i])) {
            throw Error(ErrorCode::InvalidArgument, "lambda grid must be strictly ascending");
        }
    }
}

void StrategyConfig::validate() const {
    if (d < 1) throw Error(ErrorCode::InvalidArgument, "d must be >= 1");
    if (p < 1) throw Error(ErrorCode::InvalidArgument, "p must be >= 1");
    if (L < p + 10) throw Error(ErrorCode::InvalidArgument, "L must be >= p + 10");
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");
    if (!(lambda >= 1.0)) throw Error(ErrorCode::InvalidArgument, "lambda must be >= 1");
    if (n_steps < 1) throw Error(ErrorCode::InvalidArgument, "n_steps must be >= 1");
    if (cv_lookback < 1) throw Error(ErrorCode::InvalidArgument, "cv lookback must be >= 1");
    if (!(lb_alpha > 0.0 && lb_alpha < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "Ljung-Box significance must lie in (0, 1)");
    }
}

LambdaMode StrategyConfig::effective_lambda_mode() const noexcept {
    switch (method) {
        case Method::VMATCV: return LambdaMode::CV;
        case Method::VMATTame: return LambdaMode::Tame;
        case Method::VMAT: return lambda_mode;
        default: return LambdaMode::Fixed;
    }
}

std::size_t StrategyConfig::warmup() const noexcept {
    return L + p + d + cv_lookback;
}

}  // namespace vmat
