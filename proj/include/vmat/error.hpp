#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vmat {

enum class ErrorCode {
    InvalidArgument,
    ParseError,
    NonPositivePrice,
    InsufficientData,
    InsufficientHistory,
    RankDeficient,
    DegenerateSeries,
    DegenerateDirection,
    NonFiniteInput,
    NonFiniteForecast,
    OutOfRange,
    Io,
};

[[nodiscard]] std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so callers
/// (the backtester in particular) can map degeneracies to a no-trade decision.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace vmat
