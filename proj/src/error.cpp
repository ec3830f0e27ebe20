#include "vmat/error.hpp"

namespace vmat {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::NonPositivePrice: return "NonPositivePrice";
        case ErrorCode::InsufficientData: return "InsufficientData";
        case ErrorCode::InsufficientHistory: return "InsufficientHistory";
        case ErrorCode::RankDeficient: return "RankDeficient";
        case ErrorCode::DegenerateSeries: return "DegenerateSeries";
        case ErrorCode::DegenerateDirection: return "DegenerateDirection";
        case ErrorCode::NonFiniteInput: return "NonFiniteInput";
        case ErrorCode::NonFiniteForecast: return "NonFiniteForecast";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

}  // namespace vmat
