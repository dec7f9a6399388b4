#include "fransim/error.hpp"

namespace fransim {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidParameter: return "invalid-parameter";
    case ErrorCode::Topology: return "topology";
    case ErrorCode::UndefinedVisibility: return "undefined-visibility";
    case ErrorCode::DegenerateNormalization: return "degenerate-normalization";
    case ErrorCode::DegenerateDistribution: return "degenerate-distribution";
    case ErrorCode::TooCoarse: return "too-coarse";
    case ErrorCode::InvalidScan: return "invalid-scan";
    case ErrorCode::GateInoperative: return "gate-inoperative";
    case ErrorCode::InsufficientStatistics: return "insufficient-statistics";
    case ErrorCode::Config: return "config";
    }
    return "unknown";
}

}  // namespace fransim
