#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fransim {

enum class ErrorCode {
    InvalidParameter,
    Topology,
    UndefinedVisibility,
    DegenerateNormalization,
    DegenerateDistribution,
    TooCoarse,
    InvalidScan,
    GateInoperative,
    InsufficientStatistics,
    Config,
};

std::string_view to_string(ErrorCode code) noexcept;

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

}  // namespace fransim
