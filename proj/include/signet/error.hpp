#pragma once

#include <stdexcept>
#include <string>

namespace signet {

/// Coarse failure categories; the CLI maps each to a distinct exit code.
enum class ErrorCategory {
    Usage,         // bad arguments / malformed request
    Parse,         // unreadable input file
    Precondition,  // structural precondition of an operation violated
    Numeric,       // iterative method failed to converge
};

enum class ErrorCode {
    SelfLoop,
    DuplicateEdge,
    NodeOutOfRange,
    NonpositiveWeight,
    DisconnectedGraph,
    DirectedGraphUnsupported,
    PositiveSubgraphDisconnected,
    AlphaOutOfRange,
    ProbabilityNotNormalized,
    GaugeRequestedOnUnbalancedGraph,
    NotSymmetric,
    NoConvergence,
    NotInConvergenceRegime,
    EigenvalueOneNotSimple,
    StepConditionViolated,
    ParameterRangeViolation,
    MonitorsMissing,
    ParseError,
    Precondition,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string message)
        : std::runtime_error(std::move(message)), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

    ErrorCategory category() const noexcept {
        switch (code_) {
            case ErrorCode::ParseError:
                return ErrorCategory::Parse;
            case ErrorCode::NoConvergence:
                return ErrorCategory::Numeric;
            default:
                return ErrorCategory::Precondition;
        }
    }

private:
    ErrorCode code_;
};

const char* error_code_name(ErrorCode code);

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace signet
