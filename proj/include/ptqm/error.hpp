#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ptqm {

enum class ErrorCode {
    InvalidArgument,
    NonSquare,
    DimensionMismatch,
    FrameMismatch,
    IndexOutOfRange,
    IllConditioned,
    NotPhysical,
    StepTooLarge,
    ConvergenceFailure,
    Singular,
    DegenerateBasis,
    PositivityViolation,
};

constexpr std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::NonSquare: return "NonSquare";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::FrameMismatch: return "FrameMismatch";
        case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::IllConditioned: return "IllConditioned";
        case ErrorCode::NotPhysical: return "NotPhysical";
        case ErrorCode::StepTooLarge: return "StepTooLarge";
        case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
        case ErrorCode::Singular: return "Singular";
        case ErrorCode::DegenerateBasis: return "DegenerateBasis";
        case ErrorCode::PositivityViolation: return "PositivityViolation";
    }
    return "Unknown";
}

/// Errors caused by bad input, as opposed to numerical breakdown on valid input.
constexpr bool is_validation_error(ErrorCode code) {
    switch (code) {
        case ErrorCode::ConvergenceFailure:
        case ErrorCode::Singular:
        case ErrorCode::DegenerateBasis:
        case ErrorCode::PositivityViolation:
            return false;
        default:
            return true;
    }
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace ptqm
