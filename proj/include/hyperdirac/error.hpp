#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hyperdirac {

enum class ErrorCode {
    // input / precondition failures
    InvalidArgument,
    DegenerateLattice,
    InvalidCutoff,
    MalformedInput,
    NonIntegralLinking,
    InconsistentDiagram,
    ParityViolation,
    DeltaTrivial,
    EllTooLarge,
    InsufficientSweep,
    // failures of the computation itself
    NoPositiveEigenvalueBelowCutoff,
    ResolutionExceeded,
    IncompleteSpectrum,
    AmbiguousGrowth,
};

constexpr std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DegenerateLattice: return "DegenerateLattice";
    case ErrorCode::InvalidCutoff: return "InvalidCutoff";
    case ErrorCode::MalformedInput: return "MalformedInput";
    case ErrorCode::NonIntegralLinking: return "NonIntegralLinking";
    case ErrorCode::InconsistentDiagram: return "InconsistentDiagram";
    case ErrorCode::ParityViolation: return "ParityViolation";
    case ErrorCode::DeltaTrivial: return "DeltaTrivial";
    case ErrorCode::EllTooLarge: return "EllTooLarge";
    case ErrorCode::InsufficientSweep: return "InsufficientSweep";
    case ErrorCode::NoPositiveEigenvalueBelowCutoff: return "NoPositiveEigenvalueBelowCutoff";
    case ErrorCode::ResolutionExceeded: return "ResolutionExceeded";
    case ErrorCode::IncompleteSpectrum: return "IncompleteSpectrum";
    case ErrorCode::AmbiguousGrowth: return "AmbiguousGrowth";
    }
    return "Unknown";
}

/// True for codes that signal bad input rather than a failed computation.
constexpr bool is_validation_error(ErrorCode code) {
    switch (code) {
    case ErrorCode::NoPositiveEigenvalueBelowCutoff:
    case ErrorCode::ResolutionExceeded:
    case ErrorCode::IncompleteSpectrum:
    case ErrorCode::AmbiguousGrowth:
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

inline void require(bool condition, ErrorCode code, const std::string& what) {
    if (!condition) throw Error(code, what);
}

} // namespace hyperdirac
