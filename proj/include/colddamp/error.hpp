#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace colddamp {

enum class ErrorCode {
    InvalidConfig,
    NonPositiveParameter,
    GammaOutOfRange,
    AntiDamping,
    UncertaintyViolation,
    InconsistentParameterization,
    ZeroFrequency,
    NeedsPhysicalCavity,
    GainExceedsQ,
    ReactiveFeedbackNotAllowed,
    InvalidGrid,
    InsufficientGridCoverage,
    NonIntegrableTail,
    PureReactiveFeedback,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::NonPositiveParameter: return "NonPositiveParameter";
    case ErrorCode::GammaOutOfRange: return "GammaOutOfRange";
    case ErrorCode::AntiDamping: return "AntiDamping";
    case ErrorCode::UncertaintyViolation: return "UncertaintyViolation";
    case ErrorCode::InconsistentParameterization: return "InconsistentParameterization";
    case ErrorCode::ZeroFrequency: return "ZeroFrequency";
    case ErrorCode::NeedsPhysicalCavity: return "NeedsPhysicalCavity";
    case ErrorCode::GainExceedsQ: return "GainExceedsQ";
    case ErrorCode::ReactiveFeedbackNotAllowed: return "ReactiveFeedbackNotAllowed";
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::InsufficientGridCoverage: return "InsufficientGridCoverage";
    case ErrorCode::NonIntegrableTail: return "NonIntegrableTail";
    case ErrorCode::PureReactiveFeedback: return "PureReactiveFeedback";
    }
    return "Unknown";
}

// Approximation-domain violations: the inputs are valid but the requested
// closed form does not apply to them.
constexpr bool is_domain_error(ErrorCode code) noexcept {
    return code == ErrorCode::GainExceedsQ || code == ErrorCode::ReactiveFeedbackNotAllowed ||
           code == ErrorCode::NeedsPhysicalCavity || code == ErrorCode::PureReactiveFeedback ||
           code == ErrorCode::InsufficientGridCoverage || code == ErrorCode::NonIntegrableTail;
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

namespace detail {

inline void require(bool ok, ErrorCode code, const std::string& what) {
    if (!ok) throw Error(code, what);
}

inline void require_positive(double value, const char* name) {
    // also rejects NaN
    if (!(value > 0.0))
        throw Error(ErrorCode::NonPositiveParameter, std::string(name) + " must be > 0");
}

inline void require_nonzero_frequency(double omega) {
    if (omega == 0.0)
        throw Error(ErrorCode::ZeroFrequency, "response is singular at Omega = 0");
}

} // namespace detail
} // namespace colddamp
