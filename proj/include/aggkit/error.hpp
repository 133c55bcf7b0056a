#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace aggkit {

enum class ErrorCode {
    DimensionMismatch,
    DegenerateLine,
    AffinelyDependentBasis,
    NotInAffineHull,
    NotInConvexHull,
    UnknownFeature,
    MissingSingleton,
    MissingData,
    IntransitivityDetected,
    DegenerateLambda,
    MultipleRankClasses,
    NotABelief,
    NotStationary,
    OracleRefused,
    MinimalAgreementViolated,
    ResidualTooLarge,
    ProfileConstructionFailed,
    ConstantUtility,
    UnsatisfiablePolicy,
    TooLarge,
    PreconditionFailed,
    InvalidInput,
};

std::string_view to_string(ErrorCode code);

/// Base exception for every library failure; `code()` identifies the contract breached.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), message_(what)
    {}

    ErrorCode code() const noexcept { return code_; }
    /// The description without the code prefix.
    const std::string& message() const noexcept { return message_; }

private:
    ErrorCode code_;
    std::string message_;
};

} // namespace aggkit
