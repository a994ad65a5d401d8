#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace natcurve {

enum class ErrorCode {
    DegenerateFrame,
    DomainMismatch,
    WrongApparatusKind,
    UnliftablePath,
    VanishingLancret,
    InvalidSlope,
    ZeroSlopeParameter,
    EmptyDomain,
    GridTooSmall,
    GridMismatch,
    DegenerateFit,
    NotClosed,
    Inconclusive,
    InvalidArgument,
    Io,
    Parse,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::DegenerateFrame: return "DegenerateFrame";
    case ErrorCode::DomainMismatch: return "DomainMismatch";
    case ErrorCode::WrongApparatusKind: return "WrongApparatusKind";
    case ErrorCode::UnliftablePath: return "UnliftablePath";
    case ErrorCode::VanishingLancret: return "VanishingLancret";
    case ErrorCode::InvalidSlope: return "InvalidSlope";
    case ErrorCode::ZeroSlopeParameter: return "ZeroSlopeParameter";
    case ErrorCode::EmptyDomain: return "EmptyDomain";
    case ErrorCode::GridTooSmall: return "GridTooSmall";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::DegenerateFit: return "DegenerateFit";
    case ErrorCode::NotClosed: return "NotClosed";
    case ErrorCode::Inconclusive: return "Inconclusive";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Parse: return "Parse";
    }
    return "Unknown";
}

/// Every failure raised by the library. `code()` identifies the failure kind.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace natcurve
