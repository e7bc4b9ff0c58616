#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace entlab {

enum class ErrorKind {
    NoDecay,
    ToleranceUnreachable,
    ScanBudgetExceeded,
    InfeasibleLevel,
    LengthMismatch,
    InvalidP,
    InvalidArgument,
};

constexpr std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::NoDecay: return "NoDecay";
    case ErrorKind::ToleranceUnreachable: return "ToleranceUnreachable";
    case ErrorKind::ScanBudgetExceeded: return "ScanBudgetExceeded";
    case ErrorKind::InfeasibleLevel: return "InfeasibleLevel";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::InvalidP: return "InvalidP";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

/// Every failure raised by the library. `kind()` separates numeric failures
/// (the computation could not be certified) from rejected inputs.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
    {
    }

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

    [[nodiscard]] bool is_numeric() const noexcept
    {
        return kind_ == ErrorKind::NoDecay || kind_ == ErrorKind::ToleranceUnreachable ||
               kind_ == ErrorKind::ScanBudgetExceeded || kind_ == ErrorKind::InfeasibleLevel;
    }

private:
    ErrorKind kind_;
};

inline void require(bool condition, const std::string& message)
{
    if (!condition) {
        throw Error(ErrorKind::InvalidArgument, message);
    }
}

} // namespace entlab
