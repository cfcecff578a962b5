#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mimoid {

// Precondition and domain failures raised by the library. Anything else that
// escapes (std::bad_alloc, Eigen assertions) is an internal error.
enum class ErrorKind {
    InvalidInput,
    Shape,
    Rank,
    Length,
    Window,
    Excitation,
    OrderDeficiency,
    AssumptionViolation,
    Stability,
    Structure,
    Sampling,
    CapExceeded,
    UndefinedLog,
    Config,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + " error: " + what), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidInput: return "invalid-input";
        case ErrorKind::Shape: return "shape";
        case ErrorKind::Rank: return "rank";
        case ErrorKind::Length: return "length";
        case ErrorKind::Window: return "window";
        case ErrorKind::Excitation: return "excitation";
        case ErrorKind::OrderDeficiency: return "order-deficiency";
        case ErrorKind::AssumptionViolation: return "assumption-violation";
        case ErrorKind::Stability: return "stability";
        case ErrorKind::Structure: return "structure";
        case ErrorKind::Sampling: return "sampling";
        case ErrorKind::CapExceeded: return "cap-exceeded";
        case ErrorKind::UndefinedLog: return "undefined-log";
        case ErrorKind::Config: return "config";
    }
    return "unknown";
}

} // namespace mimoid
