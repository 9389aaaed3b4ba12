#pragma once

#include <stdexcept>
#include <string>

namespace tdlc {

enum class ErrorKind {
    Undefined,
    WindowOverflow,
    TreeMismatch,
    InconsistentPair,
    NotInjective,
    InvalidCode,
    PrecisionExhausted,
    BudgetExceeded,
    NotUnique,
    NotFound,
    NestedChoiceFailed,
    NotConvex,
    InvalidArgument,
    ParseError,
};

const char* error_name(ErrorKind kind);

// Domain error carrying a stable name; the CLI maps ParseError to exit code 2
// and every other kind to exit code 1.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& detail);

    ErrorKind kind() const { return kind_; }
    const std::string& detail() const { return detail_; }

private:
    ErrorKind kind_;
    std::string detail_;
};

}  // namespace tdlc
