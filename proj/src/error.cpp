#include "tdlc/error.hpp"

namespace tdlc {

const char* error_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Undefined: return "Undefined";
        case ErrorKind::WindowOverflow: return "WindowOverflow";
        case ErrorKind::TreeMismatch: return "TreeMismatch";
        case ErrorKind::InconsistentPair: return "InconsistentPair";
        case ErrorKind::NotInjective: return "NotInjective";
        case ErrorKind::InvalidCode: return "InvalidCode";
        case ErrorKind::PrecisionExhausted: return "PrecisionExhausted";
        case ErrorKind::BudgetExceeded: return "BudgetExceeded";
        case ErrorKind::NotUnique: return "NotUnique";
        case ErrorKind::NotFound: return "NotFound";
        case ErrorKind::NestedChoiceFailed: return "NestedChoiceFailed";
        case ErrorKind::NotConvex: return "NotConvex";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::ParseError: return "ParseError";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& detail)
    : std::runtime_error(std::string(error_name(kind)) + ": " + detail), kind_(kind), detail_(detail) {}

}  // namespace tdlc
