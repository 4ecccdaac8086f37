#include "volsel/error.hpp"

namespace volsel {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::ZeroRow: return "ZeroRow";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::RankError: return "RankError";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::Degenerate: return "Degenerate";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::InfeasiblePrefix: return "InfeasiblePrefix";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::NonRectangular: return "NonRectangular";
    case ErrorKind::NonFinite: return "NonFinite";
    }
    return "Unknown";
}

} // namespace volsel
