#pragma once

#include <stdexcept>
#include <string>

namespace ophom {

enum class ErrorCode {
    DimensionMismatch,
    CompositionNotZero,
    ArityMismatch,
    MissingDelta,
    NotRotational,
    NotMixed,
    TadpoleResidue,
    BoundExceeded,
    NoLieMap,
    NotMaurerCartan,
    Usage,
};

struct Error : std::runtime_error {
    ErrorCode code;
    Error(ErrorCode c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::CompositionNotZero: return "CompositionNotZero";
        case ErrorCode::ArityMismatch: return "ArityMismatch";
        case ErrorCode::MissingDelta: return "MissingDelta";
        case ErrorCode::NotRotational: return "NotRotational";
        case ErrorCode::NotMixed: return "NotMixed";
        case ErrorCode::TadpoleResidue: return "TadpoleResidue";
        case ErrorCode::BoundExceeded: return "BoundExceeded";
        case ErrorCode::NoLieMap: return "NoLieMap";
        case ErrorCode::NotMaurerCartan: return "NotMaurerCartan";
        case ErrorCode::Usage: return "Usage";
    }
    return "Unknown";
}

}  // namespace ophom
