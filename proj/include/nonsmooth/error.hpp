#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nonsmooth {

enum class ErrorCode {
    DivisionByZero,
    Parse,
    InvalidArgument,
    DegenerateQuadratic,
    NoRealFixedPoint,
    OutOfDomain,
    AccumulationPoint,
    NotModelGerm,
    Unsupported,
    BadInterval,
    NotCommutatorClass,
    DegenerateSequence,
    BracketOutsideWindow,
    NotFixed,
    SearchExhausted,
    EmptyDisplacement,
    EmptyGridDomain,
    Degenerate,
};

inline std::string_view to_string(ErrorCode c) {
    switch (c) {
        case ErrorCode::DivisionByZero: return "DivisionByZero";
        case ErrorCode::Parse: return "Parse";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::DegenerateQuadratic: return "DegenerateQuadratic";
        case ErrorCode::NoRealFixedPoint: return "NoRealFixedPoint";
        case ErrorCode::OutOfDomain: return "OutOfDomain";
        case ErrorCode::AccumulationPoint: return "AccumulationPoint";
        case ErrorCode::NotModelGerm: return "NotModelGerm";
        case ErrorCode::Unsupported: return "Unsupported";
        case ErrorCode::BadInterval: return "BadInterval";
        case ErrorCode::NotCommutatorClass: return "NotCommutatorClass";
        case ErrorCode::DegenerateSequence: return "DegenerateSequence";
        case ErrorCode::BracketOutsideWindow: return "BracketOutsideWindow";
        case ErrorCode::NotFixed: return "NotFixed";
        case ErrorCode::SearchExhausted: return "SearchExhausted";
        case ErrorCode::EmptyDisplacement: return "EmptyDisplacement";
        case ErrorCode::EmptyGridDomain: return "EmptyGridDomain";
        case ErrorCode::Degenerate: return "Degenerate";
    }
    return "Unknown";
}

/// Every failure in the library is reported as an Error carrying a code.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace nonsmooth
