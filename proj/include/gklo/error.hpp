#pragma once

#include <stdexcept>
#include <string>

namespace gklo {

enum class ErrorCode {
    DivisionByZero,
    PoleHit,
    ShiftOnNonNodeVar,
    RepeatedPole,
    NonLinearFactor,
    VarTableFull,
    ExponentOverflow,
    Parse,
    FixedNode,
    SelfLoop,
    MultiEdge,
    InvolutionMismatch,
    BadPositiveHalf,
    UnknownNode,
    DimMismatch,
    ContextMismatch,
    NotNegativeNode,
    IndexOutOfRange,
    WrongBranch,
    NotMinusculeContext,
    EmptyNode,
    InvalidArgument,
    Io,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace gklo
