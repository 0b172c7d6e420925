#pragma once

#include <stdexcept>
#include <string>

namespace heis {

enum class ErrorCode {
    InvalidArgument,
    OnVerticalAxis,
    PsiOutOfRange,
    InversionAtOrigin,
    CharacteristicPoint,
    DegenerateDerivative,
    DerivOracleFailure,
    QuadratureNonConvergence,
    PointNotOnFoliation,
    ZeroDenominator,
    UnknownMap,
    SpecParse,
    KOutOfRange,
    NotLeafConstant,
    Internal,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

} // namespace heis
