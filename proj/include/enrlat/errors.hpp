#pragma once

#include <stdexcept>
#include <string>

namespace enrlat {

enum class ErrorCode {
    LatticeMismatch,
    BadGram,
    BadArgument,
    DuplicateEdge,
    SelfLoop,
    SingularMatrix,
    NotDefinite,
    NotRootGenerated,
    NotMinusTwo,
    NotIsotropic,
    BadPairing,
    TooLong,
    WrongLength,
    O1Mukai,
    NotDivisible,
    EmptyCandidates,
    NotFound,
    NotUnique,
    SchemaError,
    OrbitCapExceeded,
    CertificateFailure,
    EmptyEnumeration,
    InternalInconsistency,
};

const char* error_code_name(ErrorCode c);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

} // namespace enrlat
