#pragma once

#include <stdexcept>
#include <string>

namespace quenchstage {

enum class ErrorCode {
    InvalidArgument,
    Config,
    Numerical,
    InadmissibleTransfer,
    RunawayStage,
    Io,
    Internal,
};

// Single exception type for the core; the C API maps `code()` onto status values.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, const std::string& what) {
    if (!cond) fail(ErrorCode::InvalidArgument, what);
}

}  // namespace quenchstage
