#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bazykin {

/// Machine-readable category carried by every domain error; the CLI reports
/// it verbatim in its error JSON.
enum class ErrorCode {
    InvalidInput,
    PositivityViolation,
    Divergence,
    InsufficientData,
    DegenerateParameter,
    NoHopfFound,
    NoConvergence,
    VerificationFailed,
    Io,
};

[[nodiscard]] std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

class InvalidInput : public Error {
public:
    explicit InvalidInput(const std::string& what) : Error(ErrorCode::InvalidInput, what) {}
};

class DegenerateParameter : public Error {
public:
    explicit DegenerateParameter(const std::string& what)
        : Error(ErrorCode::DegenerateParameter, what) {}
};

}  // namespace bazykin
