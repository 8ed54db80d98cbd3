#pragma once

#include <stdexcept>
#include <string>

namespace mix {

enum class ErrorCode {
    invalid_argument,
    dimension_mismatch,
    empty_input,
    parse,
    io,
    numeric,
    unsupported,
};

// All recoverable failures in the core surface as mix::Error; the C API
// layer maps the code to a mix_status and the message to mix_last_error().
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace mix
