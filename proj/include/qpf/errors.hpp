#pragma once

#include <stdexcept>
#include <string>

namespace qpf {

enum class errc {
    invalid_input,
    invalid_period,
    invalid_range,
    insufficient_data,
    alignment,
    singular_fit,
    sign_domain,
    infeasible,
    parse,
    io,
};

/// All library failures surface as qpf::Error with a machine-checkable code.
class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& message) {
    throw Error(code, message);
}

} // namespace qpf
