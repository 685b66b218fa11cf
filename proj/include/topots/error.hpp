#pragma once

#include <stdexcept>
#include <string>

namespace topots {

/// Error category. The numeric values double as CLI exit codes.
enum class ErrorKind : int {
    usage = 1,
    data = 2,
    numerical = 3,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void throw_usage(const std::string& message) {
    throw Error(ErrorKind::usage, message);
}

[[noreturn]] inline void throw_data(const std::string& message) {
    throw Error(ErrorKind::data, message);
}

[[noreturn]] inline void throw_numerical(const std::string& message) {
    throw Error(ErrorKind::numerical, message);
}

}  // namespace topots
