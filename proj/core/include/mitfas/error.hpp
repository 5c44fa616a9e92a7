#pragma once

#include <stdexcept>
#include <string>

namespace mitfas {

/// Broad failure classes. The CLI maps these onto process exit codes.
enum class ErrorKind {
    Config,    // bad parameters or configuration
    Input,     // unreadable, malformed or inconsistent input data
    Runtime,   // failure while running an otherwise valid request
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error(ErrorKind::Config, what) {}
};

struct InputError : Error {
    explicit InputError(const std::string& what) : Error(ErrorKind::Input, what) {}
};

struct RuntimeError : Error {
    explicit RuntimeError(const std::string& what) : Error(ErrorKind::Runtime, what) {}
};

/// Throws the concrete error type for `kind` with a new message.
[[noreturn]] inline void throw_error(ErrorKind kind, const std::string& what) {
    switch (kind) {
        case ErrorKind::Config: throw ConfigError(what);
        case ErrorKind::Input: throw InputError(what);
        case ErrorKind::Runtime: break;
    }
    throw RuntimeError(what);
}

/// Exit status used by the command line tool for a given error class.
inline int exit_code_for(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Config: return 2;
        case ErrorKind::Input: return 3;
        case ErrorKind::Runtime: return 4;
    }
    return 4;
}

}  // namespace mitfas
