#pragma once

#include <stdexcept>
#include <string>

namespace afav {

// Error taxonomy shared by the library and the CLI. The CLI maps each kind
// to a distinct exit code.
enum class ErrorKind {
    Syntax,         // malformed machine/language file (carries a line number)
    Structural,     // dimension mismatch, column-sum violation
    Parameter,      // bad argument (epsilon out of range, invalid polynomial, ...)
    Configuration,  // missing transition during execution
    Resource,       // path/memory budget exceeded
    Precision,      // interval too wide to proceed (division by interval containing 0)
    Serialization,  // machine not representable in the text format
    Io,             // file not readable/writable
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message
                                      : std::move(message)),
          kind_(kind), line_(line) {}

    ErrorKind kind() const { return kind_; }
    int line() const { return line_; }

private:
    ErrorKind kind_;
    int line_;
};

[[noreturn]] inline void raise(ErrorKind kind, std::string message, int line = 0) {
    throw Error(kind, std::move(message), line);
}

} // namespace afav
