#pragma once

#include <stdexcept>
#include <string>

namespace hsd {

/// Failure categories. The CLI maps these onto process exit codes.
enum class ErrorKind {
    Input,          // malformed or inconsistent input
    NonSolvable,    // mathematical non-solvability (forbidden regime, determinant gate)
    Numerical,      // a numerical tolerance check failed
    NonElliptic,    // symbol vanishes (or nearly) on the grid
    Resolution,     // grid too coarse or window too small for the requested computation
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace hsd
