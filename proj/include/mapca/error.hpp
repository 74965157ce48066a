#pragma once

#include <stdexcept>
#include <string>

namespace mapca {

/// Failure categories. The CLI maps each one onto a fixed exit code.
enum class ErrorKind {
    invalid_argument,
    malformed_input,
    not_spd,
    dimension_mismatch,
    rank_deficient,
    isolated_vertex,
    constraint_violation,
    no_convergence,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, ErrorKind kind, const std::string& what) {
    if (!cond) fail(kind, what);
}

} // namespace mapca
