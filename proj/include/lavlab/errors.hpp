#pragma once

#include <stdexcept>
#include <string>

namespace lavlab {

enum class ErrorKind {
    argument,
    domain,
    lookup,
    singular_point,
    contract,
    infeasible,
    unsupported,
    parse,
    io,
    internal,
};

[[nodiscard]] const char* to_string(ErrorKind kind) noexcept;

/// Base exception for every failure raised by the library. The kind maps
/// one-to-one onto the C API status codes.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Raised when no compensating acceleration set fits inside the slow set.
/// Carries the smallest slope threshold above which the construction is
/// feasible.
class InfeasibleError : public Error {
public:
    InfeasibleError(const std::string& message, double minimal_k)
        : Error(ErrorKind::infeasible, message), minimal_k_(minimal_k) {}

    [[nodiscard]] double minimal_k() const noexcept { return minimal_k_; }

private:
    double minimal_k_;
};

}  // namespace lavlab
