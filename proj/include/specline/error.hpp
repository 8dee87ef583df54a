#pragma once

#include <stdexcept>
#include <string>

namespace specline {

enum class ErrorKind {
    InvalidArgument,
    DimensionMismatch,
    NoConvergence,   // eigensolver iteration cap
    NotPsd,
    SingularPencil,
    InteriorPoint,   // full-rank block-Toeplitz input
    NonUnimodular,
    NotConverged,    // SDP solver iteration cap
    Diverged,
    NoLineSpectrum,
    Precondition,
    Io,
};

const char* to_string(ErrorKind kind) noexcept;

/// Error raised by every routine in the library. The kind lets callers
/// (notably the CLI) map failures to exit codes without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace specline
