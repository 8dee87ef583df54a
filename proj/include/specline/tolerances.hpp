#pragma once

namespace specline {

/// Numerical thresholds shared by the kernel, the decomposition and the
/// solvers. Every default used anywhere in the library lives here.
struct Tolerances {
    /// Eigenvalues at or below this are numerically zero.
    double epsilon_rank = 1e-4;
    /// Frequencies closer than this (circular distance, radians) are merged.
    double delta_theta = 1e-6;
    /// Maximum allowed | |lambda| - 1 | for pencil eigenvalues.
    double unimodular = 1e-6;
    /// Relative symmetrization / hermiticity tolerance.
    double hermitian = 1e-12;
    /// Cholesky whitening requires min eig(B) > pencil_pd * trace(B) / dim.
    double pencil_pd = 1e-10;
};

inline constexpr Tolerances kDefaultTolerances{};

}  // namespace specline
