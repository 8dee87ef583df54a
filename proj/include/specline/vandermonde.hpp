#pragma once

#include <string>
#include <vector>

#include "specline/block_toeplitz.hpp"

namespace specline {

struct SpectralAtom {
    double theta = 0.0;  // in (-pi, pi]
    CMatrix q;           // m x m Hermitian PSD density
};

/// Line spectrum sum_l delta(theta - theta_l) Q_l.
struct LineSpectrum {
    int m = 2;
    std::vector<SpectralAtom> atoms;
    /// Non-fatal diagnostics attached by decompose(), e.g. "marginal rank".
    std::vector<std::string> warnings;

    size_t size() const noexcept { return atoms.size(); }
    std::vector<double> frequencies() const;
    bool has_warning(const std::string& tag) const;
};

inline constexpr const char* kWarnMarginalRank = "marginal rank";
inline constexpr const char* kWarnUniqueness = "uniqueness not guaranteed";

/// Vandermonde decomposition T(sigma) = sum_l G(theta_l) Q_l G(theta_l)^* of
/// a PSD singular block-Toeplitz matrix.
///
/// Steps: rank factorization T = V V^*; the shift relation V_{-0} = V_{-n} U
/// is solved as the pencil (V_{-n}^* V_{-0}, V_{-n}^* V_{-n}); pencil
/// eigenvalues are projected radially onto the unit circle, clustered by
/// circular distance (single linkage within tol.delta_theta), and each
/// cluster contributes Q_l = (V_0 E_l)(V_0 E_l)^* with E_l an orthonormal
/// basis of the cluster's eigenvectors. Atoms come back sorted by theta.
///
/// A rank-zero input yields an empty spectrum. Throws Error with kind
/// NotPsd, InteriorPoint (full rank), SingularPencil, NonUnimodular or
/// InvalidArgument (n < 1).
LineSpectrum decompose(const CovarianceSequence& sigma, const Tolerances& tol = kDefaultTolerances);

/// Sigma_k = sum_l e^{i k theta_l} Q_l for k = 0..n.
CovarianceSequence reconstruct(const LineSpectrum& spec, int n);

/// ||V_{-0} - V_{-n} U||_F / max(1, ||V_{-0}||_F) for V with block size m.
double unitary_residual(const CMatrix& v, const CMatrix& u, int m = 2);

/// max_k ||Sigma_k - reconstruct(spec)_k||_F.
double reconstruction_residual(const CovarianceSequence& sigma, const LineSpectrum& spec);

}  // namespace specline
