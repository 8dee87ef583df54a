#pragma once

#include <vector>

#include "specline/linalg.hpp"

namespace specline {

/// Covariance data Sigma_0, ..., Sigma_n of m x m blocks. Sigma_{-k} is the
/// adjoint of Sigma_k and is never stored. Sigma_0 is kept Hermitian.
class CovarianceSequence {
public:
    CovarianceSequence() = default;
    /// Throws Error{InvalidArgument} if blocks is empty, m < 1, or any block
    /// is not m x m.
    CovarianceSequence(int m, std::vector<CMatrix> blocks);

    /// All-zero sequence with n + 1 blocks.
    static CovarianceSequence zero(int m, int n);

    int block_size() const noexcept { return m_; }
    int n() const noexcept { return static_cast<int>(blocks_.size()) - 1; }
    const std::vector<CMatrix>& blocks() const noexcept { return blocks_; }
    const CMatrix& operator[](int k) const { return blocks_.at(static_cast<size_t>(k)); }

private:
    int m_ = 2;
    std::vector<CMatrix> blocks_;
};

/// g(theta) = (1, e^{i theta}, ..., e^{i n theta}).
CVector steering_vector(double theta, int n);

/// G(theta) = g(theta) kron I_m, an m(n+1) x m matrix.
CMatrix steering_block(double theta, int n, int m = 2);

/// Wraps an angle into (-pi, pi].
double wrap_angle(double theta);

/// Circular distance min(|a - b|, 2 pi - |a - b|) on wrapped angles.
double circular_distance(double a, double b);

/// Hermitian block-Toeplitz matrix with block (j, k) = Sigma_{j-k} for
/// j >= k and Sigma_{k-j}^* otherwise.
HermitianMatrix assemble(const CovarianceSequence& sigma);

/// Raw-matrix assembly into a preallocated output, for the solver loop.
void assemble_into(const CovarianceSequence& sigma, CMatrix& out);

/// Orthogonal projection onto Hermitian block-Toeplitz matrices: Sigma_k is
/// the mean of the k-th lower block diagonal of (M + M^*)/2.
CovarianceSequence toeplitz_project(const CMatrix& m, int block_size);
CovarianceSequence toeplitz_project(const HermitianMatrix& m, int block_size);

struct BoundaryReport {
    bool is_psd = false;
    int rank = 0;
    double min_eig = 0.0;
    /// Sigma lies on the boundary of the dual cone (PSD and singular).
    bool on_boundary() const noexcept;
    int dim = 0;
};

/// PSD status (min eig >= -epsilon), numerical rank and minimum eigenvalue of
/// assemble(sigma).
BoundaryReport boundary_check(const CovarianceSequence& sigma, double epsilon);

}  // namespace specline
