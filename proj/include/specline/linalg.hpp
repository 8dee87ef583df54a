#pragma once

#include <complex>
#include <span>
#include <utility>

#include <Eigen/Dense>

#include "specline/tolerances.hpp"

namespace specline {

using cdouble = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Square complex matrix that is Hermitian by construction: the constructor
/// replaces A with (A + A*) / 2, so entries(j, k) == conj(entries(k, j)).
class HermitianMatrix {
public:
    HermitianMatrix() = default;
    explicit HermitianMatrix(const CMatrix& a);
    explicit HermitianMatrix(CMatrix&& a);

    static HermitianMatrix identity(Eigen::Index dim);
    static HermitianMatrix zero(Eigen::Index dim);

    Eigen::Index dim() const noexcept { return a_.rows(); }
    const CMatrix& matrix() const noexcept { return a_; }
    cdouble operator()(Eigen::Index j, Eigen::Index k) const { return a_(j, k); }

private:
    void symmetrize();

    CMatrix a_;
};

struct EigenDecomposition {
    RVector eigenvalues;   // ascending
    CMatrix eigenvectors;  // unitary, columns match eigenvalues
};

/// Full eigendecomposition of a Hermitian matrix, eigenvalues ascending.
/// Throws Error{NoConvergence} if the QL iteration does not converge.
EigenDecomposition hermitian_eig(const HermitianMatrix& a);

/// Number of eigenvalues strictly greater than epsilon.
int numerical_rank(std::span<const double> eigenvalues, double epsilon);
int numerical_rank(const RVector& eigenvalues, double epsilon);

/// V = U_r * Lambda_r^{1/2} from the top-r eigenpairs, r = numerical rank.
/// Columns are ordered by decreasing eigenvalue.
CMatrix rank_factorize(const HermitianMatrix& t, double epsilon);

/// Nearest positive semidefinite matrix in Frobenius norm.
HermitianMatrix psd_project(const HermitianMatrix& a);

/// Same as psd_project, on a raw matrix that must already be Hermitian in
/// both triangles. Used in the solver hot loop.
void psd_project_inplace(CMatrix& a);

struct GeneralizedEigen {
    Eigen::VectorXcd eigenvalues;
    CMatrix eigenvectors;  // column j pairs with eigenvalues(j), unit 2-norm
};

/// Solves A v = lambda B v for Hermitian positive definite B by whitening
/// with the Cholesky factor B = W W*. A only needs to be square; it is not
/// required to be Hermitian. Throws Error{SingularPencil} when
/// min eig(B) <= tol.pencil_pd * trace(B) / dim.
GeneralizedEigen generalized_eig_pair(const CMatrix& a, const HermitianMatrix& b,
                                      const Tolerances& tol = kDefaultTolerances);

}  // namespace specline
