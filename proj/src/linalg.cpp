#include "specline/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "specline/error.hpp"

namespace specline {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "invalid argument";
        case ErrorKind::DimensionMismatch: return "dimension mismatch";
        case ErrorKind::NoConvergence: return "eigensolver did not converge";
        case ErrorKind::NotPsd: return "not PSD";
        case ErrorKind::SingularPencil: return "singular pencil";
        case ErrorKind::InteriorPoint: return "interior point";
        case ErrorKind::NonUnimodular: return "non-unimodular eigenvalue";
        case ErrorKind::NotConverged: return "not converged";
        case ErrorKind::Diverged: return "diverged";
        case ErrorKind::NoLineSpectrum: return "no line-spectral structure found";
        case ErrorKind::Precondition: return "precondition violated";
        case ErrorKind::Io: return "i/o error";
    }
    return "unknown";
}

HermitianMatrix::HermitianMatrix(const CMatrix& a) : a_(a) { symmetrize(); }

HermitianMatrix::HermitianMatrix(CMatrix&& a) : a_(std::move(a)) { symmetrize(); }

HermitianMatrix HermitianMatrix::identity(Eigen::Index dim) {
    return HermitianMatrix(CMatrix::Identity(dim, dim));
}

HermitianMatrix HermitianMatrix::zero(Eigen::Index dim) {
    return HermitianMatrix(CMatrix::Zero(dim, dim));
}

void HermitianMatrix::symmetrize() {
    if (a_.rows() != a_.cols()) {
        std::ostringstream os;
        os << "HermitianMatrix needs a square matrix, got " << a_.rows() << "x" << a_.cols();
        throw Error(ErrorKind::DimensionMismatch, os.str());
    }
    const Eigen::Index n = a_.rows();
    for (Eigen::Index j = 0; j < n; ++j) {
        a_(j, j) = cdouble(a_(j, j).real(), 0.0);
        for (Eigen::Index k = j + 1; k < n; ++k) {
            const cdouble avg = 0.5 * (a_(j, k) + std::conj(a_(k, j)));
            a_(j, k) = avg;
            a_(k, j) = std::conj(avg);
        }
    }
}

EigenDecomposition hermitian_eig(const HermitianMatrix& a) {
    if (a.dim() == 0) return {};
    Eigen::SelfAdjointEigenSolver<CMatrix> es(a.matrix());
    if (es.info() != Eigen::Success) {
        std::ostringstream os;
        os << "Hermitian eigensolver failed to converge on a " << a.dim() << "x" << a.dim()
           << " matrix";
        throw Error(ErrorKind::NoConvergence, os.str());
    }
    return {es.eigenvalues(), es.eigenvectors()};
}

int numerical_rank(std::span<const double> eigenvalues, double epsilon) {
    if (!(epsilon > 0.0)) throw Error(ErrorKind::InvalidArgument, "numerical_rank: epsilon must be > 0");
    return static_cast<int>(
        std::count_if(eigenvalues.begin(), eigenvalues.end(), [&](double v) { return v > epsilon; }));
}

int numerical_rank(const RVector& eigenvalues, double epsilon) {
    return numerical_rank(std::span<const double>(eigenvalues.data(), eigenvalues.size()), epsilon);
}

CMatrix rank_factorize(const HermitianMatrix& t, double epsilon) {
    if (!(epsilon > 0.0)) throw Error(ErrorKind::InvalidArgument, "rank_factorize: epsilon must be > 0");
    const auto ed = hermitian_eig(t);
    const Eigen::Index dim = t.dim();
    if (dim > 0 && ed.eigenvalues(0) < -epsilon) {
        std::ostringstream os;
        os << "matrix is not PSD: eigenvalue " << ed.eigenvalues(0) << " < -" << epsilon;
        throw Error(ErrorKind::NotPsd, os.str());
    }
    const int r = numerical_rank(ed.eigenvalues, epsilon);
    CMatrix v(dim, r);
    for (int j = 0; j < r; ++j) {
        const Eigen::Index src = dim - 1 - j;
        v.col(j) = ed.eigenvectors.col(src) * std::sqrt(ed.eigenvalues(src));
    }
    return v;
}

void psd_project_inplace(CMatrix& a) {
    const Eigen::Index n = a.rows();
    if (n == 0) return;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(a);
    if (es.info() != Eigen::Success) {
        std::ostringstream os;
        os << "Hermitian eigensolver failed to converge on a " << n << "x" << n << " matrix";
        throw Error(ErrorKind::NoConvergence, os.str());
    }
    const RVector& w = es.eigenvalues();
    const CMatrix& u = es.eigenvectors();
    Eigen::Index first_pos = 0;
    while (first_pos < n && w(first_pos) <= 0.0) ++first_pos;
    const Eigen::Index npos = n - first_pos;
    if (npos <= first_pos) {
        CMatrix f = u.rightCols(npos);
        for (Eigen::Index j = 0; j < npos; ++j) f.col(j) *= std::sqrt(w(first_pos + j));
        a.noalias() = f * f.adjoint();
    } else {
        // Fewer negative eigenvalues: subtract them instead.
        CMatrix f = u.leftCols(first_pos);
        for (Eigen::Index j = 0; j < first_pos; ++j) f.col(j) *= std::sqrt(-w(j));
        a.noalias() += f * f.adjoint();
    }
}

HermitianMatrix psd_project(const HermitianMatrix& a) {
    CMatrix m = a.matrix();
    psd_project_inplace(m);
    return HermitianMatrix(std::move(m));
}

GeneralizedEigen generalized_eig_pair(const CMatrix& a, const HermitianMatrix& b,
                                      const Tolerances& tol) {
    const Eigen::Index n = b.dim();
    if (a.rows() != n || a.cols() != n) {
        std::ostringstream os;
        os << "generalized_eig_pair: A is " << a.rows() << "x" << a.cols() << ", B is " << n << "x"
           << n;
        throw Error(ErrorKind::DimensionMismatch, os.str());
    }
    if (n == 0) return {};
    const auto eb = hermitian_eig(b);
    const double trace = b.matrix().trace().real();
    const double floor = tol.pencil_pd * std::max(trace, 0.0) / static_cast<double>(n);
    if (!(eb.eigenvalues(0) > floor)) {
        std::ostringstream os;
        os << "singular pencil: min eig(B) = " << eb.eigenvalues(0) << " <= " << floor;
        throw Error(ErrorKind::SingularPencil, os.str());
    }
    Eigen::LLT<CMatrix> llt(b.matrix());
    if (llt.info() != Eigen::Success) {
        throw Error(ErrorKind::SingularPencil, "singular pencil: Cholesky factorization failed");
    }
    const auto w = llt.matrixL();
    // M = W^{-1} A W^{-*}
    CMatrix m = w.solve(a);
    m = w.solve(m.adjoint()).adjoint();

    Eigen::ComplexEigenSolver<CMatrix> ces(m);
    if (ces.info() != Eigen::Success) {
        std::ostringstream os;
        os << "complex eigensolver failed to converge on a " << n << "x" << n << " pencil";
        throw Error(ErrorKind::NoConvergence, os.str());
    }
    GeneralizedEigen out;
    out.eigenvalues = ces.eigenvalues();
    // v = W^{-*} y
    out.eigenvectors = llt.matrixU().solve(ces.eigenvectors());
    for (Eigen::Index j = 0; j < n; ++j) {
        const double nrm = out.eigenvectors.col(j).norm();
        if (nrm > 0.0) out.eigenvectors.col(j) /= nrm;
    }
    return out;
}

}  // namespace specline
