#include "specline/block_toeplitz.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "specline/error.hpp"

namespace specline {

CovarianceSequence::CovarianceSequence(int m, std::vector<CMatrix> blocks)
    : m_(m), blocks_(std::move(blocks)) {
    if (m_ < 1) throw Error(ErrorKind::InvalidArgument, "block size must be positive");
    if (blocks_.empty()) throw Error(ErrorKind::InvalidArgument, "covariance sequence needs Sigma_0");
    for (size_t k = 0; k < blocks_.size(); ++k) {
        if (blocks_[k].rows() != m_ || blocks_[k].cols() != m_) {
            std::ostringstream os;
            os << "block " << k << " is " << blocks_[k].rows() << "x" << blocks_[k].cols()
               << ", expected " << m_ << "x" << m_;
            throw Error(ErrorKind::DimensionMismatch, os.str());
        }
    }
    blocks_[0] = HermitianMatrix(blocks_[0]).matrix();
}

CovarianceSequence CovarianceSequence::zero(int m, int n) {
    if (n < 0) throw Error(ErrorKind::InvalidArgument, "n must be nonnegative");
    return CovarianceSequence(m, std::vector<CMatrix>(static_cast<size_t>(n) + 1, CMatrix::Zero(m, m)));
}

double wrap_angle(double theta) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double t = std::remainder(theta, two_pi);  // [-pi, pi]
    if (t <= -std::numbers::pi) t += two_pi;
    return t;
}

double circular_distance(double a, double b) {
    const double d = std::fabs(wrap_angle(a) - wrap_angle(b));
    return std::min(d, 2.0 * std::numbers::pi - d);
}

CVector steering_vector(double theta, int n) {
    CVector g(n + 1);
    for (int t = 0; t <= n; ++t) g(t) = std::polar(1.0, t * theta);
    return g;
}

CMatrix steering_block(double theta, int n, int m) {
    const CVector g = steering_vector(theta, n);
    CMatrix out = CMatrix::Zero(static_cast<Eigen::Index>(m) * (n + 1), m);
    for (int t = 0; t <= n; ++t)
        for (int i = 0; i < m; ++i) out(t * m + i, i) = g(t);
    return out;
}

void assemble_into(const CovarianceSequence& sigma, CMatrix& out) {
    const int m = sigma.block_size();
    const int n = sigma.n();
    const Eigen::Index dim = static_cast<Eigen::Index>(m) * (n + 1);
    out.resize(dim, dim);
    for (int j = 0; j <= n; ++j) {
        out.block(j * m, j * m, m, m) = sigma[0];
        for (int k = 0; k < j; ++k) {
            const CMatrix& s = sigma[j - k];
            out.block(j * m, k * m, m, m) = s;
            out.block(k * m, j * m, m, m) = s.adjoint();
        }
    }
}

HermitianMatrix assemble(const CovarianceSequence& sigma) {
    CMatrix out;
    assemble_into(sigma, out);
    return HermitianMatrix(std::move(out));
}

CovarianceSequence toeplitz_project(const CMatrix& mat, int block_size) {
    const int m = block_size;
    if (m < 1 || mat.rows() != mat.cols() || mat.rows() == 0 || mat.rows() % m != 0) {
        std::ostringstream os;
        os << "toeplitz_project: a " << mat.rows() << "x" << mat.cols()
           << " matrix cannot be split into " << m << "x" << m << " blocks";
        throw Error(ErrorKind::DimensionMismatch, os.str());
    }
    const int n = static_cast<int>(mat.rows() / m) - 1;
    std::vector<CMatrix> blocks(static_cast<size_t>(n) + 1, CMatrix::Zero(m, m));
    for (int k = 0; k <= n; ++k) {
        CMatrix acc = CMatrix::Zero(m, m);
        for (int j = k; j <= n; ++j) {
            // lower block (j, j-k) and the adjoint of the mirrored upper block
            acc += mat.block(j * m, (j - k) * m, m, m);
            acc += mat.block((j - k) * m, j * m, m, m).adjoint();
        }
        blocks[static_cast<size_t>(k)] = acc / (2.0 * (n + 1 - k));
    }
    return CovarianceSequence(m, std::move(blocks));
}

CovarianceSequence toeplitz_project(const HermitianMatrix& mat, int block_size) {
    return toeplitz_project(mat.matrix(), block_size);
}

bool BoundaryReport::on_boundary() const noexcept { return is_psd && rank < dim; }

BoundaryReport boundary_check(const CovarianceSequence& sigma, double epsilon) {
    if (!(epsilon > 0.0)) throw Error(ErrorKind::InvalidArgument, "boundary_check: epsilon must be > 0");
    const auto ed = hermitian_eig(assemble(sigma));
    BoundaryReport rep;
    rep.dim = static_cast<int>(ed.eigenvalues.size());
    rep.min_eig = ed.eigenvalues(0);
    rep.is_psd = rep.min_eig >= -epsilon;
    rep.rank = numerical_rank(ed.eigenvalues, epsilon);
    return rep;
}

}  // namespace specline
