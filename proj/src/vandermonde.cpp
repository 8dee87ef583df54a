#include "specline/vandermonde.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "specline/error.hpp"

namespace specline {

std::vector<double> LineSpectrum::frequencies() const {
    std::vector<double> out;
    out.reserve(atoms.size());
    for (const auto& a : atoms) out.push_back(a.theta);
    return out;
}

bool LineSpectrum::has_warning(const std::string& tag) const {
    return std::find(warnings.begin(), warnings.end(), tag) != warnings.end();
}

namespace {

// Groups indices of `thetas` into clusters using single linkage on the
// circle with threshold delta.
std::vector<std::vector<Eigen::Index>> cluster_angles(const std::vector<double>& thetas, double delta) {
    const size_t r = thetas.size();
    std::vector<Eigen::Index> order(r);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return thetas[a] < thetas[b]; });

    std::vector<std::vector<Eigen::Index>> clusters;
    for (size_t i = 0; i < r; ++i) {
        const auto idx = order[i];
        if (i > 0 && thetas[idx] - thetas[order[i - 1]] <= delta) {
            clusters.back().push_back(idx);
        } else {
            clusters.push_back({idx});
        }
    }
    // Links across the +-pi seam.
    if (clusters.size() > 1) {
        const double seam = thetas[order.front()] + 2.0 * std::numbers::pi - thetas[order.back()];
        if (seam <= delta) {
            auto& last = clusters.back();
            auto& first = clusters.front();
            first.insert(first.end(), last.begin(), last.end());
            clusters.pop_back();
        }
    }
    return clusters;
}

double circular_mean(const std::vector<double>& thetas, const std::vector<Eigen::Index>& members) {
    cdouble acc = 0.0;
    for (auto j : members) acc += std::polar(1.0, thetas[static_cast<size_t>(j)]);
    return wrap_angle(std::arg(acc));
}

}  // namespace

LineSpectrum decompose(const CovarianceSequence& sigma, const Tolerances& tol) {
    const int m = sigma.block_size();
    const int n = sigma.n();
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "decompose needs at least two covariance blocks (n >= 1)");
    const double eps = tol.epsilon_rank;

    const auto ed = hermitian_eig(assemble(sigma));
    const Eigen::Index dim = ed.eigenvalues.size();
    if (ed.eigenvalues(0) < -eps) {
        std::ostringstream os;
        os << "block-Toeplitz matrix is not PSD: eigenvalue " << ed.eigenvalues(0);
        throw Error(ErrorKind::NotPsd, os.str());
    }
    const int r = numerical_rank(ed.eigenvalues, eps);

    LineSpectrum out;
    out.m = m;
    if (m > 2) out.warnings.emplace_back(kWarnUniqueness);
    if (r == 0) return out;
    if (r == dim) {
        std::ostringstream os;
        os << "interior point, decomposition not unique: rank " << r << " = dimension, min eig "
           << ed.eigenvalues(0);
        throw Error(ErrorKind::InteriorPoint, os.str());
    }
    const double largest_dropped = ed.eigenvalues(dim - 1 - r);
    if (largest_dropped > eps / 10.0) out.warnings.emplace_back(kWarnMarginalRank);

    CMatrix v(dim, r);
    for (int j = 0; j < r; ++j) {
        const Eigen::Index src = dim - 1 - j;
        v.col(j) = ed.eigenvectors.col(src) * std::sqrt(ed.eigenvalues(src));
    }
    const Eigen::Index rows = static_cast<Eigen::Index>(m) * n;
    const auto v_drop_first = v.bottomRows(rows);
    const auto v_drop_last = v.topRows(rows);
    const CMatrix a = v_drop_last.adjoint() * v_drop_first;
    const HermitianMatrix b(CMatrix(v_drop_last.adjoint() * v_drop_last));
    const auto ge = generalized_eig_pair(a, b, tol);

    std::vector<double> thetas(static_cast<size_t>(r));
    for (int j = 0; j < r; ++j) {
        const cdouble lambda = ge.eigenvalues(j);
        const double dev = std::fabs(std::abs(lambda) - 1.0);
        if (dev > tol.unimodular) {
            std::ostringstream os;
            os << "non-unimodular eigenvalue: |lambda| = " << std::abs(lambda)
               << " (deviation " << dev << " > " << tol.unimodular << "), degenerate instance";
            throw Error(ErrorKind::NonUnimodular, os.str());
        }
        thetas[static_cast<size_t>(j)] = wrap_angle(std::arg(lambda));
    }

    const auto v0 = v.topRows(m);
    for (const auto& members : cluster_angles(thetas, tol.delta_theta)) {
        CMatrix basis(r, static_cast<Eigen::Index>(members.size()));
        for (size_t c = 0; c < members.size(); ++c) basis.col(static_cast<Eigen::Index>(c)) = ge.eigenvectors.col(members[c]);
        if (members.size() > 1) {
            Eigen::HouseholderQR<CMatrix> qr(basis);
            basis = qr.householderQ() * CMatrix::Identity(r, basis.cols());
        }
        const CMatrix f = v0 * basis;
        out.atoms.push_back({circular_mean(thetas, members), HermitianMatrix(CMatrix(f * f.adjoint())).matrix()});
    }
    std::sort(out.atoms.begin(), out.atoms.end(),
              [](const SpectralAtom& x, const SpectralAtom& y) { return x.theta < y.theta; });
    return out;
}

CovarianceSequence reconstruct(const LineSpectrum& spec, int n) {
    if (n < 0) throw Error(ErrorKind::InvalidArgument, "reconstruct: n must be nonnegative");
    std::vector<CMatrix> blocks(static_cast<size_t>(n) + 1, CMatrix::Zero(spec.m, spec.m));
    for (const auto& atom : spec.atoms) {
        if (atom.q.rows() != spec.m || atom.q.cols() != spec.m)
            throw Error(ErrorKind::DimensionMismatch, "reconstruct: density has wrong block size");
        for (int k = 0; k <= n; ++k) blocks[static_cast<size_t>(k)] += std::polar(1.0, k * atom.theta) * atom.q;
    }
    return CovarianceSequence(spec.m, std::move(blocks));
}

double unitary_residual(const CMatrix& v, const CMatrix& u, int m) {
    if (m < 1 || v.rows() % m != 0 || v.rows() < 2 * m || u.rows() != v.cols() || u.cols() != v.cols())
        throw Error(ErrorKind::DimensionMismatch, "unitary_residual: incompatible shapes");
    const Eigen::Index rows = v.rows() - m;
    const CMatrix v_drop_first = v.bottomRows(rows);
    const double num = (v_drop_first - v.topRows(rows) * u).norm();
    return num / std::max(1.0, v_drop_first.norm());
}

double reconstruction_residual(const CovarianceSequence& sigma, const LineSpectrum& spec) {
    const auto rec = reconstruct(spec, sigma.n());
    double worst = 0.0;
    for (int k = 0; k <= sigma.n(); ++k) worst = std::max(worst, (sigma[k] - rec[k]).norm());
    return worst;
}

}  // namespace specline
