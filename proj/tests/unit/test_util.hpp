#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "specline/linalg.hpp"
#include "specline/vandermonde.hpp"

namespace specline::testing {

// Test-side generator. std::normal_distribution is fine here: tests only
// need variety, not cross-platform bit reproducibility.
class Gen {
public:
    explicit Gen(unsigned seed) : eng_(seed) {}

    double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
    double normal() { return std::normal_distribution<double>()(eng_); }
    cdouble cnormal() { return {normal(), normal()}; }

    CMatrix cmatrix(Eigen::Index r, Eigen::Index c) {
        CMatrix a(r, c);
        for (Eigen::Index j = 0; j < c; ++j)
            for (Eigen::Index i = 0; i < r; ++i) a(i, j) = cnormal();
        return a;
    }
    CVector cvector(Eigen::Index n) { return cmatrix(n, 1).col(0); }
    CVector unit_vector(Eigen::Index n) {
        CVector v = cvector(n);
        return v / v.norm();
    }

    HermitianMatrix hermitian(Eigen::Index n) {
        const CMatrix a = cmatrix(n, n);
        return HermitianMatrix(CMatrix(a + a.adjoint()));
    }
    /// PSD with the requested rank.
    HermitianMatrix psd(Eigen::Index n, Eigen::Index rank) {
        const CMatrix f = cmatrix(n, rank);
        return HermitianMatrix(CMatrix(f * f.adjoint()));
    }
    CMatrix unitary(Eigen::Index n) {
        Eigen::HouseholderQR<CMatrix> qr(cmatrix(n, n));
        CMatrix q = qr.householderQ();
        return q;
    }
    /// Well-conditioned Hermitian positive definite matrix.
    HermitianMatrix pd(Eigen::Index n) {
        const CMatrix u = unitary(n);
        Eigen::VectorXd w(n);
        for (Eigen::Index i = 0; i < n; ++i) w(i) = uniform(0.5, 4.0);
        return HermitianMatrix(CMatrix(u * w.asDiagonal() * u.adjoint()));
    }

    /// Frequencies in (-pi, pi] with pairwise circular distance >= sep.
    std::vector<double> separated_angles(int count, double sep) {
        while (true) {
            std::vector<double> t(static_cast<size_t>(count));
            for (auto& x : t) x = wrap_angle(uniform(-std::numbers::pi, std::numbers::pi));
            bool ok = true;
            for (size_t i = 0; ok && i < t.size(); ++i)
                for (size_t j = i + 1; ok && j < t.size(); ++j) ok = circular_distance(t[i], t[j]) >= sep;
            if (ok) return t;
        }
    }

    /// Line spectrum with sorted frequencies and densities of the given rank.
    LineSpectrum spectrum(int count, double sep, int density_rank, int m = 2) {
        LineSpectrum s;
        s.m = m;
        auto thetas = separated_angles(count, sep);
        std::sort(thetas.begin(), thetas.end());
        for (double t : thetas) {
            const CMatrix f = cmatrix(m, density_rank);
            s.atoms.push_back({t, f * f.adjoint()});
        }
        return s;
    }

    std::mt19937& engine() { return eng_; }

private:
    std::mt19937 eng_;
};

inline double max_abs_diff(const RVector& a, const RVector& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace specline::testing
