#include "specline/atomic_norm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "specline/error.hpp"

namespace specline {

Tolerances SolverConfig::tolerances() const {
    Tolerances t;
    t.epsilon_rank = epsilon_rank;
    t.delta_theta = delta_theta;
    return t;
}

namespace {

constexpr int kBlock = 2;

void validate(const SolverConfig& cfg) {
    if (!(cfg.rho > 0.0) || !(cfg.tol_primal > 0.0) || !(cfg.tol_dual > 0.0) || cfg.max_iter < 1 ||
        !(cfg.epsilon_rank > 0.0) || !(cfg.delta_theta > 0.0) || !(cfg.relaxation >= 1.0) ||
        !(cfg.relaxation < 2.0) || !(cfg.balance_ratio > 1.0) || cfg.balance_interval < 1)
        throw Error(ErrorKind::InvalidArgument, "invalid solver configuration");
}

void validate(const MeasurementVector& v) {
    if (v.samples.size() < 2 * kBlock || v.samples.size() % kBlock != 0)
        throw Error(ErrorKind::InvalidArgument,
                    "measurement vector length must be a positive multiple of 2 with n >= 1");
    if (!v.samples.allFinite()) throw Error(ErrorKind::InvalidArgument, "measurement vector has non-finite entries");
}

// Problem data in normalized units (signal rescaled to unit RMS per sample).
struct Scaled {
    CVector y;
    int n = 0;
    double scale = 1.0;
    bool denoise = false;
    double weight = 0.5;  // objective coefficient of b and tr Sigma_0
};

struct Iterate {
    double b = 0.0;
    CovarianceSequence sigma;
    CVector x;
    int iterations = 0;
    double primal = 0.0;
    double dual = 0.0;
};

void bordered_into(double b, const CVector& x, const CovarianceSequence& sigma, CMatrix& out, CMatrix& tbuf) {
    assemble_into(sigma, tbuf);
    const Eigen::Index d = tbuf.rows();
    out.resize(d + 1, d + 1);
    out(0, 0) = b;
    out.block(1, 0, d, 1) = x;
    out.block(0, 1, 1, d) = x.adjoint();
    out.bottomRightCorner(d, d) = tbuf;
}

std::string residual_report(int it, double primal, double dual, const SolverConfig& cfg) {
    std::ostringstream os;
    os << "not converged after " << it << " iterations: primal residual " << primal << " (target "
       << cfg.tol_primal << "), dual residual " << dual << " (target " << cfg.tol_dual << ")";
    return os.str();
}

// Scaled-form ADMM with consensus variable Z for the bordered matrix.
Iterate run_admm(const Scaled& pb, const SolverConfig& cfg) {
    const int n = pb.n;
    const Eigen::Index d = kBlock * (n + 1);
    const Eigen::Index dim = d + 1;
    double rho = cfg.rho;
    const double alpha = cfg.relaxation;

    CMatrix z = CMatrix::Zero(dim, dim);
    CMatrix lam = CMatrix::Zero(dim, dim);
    CMatrix w(dim, dim), bmat(dim, dim), z_prev(dim, dim), tbuf;

    Iterate it;
    it.x = pb.y;
    it.sigma = CovarianceSequence::zero(kBlock, n);

    for (int k = 1; k <= cfg.max_iter; ++k) {
        // (b, Sigma, x) update: closed-form weighted least squares.
        w = z - lam;
        it.b = w(0, 0).real() - pb.weight / rho;
        const CMatrix wt = w.bottomRightCorner(d, d);
        it.sigma = toeplitz_project(wt, kBlock);
        {
            auto blocks = it.sigma.blocks();
            blocks[0] -= CMatrix::Identity(kBlock, kBlock) * (pb.weight / (rho * (n + 1)));
            it.sigma = CovarianceSequence(kBlock, std::move(blocks));
        }
        if (pb.denoise) {
            const CVector wx = 0.5 * (w.block(1, 0, d, 1) + w.block(0, 1, 1, d).adjoint());
            it.x = (pb.y + 2.0 * rho * wx) / (1.0 + 2.0 * rho);
        }
        bordered_into(it.b, it.x, it.sigma, bmat, tbuf);

        // Z update: projection of the relaxed point onto the PSD cone.
        z_prev = z;
        const CMatrix relaxed = alpha * bmat + (1.0 - alpha) * z_prev;
        z = relaxed + lam;
        psd_project_inplace(z);
        lam += relaxed - z;

        const double znorm = z.norm();
        it.primal = (bmat - z).norm() / std::max(1.0, znorm);
        it.dual = rho * (z - z_prev).norm() / std::max(1.0, rho * lam.norm());
        it.iterations = k;

        if (!std::isfinite(it.primal) || !std::isfinite(it.dual) || !std::isfinite(it.b)) {
            std::ostringstream os;
            os << "diverged: non-finite iterate at iteration " << k;
            throw Error(ErrorKind::Diverged, os.str());
        }
        if (it.primal <= cfg.tol_primal && it.dual <= cfg.tol_dual) return it;

        if (k % cfg.balance_interval == 0) {
            if (it.primal > cfg.balance_ratio * it.dual) {
                rho *= 2.0;
                lam *= 0.5;
            } else if (it.dual > cfg.balance_ratio * it.primal) {
                rho *= 0.5;
                lam *= 2.0;
            }
        }
    }
    throw Error(ErrorKind::NotConverged, residual_report(cfg.max_iter, it.primal, it.dual, cfg));
}

CovarianceSequence scaled(const CovarianceSequence& s, double c) {
    auto blocks = s.blocks();
    for (auto& b : blocks) b *= c;
    return CovarianceSequence(s.block_size(), std::move(blocks));
}

void finish(SdpSolution& sol, const SolverConfig& cfg) {
    const auto ed = hermitian_eig(assemble(sol.sigma));
    sol.toeplitz_eigenvalues = ed.eigenvalues;
    sol.rank = numerical_rank(ed.eigenvalues, cfg.epsilon_rank);
    sol.rank_ok = sol.rank <= sol.sigma.n() + 1;
    sol.lower_bound_only = !sol.rank_ok;
}

SdpSolution zero_solution(const MeasurementVector& x, const SolverConfig& cfg) {
    SdpSolution sol;
    sol.sigma = CovarianceSequence::zero(kBlock, x.n());
    sol.x.samples = CVector::Zero(x.samples.size());
    finish(sol, cfg);
    return sol;
}

}  // namespace

SdpSolution solve_noiseless(const NoiselessProblem& p, const SolverConfig& cfg) {
    validate(cfg);
    validate(p.x);
    const double norm = p.x.samples.norm();
    if (norm == 0.0) return zero_solution(p.x, cfg);

    Scaled pb;
    pb.n = p.x.n();
    pb.scale = norm / std::sqrt(pb.n + 1.0);
    pb.y = p.x.samples / pb.scale;
    pb.weight = 0.5;
    const Iterate it = run_admm(pb, cfg);

    SdpSolution sol;
    sol.b = it.b * pb.scale;
    sol.sigma = scaled(it.sigma, pb.scale);
    sol.x = p.x;
    sol.objective = 0.5 * (sol.b + sol.sigma[0].trace().real());
    sol.iterations = it.iterations;
    sol.primal_residual = it.primal;
    sol.dual_residual = it.dual;
    finish(sol, cfg);
    return sol;
}

SdpSolution solve_denoise(const DenoiseProblem& p, const SolverConfig& cfg) {
    validate(cfg);
    validate(p.y);
    if (!(p.tau > 0.0)) throw Error(ErrorKind::InvalidArgument, "solve_denoise: tau must be > 0");
    const double norm = p.y.samples.norm();
    if (norm == 0.0) return zero_solution(p.y, cfg);

    Scaled pb;
    pb.n = p.y.n();
    pb.scale = norm / std::sqrt(pb.n + 1.0);
    pb.y = p.y.samples / pb.scale;
    pb.denoise = true;
    pb.weight = 0.5 * p.tau / pb.scale;
    const Iterate it = run_admm(pb, cfg);

    SdpSolution sol;
    sol.b = it.b * pb.scale;
    sol.sigma = scaled(it.sigma, pb.scale);
    sol.x.samples = it.x * pb.scale;
    sol.objective = 0.5 * (sol.x.samples - p.y.samples).squaredNorm() +
                    0.5 * p.tau * (sol.b + sol.sigma[0].trace().real());
    sol.iterations = it.iterations;
    sol.primal_residual = it.primal;
    sol.dual_residual = it.dual;
    finish(sol, cfg);
    return sol;
}

FrequencyEstimate estimate_frequencies(const SdpSolution& sol, const Tolerances& tol) {
    const int dim = static_cast<int>(sol.toeplitz_eigenvalues.size());
    const int rank = sol.toeplitz_eigenvalues.size() > 0 ? numerical_rank(sol.toeplitz_eigenvalues, tol.epsilon_rank)
                                                         : boundary_check(sol.sigma, tol.epsilon_rank).rank;
    if (dim > 0 && rank == dim) {
        std::ostringstream os;
        os << "no line-spectral structure found: T(Sigma) has full rank " << rank;
        throw Error(ErrorKind::NoLineSpectrum, os.str());
    }
    FrequencyEstimate est;
    est.spectrum = decompose(sol.sigma, tol);
    est.rank_ok = sol.rank_ok;
    return est;
}

SeparationReport check_separation(const std::vector<double>& thetas, int n) {
    if (thetas.empty()) throw Error(ErrorKind::InvalidArgument, "check_separation: no frequencies");
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "check_separation: n must be >= 1");
    SeparationReport rep;
    rep.min_distance = 2.0 * std::numbers::pi;
    for (size_t i = 0; i < thetas.size(); ++i)
        for (size_t j = i + 1; j < thetas.size(); ++j)
            rep.min_distance = std::min(rep.min_distance, circular_distance(thetas[i], thetas[j]));
    rep.satisfied = rep.min_distance / (2.0 * std::numbers::pi) >= 4.0 / n;
    return rep;
}

double atomic_cost(const AmplitudeSpectrum& spec) {
    double acc = 0.0;
    for (const auto& s : spec.amplitudes) acc += s.norm();
    return acc;
}

bool lower_bound_check(const MeasurementVector& x, const AmplitudeSpectrum& spec, double p, double tol) {
    if (spec.frequencies.size() != spec.amplitudes.size())
        throw Error(ErrorKind::Precondition, "lower_bound_check: one amplitude per frequency required");
    SinusoidModel model{spec.frequencies, spec.amplitudes, x.n()};
    const auto rebuilt = synthesize(model);
    const double err = (rebuilt.samples - x.samples).norm();
    if (err > 1e-8 * std::max(1.0, x.samples.norm())) {
        std::ostringstream os;
        os << "lower_bound_check: decomposition does not reproduce x (residual " << err << ")";
        throw Error(ErrorKind::Precondition, os.str());
    }
    return p <= atomic_cost(spec) + tol;
}

}  // namespace specline
