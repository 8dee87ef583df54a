#pragma once

#include <optional>
#include <string>
#include <vector>

#include "specline/block_toeplitz.hpp"
#include "specline/signal.hpp"
#include "specline/vandermonde.hpp"

namespace specline {

/// Settings for the operator-splitting SDP solver. Residual targets are
/// relative (see SdpSolution).
struct SolverConfig {
    double rho = 1.0;
    double tol_primal = 1e-7;
    double tol_dual = 1e-7;
    int max_iter = 50000;
    double epsilon_rank = 1e-4;
    double delta_theta = 1e-6;
    /// Over-relaxation factor in [1, 2).
    double relaxation = 1.6;
    /// Rebalance rho when one residual exceeds the other by this factor.
    double balance_ratio = 10.0;
    /// Rebalancing is considered every this many iterations.
    int balance_interval = 10;

    static SolverConfig noiseless() { return {}; }
    static SolverConfig denoise() {
        SolverConfig c;
        c.tol_primal = 1e-6;
        c.tol_dual = 1e-6;
        return c;
    }

    Tolerances tolerances() const;
};

struct NoiselessProblem {
    MeasurementVector x;
};

struct DenoiseProblem {
    MeasurementVector y;
    double tau = 0.0;
};

struct SdpSolution {
    double b = 0.0;
    CovarianceSequence sigma;
    MeasurementVector x;       // denoised signal (the input itself in noiseless mode)
    double objective = 0.0;
    int iterations = 0;
    /// ||B - Z||_F / max(1, ||Z||_F) on the normalized problem.
    double primal_residual = 0.0;
    /// rho ||Z - Z_prev||_F / max(1, ||Y||_F) on the normalized problem.
    double dual_residual = 0.0;
    int rank = 0;              // numerical rank of T(sigma) at epsilon_rank
    bool rank_ok = false;      // rank <= n + 1
    /// Set when rank_ok is false: the objective only bounds the atomic norm
    /// from below.
    bool lower_bound_only = false;
    RVector toeplitz_eigenvalues;  // ascending
};

/// min (b + tr Sigma_0)/2  s.t.  [[b, x^*], [x, T(Sigma)]] >= 0.
/// Throws Error{NotConverged} (message carries residuals) or Error{Diverged}.
SdpSolution solve_noiseless(const NoiselessProblem& p, const SolverConfig& cfg = SolverConfig::noiseless());

/// min 1/2 ||x - y||^2 + tau/2 (b + tr Sigma_0)  s.t. the same LMI.
SdpSolution solve_denoise(const DenoiseProblem& p, const SolverConfig& cfg = SolverConfig::denoise());

/// Vandermonde decomposition of the solver's T(Sigma).
struct FrequencyEstimate {
    LineSpectrum spectrum;
    bool rank_ok = false;
};

/// Throws Error{NoLineSpectrum} when T(Sigma) is numerically full rank and
/// propagates other decompose() errors.
FrequencyEstimate estimate_frequencies(const SdpSolution& sol, const Tolerances& tol);

struct SeparationReport {
    double min_distance = 0.0;   // radians
    bool satisfied = false;      // min_distance / 2 pi >= 4 / n
};

SeparationReport check_separation(const std::vector<double>& thetas, int n);

/// Atom list with explicit amplitudes: x = sum_l G(theta_l) s_l.
struct AmplitudeSpectrum {
    std::vector<double> frequencies;
    std::vector<Eigen::Vector2cd> amplitudes;
};

/// Checks p <= sum_l ||s_l|| + tol for an explicit decomposition of x.
/// Throws Error{Precondition} if the decomposition does not reproduce x to
/// 1e-8 relative.
bool lower_bound_check(const MeasurementVector& x, const AmplitudeSpectrum& spec, double p,
                       double tol = 1e-6);

/// sum_l ||s_l||.
double atomic_cost(const AmplitudeSpectrum& spec);

}  // namespace specline
