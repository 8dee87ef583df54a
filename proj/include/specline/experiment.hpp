#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "specline/atomic_norm.hpp"

namespace specline {

/// Minimum-cost assignment of rows to columns (Hungarian method). Returns,
/// for each row, the assigned column or -1 when there are more rows than
/// columns and the row stays unmatched.
std::vector<int> optimal_assignment(const Eigen::MatrixXd& cost);

struct FrequencyMatch {
    double error = 0.0;       // || theta_hat - theta || over matched pairs
    int matched = 0;
    std::vector<int> assignment;  // truth index -> estimate index or -1
};

/// Matches estimates to the truth under circular distance and returns the
/// Euclidean norm of the matched circular differences.
FrequencyMatch match_frequencies(const std::vector<double>& truth, const std::vector<double>& estimate);

struct MonteCarloRecord {
    int trial = 0;
    std::uint64_t seed = 0;
    int L = 0;
    double snr_db = 0.0;
    bool rank_recovered = false;
    std::optional<double> freq_error;  // present iff rank_recovered
    int solve_iterations = 0;
    double wall_time_s = 0.0;
    /// Empty on success; otherwise the solver/decomposition failure.
    std::string failure;
};

struct CellConfig {
    int n = 64;
    int L = 4;
    double snr_db = 20.0;   // +infinity selects the noiseless pipeline
    int target_successes = 50;
    int max_trials = 1000;
    double min_separation = 0.0;  // radians; 0 disables rejection sampling
    /// Reuse trial 0's frequencies in every trial (amplitudes and noise are
    /// still drawn per trial).
    bool fixed_frequencies = false;
    std::uint64_t seed = 0;
    SolverConfig noiseless_solver = SolverConfig::noiseless();
    SolverConfig denoise_solver = SolverConfig::denoise();
};

struct Quantiles {
    double min = 0.0, q25 = 0.0, median = 0.0, q75 = 0.0, max = 0.0;
};

/// Linear-interpolation quantiles (position p (N - 1)) of the values.
Quantiles quantiles(std::vector<double> values);

struct StudySummary {
    CellConfig config;
    int total_trials = 0;
    int successes = 0;
    bool censored = false;
    double success_probability = 0.0;  // successes / total_trials
    std::optional<Quantiles> error_quantiles;
    int solver_failures = 0;
    int decomposition_failures = 0;
};

/// One trial of the estimation pipeline: draw frequencies, amplitudes and
/// noise from the trial's own stream, estimate tau from the data, solve,
/// and score rank recovery and frequency error.
MonteCarloRecord run_trial(const CellConfig& cell, int trial);

struct CellResult {
    std::vector<MonteCarloRecord> records;  // ordered by trial index
    StudySummary summary;
};

/// Runs trials 0, 1, ... until target_successes rank recoveries or
/// max_trials. Trials run in batches of `jobs` workers; results are
/// identical for any job count.
CellResult run_cell(const CellConfig& cell, int jobs = 1);

StudySummary summarize(const CellConfig& cell, const std::vector<MonteCarloRecord>& records);

inline constexpr const char* kCsvHeader =
    "trial,seed,L,snr_db,rank_recovered,freq_error,solve_iterations,wall_time_s";

void write_csv_row(std::ostream& os, const MonteCarloRecord& r);

/// Parses rows written by write_csv_row (header line included or not).
std::vector<MonteCarloRecord> read_csv(std::istream& is);

/// Deterministic trial seed for (master, trial).
std::uint64_t trial_seed(std::uint64_t master, int trial);

}  // namespace specline
