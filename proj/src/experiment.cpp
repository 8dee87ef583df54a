#include "specline/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <thread>

#include "specline/error.hpp"

namespace specline {

std::vector<int> optimal_assignment(const Eigen::MatrixXd& cost) {
    const bool transposed = cost.rows() > cost.cols();
    const Eigen::MatrixXd a = transposed ? Eigen::MatrixXd(cost.transpose()) : cost;
    const int rows = static_cast<int>(a.rows());
    const int cols = static_cast<int>(a.cols());
    std::vector<int> row_to_col(static_cast<size_t>(rows), -1);
    if (rows > 0) {
        // Shortest augmenting path with potentials; 1-based bookkeeping.
        const double inf = std::numeric_limits<double>::infinity();
        std::vector<double> u(rows + 1, 0.0), v(cols + 1, 0.0);
        std::vector<int> p(cols + 1, 0), way(cols + 1, 0);
        for (int i = 1; i <= rows; ++i) {
            p[0] = i;
            int j0 = 0;
            std::vector<double> minv(cols + 1, inf);
            std::vector<char> used(cols + 1, 0);
            do {
                used[j0] = 1;
                const int i0 = p[j0];
                double delta = inf;
                int j1 = 0;
                for (int j = 1; j <= cols; ++j) {
                    if (used[j]) continue;
                    const double cur = a(i0 - 1, j - 1) - u[i0] - v[j];
                    if (cur < minv[j]) {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if (minv[j] < delta) {
                        delta = minv[j];
                        j1 = j;
                    }
                }
                for (int j = 0; j <= cols; ++j) {
                    if (used[j]) {
                        u[p[j]] += delta;
                        v[j] -= delta;
                    } else {
                        minv[j] -= delta;
                    }
                }
                j0 = j1;
            } while (p[j0] != 0);
            do {
                const int j1 = way[j0];
                p[j0] = p[j1];
                j0 = j1;
            } while (j0 != 0);
        }
        for (int j = 1; j <= cols; ++j)
            if (p[j] != 0) row_to_col[static_cast<size_t>(p[j] - 1)] = j - 1;
    }
    if (!transposed) return row_to_col;
    std::vector<int> out(static_cast<size_t>(cost.rows()), -1);
    for (int i = 0; i < rows; ++i)
        if (row_to_col[static_cast<size_t>(i)] >= 0) out[static_cast<size_t>(row_to_col[static_cast<size_t>(i)])] = i;
    return out;
}

FrequencyMatch match_frequencies(const std::vector<double>& truth, const std::vector<double>& estimate) {
    FrequencyMatch m;
    Eigen::MatrixXd cost(truth.size(), estimate.size());
    for (size_t i = 0; i < truth.size(); ++i)
        for (size_t j = 0; j < estimate.size(); ++j) cost(i, j) = circular_distance(truth[i], estimate[j]);
    m.assignment = optimal_assignment(cost);
    double acc = 0.0;
    for (size_t i = 0; i < truth.size(); ++i) {
        const int j = m.assignment[i];
        if (j < 0) continue;
        acc += cost(i, j) * cost(i, j);
        ++m.matched;
    }
    m.error = std::sqrt(acc);
    return m;
}

Quantiles quantiles(std::vector<double> values) {
    if (values.empty()) throw Error(ErrorKind::InvalidArgument, "quantiles of an empty set");
    std::sort(values.begin(), values.end());
    auto at = [&](double p) {
        const double pos = p * static_cast<double>(values.size() - 1);
        const auto lo = static_cast<size_t>(std::floor(pos));
        const auto hi = std::min(lo + 1, values.size() - 1);
        const double frac = pos - static_cast<double>(lo);
        return values[lo] + frac * (values[hi] - values[lo]);
    };
    return {values.front(), at(0.25), at(0.5), at(0.75), values.back()};
}

std::uint64_t trial_seed(std::uint64_t master, int trial) {
    return derive_seed(master, static_cast<std::uint64_t>(trial));
}

MonteCarloRecord run_trial(const CellConfig& cell, int trial) {
    const auto start = std::chrono::steady_clock::now();
    MonteCarloRecord rec;
    rec.trial = trial;
    rec.seed = trial_seed(cell.seed, trial);
    rec.L = cell.L;
    rec.snr_db = cell.snr_db;

    Rng rng(rec.seed);
    SinusoidModel model;
    model.n = cell.n;
    model.frequencies = random_frequencies(cell.L, rng, cell.min_separation);
    model.amplitudes = random_amplitudes(cell.L, rng);
    if (cell.fixed_frequencies && trial != 0) {
        Rng first(trial_seed(cell.seed, 0));
        model.frequencies = random_frequencies(cell.L, first, cell.min_separation);
    }
    const bool noiseless = std::isinf(cell.snr_db) && cell.snr_db > 0;
    const double sigma_w = noiseless ? 0.0 : snr_to_sigma(cell.snr_db);
    const auto y = add_noise(synthesize(model), {sigma_w, derive_seed(rec.seed, 1)});

    const SolverConfig& cfg = noiseless ? cell.noiseless_solver : cell.denoise_solver;
    try {
        SdpSolution sol;
        if (noiseless) {
            sol = solve_noiseless({y}, cfg);
        } else {
            const double tau = compute_tau(std::sqrt(std::max(0.0, estimate_noise_variance(y))), cell.n);
            sol = solve_denoise({y, tau}, cfg);
        }
        rec.solve_iterations = sol.iterations;
        if (sol.rank == cell.L) {
            try {
                const auto est = estimate_frequencies(sol, cfg.tolerances());
                rec.freq_error = match_frequencies(model.frequencies, est.spectrum.frequencies()).error;
                rec.rank_recovered = true;
            } catch (const Error& e) {
                rec.failure = std::string("decomposition: ") + e.what();
            }
        }
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::NotConverged && e.kind() != ErrorKind::Diverged) throw;
        rec.failure = std::string("solver: ") + e.what();
    }
    rec.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

StudySummary summarize(const CellConfig& cell, const std::vector<MonteCarloRecord>& records) {
    StudySummary s;
    s.config = cell;
    s.total_trials = static_cast<int>(records.size());
    std::vector<double> errors;
    for (const auto& r : records) {
        if (r.rank_recovered) {
            ++s.successes;
            errors.push_back(r.freq_error.value_or(0.0));
        }
        if (r.failure.rfind("solver:", 0) == 0) ++s.solver_failures;
        if (r.failure.rfind("decomposition:", 0) == 0) ++s.decomposition_failures;
    }
    s.censored = s.successes < cell.target_successes;
    s.success_probability = s.total_trials > 0 ? static_cast<double>(s.successes) / s.total_trials : 0.0;
    if (!errors.empty()) s.error_quantiles = quantiles(errors);
    return s;
}

CellResult run_cell(const CellConfig& cell, int jobs) {
    if (cell.target_successes < 1 || cell.max_trials < 1 || cell.L < 0 || cell.n < 8)
        throw Error(ErrorKind::InvalidArgument, "run_cell: need target >= 1, max_trials >= 1, L >= 0, n >= 8");
    jobs = std::max(1, jobs);
    CellResult out;
    int successes = 0;
    int next = 0;
    while (successes < cell.target_successes && next < cell.max_trials) {
        const int batch = std::min(jobs, cell.max_trials - next);
        std::vector<MonteCarloRecord> recs(static_cast<size_t>(batch));
        std::vector<std::exception_ptr> errs(static_cast<size_t>(batch));
        {
            std::vector<std::jthread> workers;
            for (int w = 0; w < batch; ++w) {
                workers.emplace_back([&, w] {
                    try {
                        recs[static_cast<size_t>(w)] = run_trial(cell, next + w);
                    } catch (...) {
                        errs[static_cast<size_t>(w)] = std::current_exception();
                    }
                });
            }
        }
        for (int w = 0; w < batch && successes < cell.target_successes; ++w) {
            if (errs[static_cast<size_t>(w)]) std::rethrow_exception(errs[static_cast<size_t>(w)]);
            out.records.push_back(recs[static_cast<size_t>(w)]);
            if (recs[static_cast<size_t>(w)].rank_recovered) ++successes;
        }
        next += batch;
    }
    out.summary = summarize(cell, out.records);
    return out;
}

namespace {

std::string fmt_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

double parse_double(const std::string& s) {
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    return std::stod(s);
}

}  // namespace

void write_csv_row(std::ostream& os, const MonteCarloRecord& r) {
    os << r.trial << ',' << r.seed << ',' << r.L << ',' << fmt_double(r.snr_db) << ','
       << (r.rank_recovered ? 1 : 0) << ',' << (r.freq_error ? fmt_double(*r.freq_error) : "") << ','
       << r.solve_iterations << ',' << std::fixed << std::setprecision(6) << r.wall_time_s
       << std::defaultfloat << '\n';
}

std::vector<MonteCarloRecord> read_csv(std::istream& is) {
    std::vector<MonteCarloRecord> out;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line.rfind("trial,", 0) == 0) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (f.size() == 7 && !line.empty() && line.back() == ',') f.emplace_back();
        if (f.size() != 8) throw Error(ErrorKind::InvalidArgument, "malformed CSV row: " + line);
        MonteCarloRecord r;
        r.trial = std::stoi(f[0]);
        r.seed = std::stoull(f[1]);
        r.L = std::stoi(f[2]);
        r.snr_db = parse_double(f[3]);
        r.rank_recovered = f[4] == "1";
        if (!f[5].empty()) r.freq_error = parse_double(f[5]);
        r.solve_iterations = std::stoi(f[6]);
        r.wall_time_s = parse_double(f[7]);
        out.push_back(r);
    }
    return out;
}

}  // namespace specline
