#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include <CLI11.hpp>

#include "specline/atomic_norm.hpp"
#include "specline/error.hpp"
#include "specline/experiment.hpp"
#include "specline/json_io.hpp"

namespace specline::cli {

namespace fs = std::filesystem;

namespace {

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

double parse_real(const std::string& s) {
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != s.size() || s.empty()) throw Error(ErrorKind::InvalidArgument, "not a number: '" + s + "'");
    return v;
}

std::vector<double> parse_real_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        out.push_back(parse_real(item));
    }
    if (out.empty()) throw Error(ErrorKind::InvalidArgument, "empty list");
    return out;
}

Json snr_json(double snr_db) { return std::isinf(snr_db) ? Json("inf") : Json(snr_db); }

Json quantiles_json(const std::optional<Quantiles>& q) {
    if (!q) return nullptr;
    return {{"min", q->min}, {"q25", q->q25}, {"median", q->median}, {"q75", q->q75}, {"max", q->max}};
}

// Output JSON carries the generator id, the resolved configuration and a
// timestamp; the timestamp is the only field that differs between reruns.
void stamp(Json& j, Json config) {
    j["config"] = std::move(config);
    j["generator"] = std::string(Rng::kGeneratorId);
    j["timestamp"] = utc_timestamp();
}

SolverConfig load_solver_config(const std::string& path, SolverConfig base) {
    if (path.empty()) return base;
    return solver_config_from_json(read_json_file(path), base);
}

// ---- generate -------------------------------------------------------------

struct GenerateArgs {
    int n = 64;
    std::string freqs;
    int random_freqs = -1;
    std::string snr_db;
    std::uint64_t seed = 0;
    double min_separation = 0.0;
    std::string out;
    std::string truth;
};

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
    if (a.n < 1) throw Error(ErrorKind::InvalidArgument, "--n must be >= 1");
    if (a.freqs.empty() == (a.random_freqs < 0))
        throw Error(ErrorKind::InvalidArgument, "exactly one of --freqs or --random-freqs is required");

    Rng rng(a.seed);
    SinusoidModel model;
    model.n = a.n;
    if (!a.freqs.empty()) {
        for (double t : parse_real_list(a.freqs)) model.frequencies.push_back(wrap_angle(t));
    } else {
        model.frequencies = random_frequencies(a.random_freqs, rng, a.min_separation);
    }
    model.amplitudes = random_amplitudes(static_cast<int>(model.frequencies.size()), rng);

    const bool noisy = !a.snr_db.empty();
    const double snr = noisy ? parse_real(a.snr_db) : std::numeric_limits<double>::infinity();
    const double sigma_w = noisy && !std::isinf(snr) ? snr_to_sigma(snr) : 0.0;
    const auto y = add_noise(synthesize(model), {sigma_w, derive_seed(a.seed, 1)});

    Json config = {{"command", "generate"}, {"n", a.n},        {"seed", a.seed},
                   {"snr_db", snr_json(snr)}, {"sigma_w", sigma_w}, {"min_separation", a.min_separation}};
    if (!a.freqs.empty()) config["freqs"] = a.freqs;
    else config["random_freqs"] = a.random_freqs;

    Json meas = to_json(y);
    stamp(meas, config);
    write_json_file(a.out, meas);

    const fs::path truth_path = a.truth.empty() ? fs::path(a.out).replace_extension(".truth.json") : fs::path(a.truth);
    Json truth = to_json(model);
    truth["sigma_w"] = sigma_w;
    truth["snr_db"] = snr_json(snr);
    stamp(truth, config);
    write_json_file(truth_path, truth);

    out << "wrote " << a.out << " and " << truth_path.string() << "\n";
    if (!model.frequencies.empty()) {
        const auto sep = check_separation(model.frequencies, a.n);
        out << "separation: min circular distance " << sep.min_distance << " rad, ratio "
            << sep.min_distance / (2.0 * M_PI) << " vs 4/n = " << 4.0 / a.n << " -> "
            << (sep.satisfied ? "satisfied" : "not satisfied") << "\n";
    }
    return kOk;
}

// ---- estimate -------------------------------------------------------------

struct EstimateArgs {
    std::string in;
    std::string mode = "noiseless";
    double tau = -1.0;
    std::string solver_config;
    std::string out;
    std::string truth;
};

int cmd_estimate(const EstimateArgs& a, std::ostream& out, std::ostream& err) {
    const auto y = measurement_from_json(read_json_file(a.in));
    const bool denoise = a.mode == "denoise";
    SolverConfig cfg = load_solver_config(a.solver_config, denoise ? SolverConfig::denoise() : SolverConfig::noiseless());

    Json diag;
    SdpSolution sol;
    try {
        if (denoise) {
            double tau = a.tau;
            if (tau <= 0.0) {
                const double var = estimate_noise_variance(y);
                diag["noise_variance_estimate"] = var;
                tau = compute_tau(std::sqrt(std::max(0.0, var)), y.n());
            }
            diag["tau"] = tau;
            if (tau > 0.0) sol = solve_denoise({y, tau}, cfg);
            else sol = solve_noiseless({y}, cfg);  // zero input, nothing to regularize
        } else {
            sol = solve_noiseless({y}, cfg);
        }
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::NotConverged || e.kind() == ErrorKind::Diverged) {
            err << "solver failure: " << e.what() << "\n";
            return kNotConverged;
        }
        throw;
    }
    diag["objective"] = sol.objective;
    diag["objective_is_lower_bound_only"] = sol.lower_bound_only;
    diag["rank"] = sol.rank;
    diag["rank_ok"] = sol.rank_ok;
    diag["iterations"] = sol.iterations;
    diag["primal_residual"] = sol.primal_residual;
    diag["dual_residual"] = sol.dual_residual;
    diag["b"] = sol.b;

    FrequencyEstimate est;
    try {
        est = estimate_frequencies(sol, cfg.tolerances());
    } catch (const Error& e) {
        err << "decomposition failure: " << e.what() << "\n";
        return kDecompositionFailed;
    }
    diag["atoms"] = est.spectrum.size();
    if (!a.truth.empty()) {
        const auto model = model_from_json(read_json_file(a.truth));
        const auto m = match_frequencies(model.frequencies, est.spectrum.frequencies());
        diag["freq_error"] = m.error;
        diag["matched"] = m.matched;
    }

    Json result = to_json(est.spectrum);
    result["diagnostics"] = diag;
    Json config = {{"command", "estimate"}, {"in", a.in}, {"mode", a.mode}, {"solver", to_json(cfg)}};
    if (a.tau > 0.0) config["tau"] = a.tau;
    stamp(result, config);
    if (!a.out.empty()) write_json_file(a.out, result);

    out << "objective " << sol.objective << (sol.lower_bound_only ? " (lower bound only)" : "") << ", rank "
        << sol.rank << ", rank_ok " << (sol.rank_ok ? "true" : "false") << ", iterations " << sol.iterations
        << "\n";
    out << est.spectrum.size() << " frequencies:";
    for (double t : est.spectrum.frequencies()) out << ' ' << std::setprecision(10) << t;
    out << "\n";
    if (diag.contains("freq_error")) out << "frequency error vs truth: " << diag["freq_error"].get<double>() << "\n";
    return kOk;
}

// ---- decompose ------------------------------------------------------------

struct DecomposeArgs {
    std::string in;
    double epsilon = 1e-4;
    double delta_theta = 1e-6;
    std::string out;
};

int cmd_decompose(const DecomposeArgs& a, std::ostream& out, std::ostream& err) {
    const auto sigma = covariance_from_json(read_json_file(a.in));
    Tolerances tol;
    tol.epsilon_rank = a.epsilon;
    tol.delta_theta = a.delta_theta;
    const auto report = boundary_check(sigma, a.epsilon);
    out << "rank " << report.rank << " of " << report.dim << ", min eigenvalue " << report.min_eig
        << (report.is_psd ? ", PSD" : ", not PSD") << "\n";

    LineSpectrum spec;
    try {
        spec = decompose(sigma, tol);
    } catch (const Error& e) {
        err << "decomposition failure: " << e.what() << "\n";
        return e.kind() == ErrorKind::InteriorPoint ? kInteriorPoint : kDecompositionFailed;
    }
    const double residual = reconstruction_residual(sigma, spec);
    for (const auto& w : spec.warnings) err << "warning: " << w << "\n";
    out << spec.size() << " atoms, reconstruction residual " << residual << "\n";

    Json result = to_json(spec);
    result["diagnostics"] = {{"rank", report.rank}, {"min_eig", report.min_eig}, {"reconstruction_residual", residual}};
    stamp(result, {{"command", "decompose"}, {"in", a.in}, {"epsilon", a.epsilon}, {"delta_theta", a.delta_theta}});
    if (!a.out.empty()) write_json_file(a.out, result);
    return kOk;
}

// ---- montecarlo -----------------------------------------------------------

struct MonteCarloArgs {
    int n = 64;
    std::string L = "4";
    std::string snr_db = "0,10,20";
    int target_successes = 50;
    int max_trials = 1000;
    std::uint64_t seed = 0;
    int jobs = 1;
    double min_separation = 0.0;
    bool fixed_freqs = false;
    std::string solver_config;
    std::string out_dir = ".";
};

int cmd_montecarlo(const MonteCarloArgs& a, std::ostream& out) {
    int jobs = a.jobs;
    if (const char* env = std::getenv("SPECLINE_THREADS"); env != nullptr && *env != '\0') {
        jobs = static_cast<int>(parse_real(env));
    }
    if (jobs < 1) throw Error(ErrorKind::InvalidArgument, "--jobs must be >= 1");
    const auto ls = parse_real_list(a.L);
    const auto snrs = parse_real_list(a.snr_db);

    CellConfig base;
    base.n = a.n;
    base.target_successes = a.target_successes;
    base.max_trials = a.max_trials;
    base.seed = a.seed;
    base.min_separation = a.min_separation;
    base.fixed_frequencies = a.fixed_freqs;
    base.noiseless_solver = load_solver_config(a.solver_config, SolverConfig::noiseless());
    base.denoise_solver = load_solver_config(a.solver_config, SolverConfig::denoise());

    fs::create_directories(a.out_dir);
    const fs::path csv_path = fs::path(a.out_dir) / "trials.csv";
    std::ofstream csv(csv_path);
    if (!csv) throw Error(ErrorKind::Io, "cannot write " + csv_path.string());
    csv << kCsvHeader << '\n';

    Json cells = Json::array();
    for (double l : ls) {
        for (double snr : snrs) {
            CellConfig cell = base;
            cell.L = static_cast<int>(l);
            cell.snr_db = snr;
            const auto res = run_cell(cell, jobs);
            for (const auto& r : res.records) write_csv_row(csv, r);
            const auto& s = res.summary;
            cells.push_back({{"L", cell.L},
                             {"snr_db", snr_json(snr)},
                             {"total_trials", s.total_trials},
                             {"successes", s.successes},
                             {"censored", s.censored},
                             {"success_probability", s.success_probability},
                             {"error_quantiles", quantiles_json(s.error_quantiles)},
                             {"solver_failures", s.solver_failures},
                             {"decomposition_failures", s.decomposition_failures}});
            out << "L=" << cell.L << " snr=" << snr << " dB: " << s.successes << "/" << s.total_trials
                << " (p=" << s.success_probability << ")" << (s.censored ? " censored" : "");
            if (s.error_quantiles) out << ", median error " << s.error_quantiles->median;
            out << "\n";
        }
    }

    Json summary = {{"cells", cells}};
    stamp(summary, {{"command", "montecarlo"},
                    {"n", a.n},
                    {"L", a.L},
                    {"snr_db", a.snr_db},
                    {"target_successes", a.target_successes},
                    {"max_trials", a.max_trials},
                    {"master_seed", a.seed},
                    {"min_separation", a.min_separation},
                    {"fixed_frequencies", a.fixed_freqs},
                    {"solver_noiseless", to_json(base.noiseless_solver)},
                    {"solver_denoise", to_json(base.denoise_solver)}});
    write_json_file(fs::path(a.out_dir) / "summary.json", summary);
    out << "wrote " << csv_path.string() << " and " << (fs::path(a.out_dir) / "summary.json").string() << "\n";
    return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Two-channel line-spectrum estimation by atomic-norm SDP and block-Toeplitz Vandermonde decomposition",
                 "specline"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* g = app.add_subcommand("generate", "Synthesize a two-channel measurement file and its ground truth");
    g->add_option("--n", gen.n, "Last sample index (n + 1 samples)");
    g->add_option("--freqs", gen.freqs, "Comma-separated frequencies in radians");
    g->add_option("--random-freqs", gen.random_freqs, "Draw this many uniform frequencies instead");
    g->add_option("--snr-db", gen.snr_db, "Signal-to-noise ratio in dB (omit for noiseless)");
    g->add_option("--seed", gen.seed, "Seed for frequencies, amplitudes and noise");
    g->add_option("--min-separation", gen.min_separation, "Rejection-sample random frequencies to this separation");
    g->add_option("--out", gen.out, "Measurement JSON path")->required();
    g->add_option("--truth", gen.truth, "Ground-truth JSON path (default: out path with extension .truth.json)");

    EstimateArgs est;
    auto* e = app.add_subcommand("estimate", "Solve the atomic-norm SDP and decompose the result");
    e->add_option("--in", est.in, "Measurement JSON")->required();
    e->add_option("--mode", est.mode, "noiseless or denoise")->check(CLI::IsMember({"noiseless", "denoise"}));
    e->add_option("--tau", est.tau, "Regularization weight (default: estimated from the data)");
    e->add_option("--solver-config", est.solver_config, "Solver configuration JSON");
    e->add_option("--out", est.out, "Line spectrum JSON output");
    e->add_option("--truth", est.truth, "Ground-truth JSON for an error report");

    DecomposeArgs dec;
    auto* d = app.add_subcommand("decompose", "Vandermonde-decompose a covariance sequence");
    d->add_option("--in", dec.in, "Covariance sequence JSON")->required();
    d->add_option("--epsilon", dec.epsilon, "Numerical-rank threshold");
    d->add_option("--delta-theta", dec.delta_theta, "Frequency clustering tolerance (radians)");
    d->add_option("--out", dec.out, "Line spectrum JSON output");

    MonteCarloArgs mc;
    auto* m = app.add_subcommand("montecarlo", "Rank-recovery and frequency-error study");
    m->add_option("--n", mc.n, "Last sample index");
    m->add_option("--L", mc.L, "Comma-separated source counts");
    m->add_option("--snr-db", mc.snr_db, "Comma-separated SNR grid in dB ('inf' = noiseless)");
    m->add_option("--target-successes", mc.target_successes, "Stop a cell after this many rank recoveries");
    m->add_option("--max-trials", mc.max_trials, "Trial cap per cell (cell is censored when reached)");
    m->add_option("--seed", mc.seed, "Master seed");
    m->add_option("--jobs", mc.jobs, "Worker threads (SPECLINE_THREADS overrides)");
    m->add_option("--min-separation", mc.min_separation, "Minimum frequency separation for draws (radians)");
    m->add_flag("--fixed-freqs", mc.fixed_freqs, "Keep one frequency draw per cell instead of redrawing per trial");
    m->add_option("--solver-config", mc.solver_config, "Solver configuration JSON");
    m->add_option("--out-dir", mc.out_dir, "Directory for trials.csv and summary.json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& pe) {
        if (pe.get_exit_code() == 0) return app.exit(pe, out, err);
        err << "usage error: " << pe.what() << "\n" << app.help();
        return kUsage;
    }

    try {
        if (*g) return cmd_generate(gen, out);
        if (*e) return cmd_estimate(est, out, err);
        if (*d) return cmd_decompose(dec, out, err);
        if (*m) return cmd_montecarlo(mc, out);
    } catch (const Error& ex) {
        err << "error (" << to_string(ex.kind()) << "): " << ex.what() << "\n";
        return kUsage;
    }
    return kUsage;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv;
    argv.push_back("specline");
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace specline::cli
