#include "specline/json_io.hpp"

#include <fstream>
#include <sstream>

#include "specline/error.hpp"

namespace specline {

namespace {

Json complex_to_json(cdouble z) { return Json::array({z.real(), z.imag()}); }

cdouble complex_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 2) throw Error(ErrorKind::InvalidArgument, "complex value must be [re, im]");
    return {j.at(0).get<double>(), j.at(1).get<double>()};
}

Json matrix_to_json(const CMatrix& a) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < a.cols(); ++c) row.push_back(complex_to_json(a(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

CMatrix matrix_from_json(const Json& j, int m) {
    if (!j.is_array() || static_cast<int>(j.size()) != m)
        throw Error(ErrorKind::InvalidArgument, "matrix must have " + std::to_string(m) + " rows");
    CMatrix a(m, m);
    for (int r = 0; r < m; ++r) {
        const Json& row = j.at(static_cast<size_t>(r));
        if (!row.is_array() || static_cast<int>(row.size()) != m)
            throw Error(ErrorKind::InvalidArgument, "matrix row must have " + std::to_string(m) + " entries");
        for (int c = 0; c < m; ++c) a(r, c) = complex_from_json(row.at(static_cast<size_t>(c)));
    }
    return a;
}

template <class F>
auto guarded(const char* what, F&& f) {
    try {
        return f();
    } catch (const Json::exception& e) {
        throw Error(ErrorKind::InvalidArgument, std::string("malformed ") + what + " JSON: " + e.what());
    }
}

}  // namespace

Json to_json(const CovarianceSequence& sigma) {
    Json blocks = Json::array();
    for (const auto& b : sigma.blocks()) blocks.push_back(matrix_to_json(b));
    return {{"m", sigma.block_size()}, {"n", sigma.n()}, {"blocks", blocks}};
}

CovarianceSequence covariance_from_json(const Json& j) {
    return guarded("covariance sequence", [&] {
        const int m = j.at("m").get<int>();
        const int n = j.at("n").get<int>();
        const Json& blocks = j.at("blocks");
        if (m < 1 || n < 0 || !blocks.is_array() || static_cast<int>(blocks.size()) != n + 1)
            throw Error(ErrorKind::InvalidArgument, "covariance sequence needs n + 1 blocks of size m");
        std::vector<CMatrix> out;
        for (const auto& b : blocks) out.push_back(matrix_from_json(b, m));
        return CovarianceSequence(m, std::move(out));
    });
}

Json to_json(const LineSpectrum& spec) {
    Json atoms = Json::array();
    for (const auto& a : spec.atoms) atoms.push_back({{"theta", a.theta}, {"Q", matrix_to_json(a.q)}});
    Json j = {{"m", spec.m}, {"atoms", atoms}};
    if (!spec.warnings.empty()) j["warnings"] = spec.warnings;
    return j;
}

LineSpectrum spectrum_from_json(const Json& j) {
    return guarded("line spectrum", [&] {
        LineSpectrum spec;
        spec.m = j.at("m").get<int>();
        if (spec.m < 1) throw Error(ErrorKind::InvalidArgument, "line spectrum block size must be positive");
        for (const auto& a : j.at("atoms"))
            spec.atoms.push_back({a.at("theta").get<double>(), matrix_from_json(a.at("Q"), spec.m)});
        if (j.contains("warnings")) spec.warnings = j.at("warnings").get<std::vector<std::string>>();
        return spec;
    });
}

Json to_json(const MeasurementVector& y) {
    Json samples = Json::array();
    for (Eigen::Index i = 0; i < y.samples.size(); ++i) samples.push_back(complex_to_json(y.samples(i)));
    return {{"n", y.n()}, {"channels", 2}, {"samples", samples}};
}

MeasurementVector measurement_from_json(const Json& j) {
    return guarded("measurement vector", [&] {
        const int n = j.at("n").get<int>();
        const int channels = j.value("channels", 2);
        const Json& samples = j.at("samples");
        if (channels != 2) throw Error(ErrorKind::InvalidArgument, "only two-channel measurements are supported");
        if (n < 0 || !samples.is_array() || static_cast<int>(samples.size()) != 2 * (n + 1))
            throw Error(ErrorKind::InvalidArgument, "measurement vector needs 2(n + 1) samples");
        MeasurementVector y;
        y.samples.resize(2 * (n + 1));
        for (int i = 0; i < 2 * (n + 1); ++i) y.samples(i) = complex_from_json(samples.at(static_cast<size_t>(i)));
        return y;
    });
}

Json to_json(const SinusoidModel& model) {
    Json amps = Json::array();
    for (const auto& s : model.amplitudes) amps.push_back({complex_to_json(s(0)), complex_to_json(s(1))});
    return {{"n", model.n}, {"frequencies", model.frequencies}, {"amplitudes", amps}};
}

SinusoidModel model_from_json(const Json& j) {
    return guarded("sinusoid model", [&] {
        SinusoidModel model;
        model.n = j.at("n").get<int>();
        model.frequencies = j.at("frequencies").get<std::vector<double>>();
        for (const auto& a : j.at("amplitudes")) {
            if (!a.is_array() || a.size() != 2) throw Error(ErrorKind::InvalidArgument, "amplitude must be a 2-vector");
            model.amplitudes.emplace_back(complex_from_json(a.at(0)), complex_from_json(a.at(1)));
        }
        if (model.amplitudes.size() != model.frequencies.size())
            throw Error(ErrorKind::InvalidArgument, "one amplitude per frequency required");
        return model;
    });
}

Json to_json(const SolverConfig& cfg) {
    return {{"rho", cfg.rho},
            {"tol_primal", cfg.tol_primal},
            {"tol_dual", cfg.tol_dual},
            {"max_iter", cfg.max_iter},
            {"epsilon_rank", cfg.epsilon_rank},
            {"delta_theta", cfg.delta_theta},
            {"relaxation", cfg.relaxation},
            {"balance_ratio", cfg.balance_ratio},
            {"balance_interval", cfg.balance_interval}};
}

SolverConfig solver_config_from_json(const Json& j, SolverConfig base) {
    return guarded("solver config", [&] {
        if (!j.is_object()) throw Error(ErrorKind::InvalidArgument, "solver config must be a JSON object");
        SolverConfig c = base;
        c.rho = j.value("rho", c.rho);
        c.tol_primal = j.value("tol_primal", c.tol_primal);
        c.tol_dual = j.value("tol_dual", c.tol_dual);
        c.max_iter = j.value("max_iter", c.max_iter);
        c.epsilon_rank = j.value("epsilon_rank", c.epsilon_rank);
        c.delta_theta = j.value("delta_theta", c.delta_theta);
        c.relaxation = j.value("relaxation", c.relaxation);
        c.balance_ratio = j.value("balance_ratio", c.balance_ratio);
        c.balance_interval = j.value("balance_interval", c.balance_interval);
        return c;
    });
}

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw Error(ErrorKind::InvalidArgument, "cannot parse " + path.string() + ": " + e.what());
    }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
    out << j.dump(2) << '\n';
}

}  // namespace specline
