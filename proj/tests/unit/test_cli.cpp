#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "../../tools/commands.hpp"
#include "specline/experiment.hpp"
#include "specline/json_io.hpp"

namespace fs = std::filesystem;
using namespace specline;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("specline_cli_" + std::to_string(std::rand()) + "_" +
                                            std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

struct Result {
    int code;
    std::string out, err;
};

Result run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string without_timestamp(const std::string& path) {
    std::ifstream in(path);
    std::string line, text;
    while (std::getline(in, line))
        if (line.find("\"timestamp\"") == std::string::npos) text += line + "\n";
    return text;
}

}  // namespace

TEST_CASE("help and usage errors") {
    CHECK(run({"--help"}).code == 0);
    CHECK(run({}).code == cli::kUsage);
    CHECK(run({"frobnicate"}).code == cli::kUsage);
    CHECK(run({"generate"}).code == cli::kUsage);
    CHECK(run({"estimate", "--in", "/nonexistent.json"}).code == cli::kUsage);
    TempDir dir;
    CHECK(run({"estimate", "--in", dir / "x.json", "--mode", "fancy"}).code == cli::kUsage);
}

TEST_CASE("generate then estimate (noiseless) recovers the frequencies") {
    TempDir dir;
    auto g = run({"generate", "--n", "24", "--freqs", "-2.0,-0.5,1.5", "--seed", "3", "--out", dir / "y.json"});
    REQUIRE(g.code == 0);
    CHECK(g.out.find("separation") != std::string::npos);
    CHECK(fs::exists(dir / "y.truth.json"));
    const auto y = measurement_from_json(read_json_file(dir / "y.json"));
    CHECK(y.n() == 24);

    auto e = run({"estimate", "--in", dir / "y.json", "--out", dir / "spec.json", "--truth", dir / "y.truth.json"});
    REQUIRE(e.code == 0);
    const auto j = read_json_file(dir / "spec.json");
    CHECK(j.contains("generator"));
    CHECK(j.contains("config"));
    CHECK(j.contains("timestamp"));
    const auto spec = spectrum_from_json(j);
    REQUIRE(spec.size() == 3);
    CHECK(j["diagnostics"]["freq_error"].get<double>() <= 1e-3);
}

TEST_CASE("estimate is byte-identical across runs apart from the timestamp") {
    TempDir dir;
    REQUIRE(run({"generate", "--n", "16", "--random-freqs", "2", "--min-separation", "1.6", "--snr-db", "20",
                 "--seed", "8", "--out", dir / "y.json"}).code == 0);
    const auto g1 = without_timestamp(dir / "y.json");
    REQUIRE(run({"generate", "--n", "16", "--random-freqs", "2", "--min-separation", "1.6", "--snr-db", "20",
                 "--seed", "8", "--out", dir / "y.json"}).code == 0);
    CHECK(g1 == without_timestamp(dir / "y.json"));

    REQUIRE(run({"estimate", "--in", dir / "y.json", "--mode", "denoise", "--out", dir / "a.json"}).code == 0);
    REQUIRE(run({"estimate", "--in", dir / "y.json", "--mode", "denoise", "--out", dir / "b.json"}).code == 0);
    CHECK(without_timestamp(dir / "a.json") == without_timestamp(dir / "b.json"));
    const auto j = read_json_file(dir / "a.json");
    CHECK(j["diagnostics"].contains("tau"));
    CHECK(j["diagnostics"].contains("noise_variance_estimate"));
}

TEST_CASE("estimate on all-zero input gives an empty spectrum") {
    TempDir dir;
    MeasurementVector zero;
    zero.samples = CVector::Zero(18);
    write_json_file(dir / "z.json", to_json(zero));
    for (const char* mode : {"noiseless", "denoise"}) {
        auto r = run({"estimate", "--in", dir / "z.json", "--mode", mode, "--out", dir / "s.json"});
        REQUIRE(r.code == 0);
        CHECK(spectrum_from_json(read_json_file(dir / "s.json")).size() == 0);
    }
}

TEST_CASE("estimate reports solver failure with exit code 2") {
    TempDir dir;
    REQUIRE(run({"generate", "--n", "16", "--freqs", "0.3,1.9", "--out", dir / "y.json"}).code == 0);
    std::ofstream(dir / "cfg.json") << R"({"max_iter": 2})";
    auto r = run({"estimate", "--in", dir / "y.json", "--solver-config", dir / "cfg.json"});
    CHECK(r.code == cli::kNotConverged);
    CHECK(r.err.find("residual") != std::string::npos);
}

TEST_CASE("decompose: exit codes and warnings") {
    TempDir dir;
    // Positive definite: interior point.
    write_json_file(dir / "pd.json", to_json(CovarianceSequence(2, {CMatrix::Identity(2, 2), CMatrix::Zero(2, 2)})));
    CHECK(run({"decompose", "--in", dir / "pd.json"}).code == cli::kInteriorPoint);

    // Indefinite.
    CMatrix s0 = CMatrix::Identity(2, 2);
    CMatrix s1 = 3.0 * CMatrix::Identity(2, 2);
    write_json_file(dir / "bad.json", to_json(CovarianceSequence(2, {s0, s1})));
    auto bad = run({"decompose", "--in", dir / "bad.json"});
    CHECK(bad.code == cli::kDecompositionFailed);
    CHECK(bad.err.find("decomposition failure") != std::string::npos);

    // Boundary point with a small perturbation: marginal-rank warning.
    const int n = 6;
    const cdouble z = std::polar(1.0, 0.7);
    std::vector<CMatrix> blocks;
    for (int k = 0; k <= n; ++k) {
        CMatrix b = CMatrix::Zero(2, 2);
        b(0, 0) = std::pow(z, k);
        blocks.push_back(b);
    }
    blocks[0] += 5e-5 * CMatrix::Identity(2, 2);
    write_json_file(dir / "marg.json", to_json(CovarianceSequence(2, blocks)));
    auto marg = run({"decompose", "--in", dir / "marg.json", "--out", dir / "marg_out.json"});
    CHECK(marg.code == 0);
    CHECK(marg.err.find(kWarnMarginalRank) != std::string::npos);
    const auto spec = spectrum_from_json(read_json_file(dir / "marg_out.json"));
    REQUIRE(spec.size() == 1);
    CHECK(spec.atoms[0].theta == doctest::Approx(0.7).epsilon(1e-6));

    CovarianceSequence zero = CovarianceSequence::zero(2, 3);
    write_json_file(dir / "zero.json", to_json(zero));
    auto zr = run({"decompose", "--in", dir / "zero.json", "--out", dir / "zero_out.json"});
    CHECK(zr.code == 0);
    CHECK(spectrum_from_json(read_json_file(dir / "zero_out.json")).size() == 0);
}

TEST_CASE("montecarlo writes CSV and summary, independent of job count") {
    TempDir dir;
    const std::vector<std::string> base{"montecarlo", "--n", "16", "--L", "2", "--snr-db", "20,inf",
                                        "--target-successes", "2", "--max-trials", "3", "--seed", "4",
                                        "--min-separation", "1.6"};
    auto args1 = base;
    args1.insert(args1.end(), {"--jobs", "1", "--out-dir", dir / "one"});
    auto args2 = base;
    args2.insert(args2.end(), {"--jobs", "2", "--out-dir", dir / "two"});
    REQUIRE(run(args1).code == 0);
    REQUIRE(run(args2).code == 0);

    std::ifstream csv(dir / "one/trials.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header == kCsvHeader);
    const auto rows = read_csv(csv);
    CHECK(rows.size() >= 4);
    for (const auto& r : rows) CHECK(r.freq_error.has_value() == r.rank_recovered);

    const auto s1 = read_json_file(dir / "one/summary.json");
    const auto s2 = read_json_file(dir / "two/summary.json");
    REQUIRE(s1.contains("cells"));
    CHECK(s1["cells"].size() == 2);
    CHECK(s1["cells"] == s2["cells"]);
    CHECK(s1.contains("generator"));
}

TEST_CASE("installed binary runs") {
    const std::string cmd = std::string("\"") + SPECLINE_TOOL_PATH + "\" --help > /dev/null";
    CHECK(std::system(cmd.c_str()) == 0);
}
