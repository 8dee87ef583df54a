#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "specline/error.hpp"
#include "specline/json_io.hpp"
#include "test_util.hpp"

using namespace specline;
using specline::testing::Gen;

TEST_CASE("covariance sequence round trip") {
    Gen gen(4);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = gen.integer(0, 6);
        std::vector<CMatrix> blocks;
        blocks.push_back(gen.hermitian(2).matrix());
        for (int k = 1; k <= n; ++k) blocks.push_back(gen.cmatrix(2, 2));
        const CovarianceSequence s(2, blocks);
        const Json j = to_json(s);
        CHECK(j.at("m") == 2);
        CHECK(j.at("n") == n);
        const auto back = covariance_from_json(Json::parse(j.dump()));
        REQUIRE(back.n() == n);
        for (int k = 0; k <= n; ++k) CHECK((back[k] - s[k]).norm() == 0.0);
    }
}

TEST_CASE("line spectrum round trip") {
    Gen gen(5);
    const auto spec = gen.spectrum(3, 0.5, 2, 2);
    LineSpectrum ls = spec;
    ls.warnings.push_back(kWarnMarginalRank);
    const Json j = to_json(ls);
    CHECK(j.at("atoms").size() == 3);
    CHECK(j.at("atoms")[0].contains("theta"));
    CHECK(j.at("atoms")[0].contains("Q"));
    const auto back = spectrum_from_json(Json::parse(j.dump()));
    REQUIRE(back.size() == 3);
    for (size_t l = 0; l < 3; ++l) {
        CHECK(back.atoms[l].theta == ls.atoms[l].theta);
        CHECK((back.atoms[l].q - ls.atoms[l].q).norm() == 0.0);
    }
    CHECK(back.has_warning(kWarnMarginalRank));
}

TEST_CASE("measurement and model round trip") {
    const SinusoidModel model{{-1.0, 0.5}, random_amplitudes(2, 8), 10};
    const auto y = synthesize(model);
    const Json jy = to_json(y);
    CHECK(jy.at("n") == 10);
    CHECK(jy.at("channels") == 2);
    CHECK(jy.at("samples").size() == 22);
    CHECK((measurement_from_json(Json::parse(jy.dump())).samples - y.samples).norm() == 0.0);

    const auto m = model_from_json(Json::parse(to_json(model).dump()));
    CHECK(m.n == 10);
    CHECK(m.frequencies == model.frequencies);
    CHECK((m.amplitudes[1] - model.amplitudes[1]).norm() == 0.0);
}

TEST_CASE("solver config keys and defaults") {
    const Json j = to_json(SolverConfig{});
    for (const char* k : {"rho", "tol_primal", "tol_dual", "max_iter", "epsilon_rank", "delta_theta"})
        CHECK(j.contains(k));
    const auto partial = solver_config_from_json(Json::parse(R"({"max_iter": 12, "rho": 2.5})"),
                                                 SolverConfig::denoise());
    CHECK(partial.max_iter == 12);
    CHECK(partial.rho == 2.5);
    CHECK(partial.tol_primal == SolverConfig::denoise().tol_primal);
}

TEST_CASE("malformed input is rejected") {
    CHECK_THROWS_AS(covariance_from_json(Json::parse(R"({"m": 2, "n": 1, "blocks": []})")), Error);
    CHECK_THROWS_AS(measurement_from_json(Json::parse(R"({"n": 3, "channels": 2, "samples": [[1,0]]})")), Error);
    CHECK_THROWS_AS(measurement_from_json(Json::parse(R"({"n": 0, "channels": 2, "samples": [[1,0],["a",0]]})")),
                    Error);
    CHECK_THROWS_AS(spectrum_from_json(Json::parse(R"({"atoms": 3})")), Error);
    CHECK_THROWS_AS(solver_config_from_json(Json::parse(R"({"rho": "x"})")), Error);
    CHECK_THROWS_AS(read_json_file("/nonexistent/dir/file.json"), Error);

    const auto path = std::filesystem::temp_directory_path() / "specline_bad.json";
    std::ofstream(path) << "{not json";
    CHECK_THROWS_AS(read_json_file(path), Error);
    std::filesystem::remove(path);
}
