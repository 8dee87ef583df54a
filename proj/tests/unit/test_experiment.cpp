#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <sstream>

#include "specline/experiment.hpp"
#include "test_util.hpp"

using namespace specline;
using specline::testing::Gen;

namespace {

double brute_force_min(const Eigen::MatrixXd& c) {
    const int rows = static_cast<int>(c.rows());
    const int cols = static_cast<int>(c.cols());
    std::vector<int> perm(std::max(rows, cols));
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        double s = 0.0;
        for (int i = 0; i < rows; ++i)
            if (perm[i] < cols) s += c(i, perm[i]);
        best = std::min(best, s);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

}  // namespace

TEST_CASE("optimal_assignment matches brute force") {
    Gen gen(3);
    for (int trial = 0; trial < 200; ++trial) {
        const int rows = gen.integer(1, 6);
        const int cols = gen.integer(1, 6);
        Eigen::MatrixXd c(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) c(i, j) = gen.uniform(0.0, 10.0);
        const auto a = optimal_assignment(c);
        REQUIRE(a.size() == static_cast<size_t>(rows));
        double total = 0.0;
        std::vector<int> used;
        for (int i = 0; i < rows; ++i) {
            if (a[i] < 0) continue;
            total += c(i, a[i]);
            used.push_back(a[i]);
        }
        std::sort(used.begin(), used.end());
        CHECK(std::adjacent_find(used.begin(), used.end()) == used.end());
        CHECK(static_cast<int>(used.size()) == std::min(rows, cols));
        CHECK(total == doctest::Approx(brute_force_min(c)).epsilon(1e-12));
    }
}

TEST_CASE("match_frequencies uses circular distance") {
    const auto m = match_frequencies({-3.1, 0.0, 1.0}, {1.001, 3.1, 0.002});
    CHECK(m.matched == 3);
    CHECK(m.assignment == std::vector<int>{1, 2, 0});
    const double expect = std::sqrt(std::pow(2 * std::numbers::pi - 6.2, 2) + 0.002 * 0.002 + 0.001 * 0.001);
    CHECK(m.error == doctest::Approx(expect).epsilon(1e-12));

    const auto fewer = match_frequencies({0.0, 1.0}, {1.01});
    CHECK(fewer.matched == 1);
    CHECK(fewer.assignment == std::vector<int>{-1, 0});
    CHECK(fewer.error == doctest::Approx(0.01));
}

TEST_CASE("quantiles") {
    const auto q = quantiles({4.0, 1.0, 3.0, 2.0, 5.0});
    CHECK(q.min == 1.0);
    CHECK(q.q25 == 2.0);
    CHECK(q.median == 3.0);
    CHECK(q.q75 == 4.0);
    CHECK(q.max == 5.0);
    const auto even = quantiles({1.0, 2.0, 3.0, 4.0});
    CHECK(even.median == doctest::Approx(2.5));
    CHECK(even.q25 == doctest::Approx(1.75));
    const auto one = quantiles({7.0});
    CHECK(one.min == 7.0);
    CHECK(one.max == 7.0);
    CHECK_THROWS(quantiles({}));
}

TEST_CASE("CSV rows round trip") {
    std::vector<MonteCarloRecord> rows(3);
    rows[0] = {0, 123456789012345ull, 4, 20.0, true, 0.0123456789012345, 311, 0.25, ""};
    rows[1] = {1, 42, 4, 20.0, false, std::nullopt, 50000, 3.5, "solver: cap"};
    rows[2] = {2, 7, 16, std::numeric_limits<double>::infinity(), true, 1e-9, 900, 1.0, ""};
    std::stringstream ss;
    ss << kCsvHeader << "\n";
    for (const auto& r : rows) write_csv_row(ss, r);
    const auto back = read_csv(ss);
    REQUIRE(back.size() == 3);
    for (size_t i = 0; i < 3; ++i) {
        CHECK(back[i].trial == rows[i].trial);
        CHECK(back[i].seed == rows[i].seed);
        CHECK(back[i].L == rows[i].L);
        CHECK(back[i].snr_db == rows[i].snr_db);
        CHECK(back[i].rank_recovered == rows[i].rank_recovered);
        CHECK(back[i].freq_error.has_value() == rows[i].freq_error.has_value());
        if (rows[i].freq_error) CHECK(*back[i].freq_error == *rows[i].freq_error);
        CHECK(back[i].solve_iterations == rows[i].solve_iterations);
        CHECK(back[i].wall_time_s == rows[i].wall_time_s);
    }
    std::ostringstream line;
    write_csv_row(line, rows[1]);
    CHECK(line.str().find(",,") != std::string::npos);
}

TEST_CASE("trial seeds are distinct and stable") {
    CHECK(trial_seed(1, 0) == trial_seed(1, 0));
    CHECK(trial_seed(1, 0) != trial_seed(1, 1));
    CHECK(trial_seed(1, 0) != trial_seed(2, 0));
}

TEST_CASE("run_cell: deterministic across job counts and consistent summary") {
    CellConfig cell;
    cell.n = 16;
    cell.L = 2;
    cell.snr_db = 20.0;
    cell.target_successes = 3;
    cell.max_trials = 6;
    cell.min_separation = 2 * std::numbers::pi * 4.0 / 16;
    cell.seed = 5;
    const auto a = run_cell(cell, 1);
    const auto b = run_cell(cell, 3);
    REQUIRE(a.records.size() == b.records.size());
    for (size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].trial == static_cast<int>(i));
        CHECK(a.records[i].seed == b.records[i].seed);
        CHECK(a.records[i].rank_recovered == b.records[i].rank_recovered);
        CHECK(a.records[i].freq_error == b.records[i].freq_error);
        CHECK(a.records[i].solve_iterations == b.records[i].solve_iterations);
        CHECK(a.records[i].freq_error.has_value() == a.records[i].rank_recovered);
    }

    const auto& s = a.summary;
    int succ = 0;
    std::vector<double> errs;
    for (const auto& r : a.records)
        if (r.rank_recovered) {
            ++succ;
            errs.push_back(*r.freq_error);
        }
    CHECK(s.total_trials == static_cast<int>(a.records.size()));
    CHECK(s.successes == succ);
    CHECK(s.success_probability == doctest::Approx(double(succ) / s.total_trials));
    CHECK(s.censored == (succ < cell.target_successes));
    CHECK((s.total_trials == cell.max_trials || succ == cell.target_successes));
    if (!errs.empty()) {
        REQUIRE(s.error_quantiles.has_value());
        CHECK(s.error_quantiles->median == doctest::Approx(quantiles(errs).median));
    }
}

TEST_CASE("run_trial: noiseless cell recovers exactly") {
    CellConfig cell;
    cell.n = 16;
    cell.L = 2;
    cell.snr_db = std::numeric_limits<double>::infinity();
    cell.min_separation = 2 * std::numbers::pi * 4.0 / 16;
    cell.seed = 9;
    const auto r = run_trial(cell, 0);
    CHECK(r.failure.empty());
    CHECK(r.rank_recovered);
    REQUIRE(r.freq_error.has_value());
    CHECK(*r.freq_error <= 1e-4);
}

TEST_CASE("run_trial: fixed frequencies share trial 0's draw") {
    CellConfig cell;
    cell.n = 16;
    cell.L = 2;
    cell.snr_db = 30.0;
    cell.min_separation = 2 * std::numbers::pi * 4.0 / 16;
    cell.seed = 12;
    CellConfig fixed = cell;
    fixed.fixed_frequencies = true;
    const auto a = run_trial(cell, 0);
    const auto b = run_trial(fixed, 0);
    CHECK(a.freq_error == b.freq_error);
    CHECK(a.solve_iterations == b.solve_iterations);
    const auto c = run_trial(cell, 1);
    const auto d = run_trial(fixed, 1);
    CHECK(c.seed == d.seed);
    CHECK(c.solve_iterations != d.solve_iterations);
}
