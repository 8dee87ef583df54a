#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "specline/linalg.hpp"

namespace specline {

/// Stacked two-channel samples y(0), ..., y(n): entry 2t + c is channel c at
/// time t. Length 2(n + 1).
struct MeasurementVector {
    CVector samples;
    int n() const noexcept { return static_cast<int>(samples.size() / 2) - 1; }
};

struct SinusoidModel {
    std::vector<double> frequencies;   // wrapped into (-pi, pi]
    std::vector<Eigen::Vector2cd> amplitudes;
    int n = 0;
    size_t source_count() const noexcept { return frequencies.size(); }
};

struct NoiseSpec {
    double sigma_w = 0.0;
    std::uint64_t seed = 0;
};

/// Seedable generator with a fixed, documented derivation of uniform and
/// Gaussian variates so that draws are bit-reproducible across standard
/// libraries (the std:: distributions are implementation-defined).
class Rng {
public:
    static constexpr std::string_view kGeneratorId = "mt19937_64/u53/polar-normal/v1";

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    /// Standard normal via the Marsaglia polar method.
    double normal();

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Independent stream seed for trial `index` under `master`.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// y(t) = sum_l s_l e^{i theta_l t}, t = 0..n. Throws on malformed models.
MeasurementVector synthesize(const SinusoidModel& model);

/// Adds circular complex Gaussian noise with E|w|^2 = sigma_w^2 per entry
/// (real and imaginary parts each N(0, sigma_w^2 / 2)).
MeasurementVector add_noise(const MeasurementVector& x, const NoiseSpec& spec);

/// L two-vectors with real and imaginary parts i.i.d. U[0, 1].
std::vector<Eigen::Vector2cd> random_amplitudes(int count, std::uint64_t seed);
std::vector<Eigen::Vector2cd> random_amplitudes(int count, Rng& rng);

/// Frequencies i.i.d. uniform on (-pi, pi]. With min_separation > 0 the draw
/// is repeated until every pairwise circular distance reaches it; throws
/// after max_attempts failures.
std::vector<double> random_frequencies(int count, Rng& rng, double min_separation = 0.0,
                                       int max_attempts = 100000);

/// Per-component standard deviation of the uniform-amplitude signal model.
inline constexpr double kSignalSigma = 0.40824829046386301637;  // sqrt(1/6)

/// sigma_w = sqrt(1/6) * 10^(-snr_db / 20).
double snr_to_sigma(double snr_db);

/// sigma(j) = 1/(n+1) sum_{t=0}^{n-j} y(t+j) conj(y(t)), j = 0..max_lag.
std::vector<cdouble> biased_covariances(const CVector& channel, int max_lag);

/// Samples of one channel (0 or 1).
CVector channel(const MeasurementVector& y, int c);

/// Mean of the smallest max(1, floor((lag+1)/4)) eigenvalues of the averaged
/// per-channel Toeplitz covariance estimate, lag = floor(n/3). Requires n >= 8.
double estimate_noise_variance(const MeasurementVector& y);

/// tau = sigma_w sqrt((n+1)(2 + log(n+1) + sqrt(4 log(n+1)))).
double compute_tau(double sigma_w, int n);

}  // namespace specline
