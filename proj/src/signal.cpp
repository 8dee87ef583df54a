#include "specline/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "specline/block_toeplitz.hpp"
#include "specline/error.hpp"

namespace specline {

double Rng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    // splitmix64 finalizer over a Weyl-sequence offset
    std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

MeasurementVector synthesize(const SinusoidModel& model) {
    if (model.n < 0) throw Error(ErrorKind::InvalidArgument, "synthesize: n must be nonnegative");
    if (model.frequencies.size() != model.amplitudes.size())
        throw Error(ErrorKind::InvalidArgument, "synthesize: one amplitude per frequency required");
    MeasurementVector x;
    x.samples = CVector::Zero(2 * (model.n + 1));
    for (size_t l = 0; l < model.frequencies.size(); ++l) {
        const double theta = model.frequencies[l];
        for (int t = 0; t <= model.n; ++t) {
            const cdouble phase = std::polar(1.0, theta * t);
            x.samples(2 * t) += model.amplitudes[l](0) * phase;
            x.samples(2 * t + 1) += model.amplitudes[l](1) * phase;
        }
    }
    return x;
}

MeasurementVector add_noise(const MeasurementVector& x, const NoiseSpec& spec) {
    if (!(spec.sigma_w >= 0.0)) throw Error(ErrorKind::InvalidArgument, "add_noise: sigma_w must be >= 0");
    MeasurementVector y = x;
    if (spec.sigma_w == 0.0) return y;
    Rng rng(spec.seed);
    const double s = spec.sigma_w / std::numbers::sqrt2;
    for (Eigen::Index i = 0; i < y.samples.size(); ++i) {
        const double re = rng.normal();
        const double im = rng.normal();
        y.samples(i) += cdouble(s * re, s * im);
    }
    return y;
}

std::vector<Eigen::Vector2cd> random_amplitudes(int count, Rng& rng) {
    if (count < 0) throw Error(ErrorKind::InvalidArgument, "random_amplitudes: count must be >= 0");
    std::vector<Eigen::Vector2cd> out(static_cast<size_t>(count));
    for (auto& s : out) {
        for (int c = 0; c < 2; ++c) {
            const double re = rng.uniform();
            const double im = rng.uniform();
            s(c) = cdouble(re, im);
        }
    }
    return out;
}

std::vector<Eigen::Vector2cd> random_amplitudes(int count, std::uint64_t seed) {
    Rng rng(seed);
    return random_amplitudes(count, rng);
}

std::vector<double> random_frequencies(int count, Rng& rng, double min_separation, int max_attempts) {
    if (count < 0) throw Error(ErrorKind::InvalidArgument, "random_frequencies: count must be >= 0");
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        std::vector<double> thetas(static_cast<size_t>(count));
        // pi - 2 pi u maps [0, 1) onto (-pi, pi]
        for (auto& t : thetas) t = std::numbers::pi - 2.0 * std::numbers::pi * rng.uniform();
        bool ok = true;
        for (size_t i = 0; ok && i < thetas.size(); ++i)
            for (size_t j = i + 1; ok && j < thetas.size(); ++j)
                ok = circular_distance(thetas[i], thetas[j]) >= min_separation;
        if (ok) return thetas;
    }
    std::ostringstream os;
    os << "could not draw " << count << " frequencies separated by " << min_separation << " in "
       << max_attempts << " attempts";
    throw Error(ErrorKind::InvalidArgument, os.str());
}

double snr_to_sigma(double snr_db) { return kSignalSigma * std::pow(10.0, -snr_db / 20.0); }

std::vector<cdouble> biased_covariances(const CVector& y, int max_lag) {
    const int n = static_cast<int>(y.size()) - 1;
    if (max_lag < 0 || max_lag > n) {
        std::ostringstream os;
        os << "biased_covariances: lag " << max_lag << " outside [0, " << n << "]";
        throw Error(ErrorKind::InvalidArgument, os.str());
    }
    std::vector<cdouble> out(static_cast<size_t>(max_lag) + 1);
    for (int j = 0; j <= max_lag; ++j) {
        cdouble acc = 0.0;
        for (int t = 0; t + j <= n; ++t) acc += y(t + j) * std::conj(y(t));
        out[static_cast<size_t>(j)] = acc / static_cast<double>(n + 1);
    }
    return out;
}

CVector channel(const MeasurementVector& y, int c) {
    const Eigen::Index len = y.samples.size() / 2;
    CVector out(len);
    for (Eigen::Index t = 0; t < len; ++t) out(t) = y.samples(2 * t + c);
    return out;
}

double estimate_noise_variance(const MeasurementVector& y) {
    const int n = y.n();
    if (y.samples.size() % 2 != 0 || n < 8) {
        std::ostringstream os;
        os << "estimate_noise_variance needs n >= 8 two-channel samples, got n = " << n;
        throw Error(ErrorKind::InvalidArgument, os.str());
    }
    const int lag = n / 3;
    CMatrix t = CMatrix::Zero(lag + 1, lag + 1);
    for (int c = 0; c < 2; ++c) {
        const auto sig = biased_covariances(channel(y, c), lag);
        std::vector<CMatrix> blocks;
        blocks.reserve(sig.size());
        for (const auto& s : sig) blocks.push_back(CMatrix::Constant(1, 1, s));
        t += 0.5 * assemble(CovarianceSequence(1, std::move(blocks))).matrix();
    }
    const auto ed = hermitian_eig(HermitianMatrix(t));
    const int count = std::max(1, (lag + 1) / 4);
    return ed.eigenvalues.head(count).mean();
}

double compute_tau(double sigma_w, int n) {
    if (!(sigma_w >= 0.0) || n < 1) throw Error(ErrorKind::InvalidArgument, "compute_tau: need sigma_w >= 0 and n >= 1");
    const double np1 = n + 1.0;
    const double lg = std::log(np1);
    return sigma_w * std::sqrt(np1 * (2.0 + lg + std::sqrt(4.0 * lg)));
}

}  // namespace specline
