#include "kljn/noise.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

#include "kljn/kernels.hpp"
#include "normal_quantile.hpp"

namespace kljn {

namespace {

constexpr std::uint64_t kPhiloxM0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kPhiloxM1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kPhiloxW0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kPhiloxW1 = 0xBB67AE8584CAA73BULL;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
    const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<std::uint64_t>(p >> 64);
    lo = static_cast<std::uint64_t>(p);
}

inline PhiloxCounter philox_round(const PhiloxCounter& c, const PhiloxKey& k) {
    std::uint64_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, c[0], hi0, lo0);
    mulhilo(kPhiloxM1, c[2], hi1, lo1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

// FFTW's planner is not reentrant.
std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t hash64(std::uint64_t seed, std::uint64_t a) noexcept {
    return splitmix64(splitmix64(seed) ^ a);
}

std::uint64_t hash64(std::uint64_t seed, std::uint64_t a, std::uint64_t b) noexcept {
    return splitmix64(hash64(seed, a) ^ b);
}

PhiloxCounter philox4x64(PhiloxCounter counter, PhiloxKey key) noexcept {
    counter = philox_round(counter, key);
    for (int r = 1; r < 10; ++r) {
        key[0] += kPhiloxW0;
        key[1] += kPhiloxW1;
        counter = philox_round(counter, key);
    }
    return counter;
}

double normal_quantile(double p) noexcept { return detail::normal_quantile(p); }

NoiseStream::NoiseStream(std::uint64_t seed, double sigma, std::uint64_t position)
    : seed_(seed), sigma_(sigma), position_(position) {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw std::domain_error("noise sigma must be finite and >= 0");
}

void NoiseStream::fill_uniform(std::span<double> out) {
    const PhiloxKey key{seed_, 0};
    std::size_t k = 0;
    while (k < out.size()) {
        const std::uint64_t block = position_ / 4;
        std::size_t lane = position_ % 4;
        const PhiloxCounter words = philox4x64({block, 0, 0, 0}, key);
        for (; lane < 4 && k < out.size(); ++lane, ++k, ++position_) out[k] = to_open_unit(words[lane]);
    }
}

void NoiseStream::fill(std::span<double> out) {
    if (sigma_ == 0.0) {
        std::fill(out.begin(), out.end(), 0.0);
        position_ += out.size();
        return;
    }
    fill_uniform(out);
    kernels::active().normal(out.data(), out.data(), out.size(), sigma_);
}

double NoiseStream::next() {
    double x;
    fill(std::span<double>(&x, 1));
    return x;
}

double johnson_msv(double r, double t, double bandwidth) {
    if (!(r >= 0.0)) throw std::domain_error("johnson_msv: resistance must be >= 0");
    if (!(t >= 0.0)) throw std::domain_error("johnson_msv: temperature must be >= 0");
    if (!(bandwidth > 0.0)) throw std::domain_error("johnson_msv: bandwidth must be > 0");
    return 4.0 * kBoltzmann * t * r * bandwidth;
}

double johnson_msv(double r, double t, const NoiseSpec& noise) {
    if (!(r >= 0.0)) throw std::domain_error("johnson_msv: resistance must be >= 0");
    if (!(t >= 0.0)) throw std::domain_error("johnson_msv: temperature must be >= 0");
    if (noise.units == UnitSystem::si) return johnson_msv(r, t, noise.bandwidth);
    return noise.thermal_scale(t) * r;
}

std::vector<double> gaussian_stream(std::uint64_t seed, std::size_t count, double sigma) {
    std::vector<double> out(count);
    NoiseStream(seed, sigma).fill(out);
    return out;
}

void brickwall_lowpass(std::span<double> samples, int oversample) {
    if (oversample < 1) throw std::invalid_argument("brickwall_lowpass: oversample must be >= 1");
    const std::size_t n = samples.size();
    if (oversample == 1 || n < 2) return;

    const std::size_t bins = n / 2 + 1;
    fftw_complex* spec = fftw_alloc_complex(bins);
    fftw_plan fwd, inv;
    {
        std::lock_guard lock(fftw_planner_mutex());
        fwd = fftw_plan_dft_r2c_1d(static_cast<int>(n), samples.data(), spec, FFTW_ESTIMATE);
        inv = fftw_plan_dft_c2r_1d(static_cast<int>(n), spec, samples.data(), FFTW_ESTIMATE);
    }
    fftw_execute(fwd);
    // Bin k sits at k/n of the sampling rate; the pass band ends at 1/(2·oversample).
    const std::size_t cutoff = n / (2 * static_cast<std::size_t>(oversample));
    for (std::size_t k = cutoff + 1; k < bins; ++k) {
        spec[k][0] = 0.0;
        spec[k][1] = 0.0;
    }
    fftw_execute(inv);
    const double scale = 1.0 / static_cast<double>(n);
    for (double& x : samples) x *= scale;
    {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(inv);
    }
    fftw_free(spec);
}

std::vector<double> bandlimited_stream(std::uint64_t seed, std::size_t count, double sigma, int oversample) {
    if (oversample < 1) throw std::invalid_argument("bandlimited_stream: oversample must be >= 1");
    auto out = gaussian_stream(seed, count, sigma * std::sqrt(static_cast<double>(oversample)));
    brickwall_lowpass(out, oversample);
    return out;
}

}  // namespace kljn
