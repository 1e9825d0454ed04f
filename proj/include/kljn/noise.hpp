#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "kljn/core.hpp"

namespace kljn {

/// SplitMix64 finalizer.
[[nodiscard]] std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Order-sensitive 64-bit mix of a seed and up to two tags:
/// h = sm(sm(sm(seed) ^ a) ^ b), sm = splitmix64. Used to derive
/// per-round and per-source seeds.
[[nodiscard]] std::uint64_t hash64(std::uint64_t seed, std::uint64_t a) noexcept;
[[nodiscard]] std::uint64_t hash64(std::uint64_t seed, std::uint64_t a, std::uint64_t b) noexcept;

using PhiloxCounter = std::array<std::uint64_t, 4>;
using PhiloxKey = std::array<std::uint64_t, 2>;

/// Philox4x64-10 block function (Salmon et al., Random123). Counter-based, so
/// any block of any stream can be produced independently of the others.
[[nodiscard]] PhiloxCounter philox4x64(PhiloxCounter counter, PhiloxKey key) noexcept;

/// Maps a 64-bit word to the open interval (0, 1): ((x >> 12) + 0.5) · 2⁻⁵².
/// 52 bits keep every result representable, so 1 is never reached.
[[nodiscard]] inline double to_open_unit(std::uint64_t x) noexcept {
    return (static_cast<double>(x >> 12) + 0.5) * 0x1.0p-52;
}

/// Inverse standard normal CDF (AS241).
[[nodiscard]] double normal_quantile(double p) noexcept;

/// Deterministic zero-mean Gaussian sample stream.
///
/// Sample k of the stream with seed s is sigma · Φ⁻¹(U), where U is word
/// (k mod 4) of philox4x64(counter = {k / 4, 0, 0, 0}, key = {s, 0}) mapped
/// through to_open_unit. Streams can be positioned anywhere in O(1), which
/// lets disjoint blocks be generated in parallel.
class NoiseStream {
public:
    NoiseStream(std::uint64_t seed, double sigma, std::uint64_t position = 0);

    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] double sigma() const noexcept { return sigma_; }
    [[nodiscard]] std::uint64_t position() const noexcept { return position_; }

    void seek(std::uint64_t position) noexcept { position_ = position; }

    [[nodiscard]] double next();

    /// Fills `out` with the next out.size() samples.
    void fill(std::span<double> out);

    /// Fills `out` with uniforms in (0, 1) instead of Gaussian samples.
    void fill_uniform(std::span<double> out);

private:
    std::uint64_t seed_;
    double sigma_;
    std::uint64_t position_;
};

/// Mean-square Johnson EMF of resistor r at temperature t over bandwidth Δf,
/// in SI units: 4·k·t·r·Δf. Throws std::domain_error for r < 0, t < 0 or
/// bandwidth <= 0.
[[nodiscard]] double johnson_msv(double r, double t, double bandwidth);

/// Unit-aware variant: 4kTrΔf in SI, r·t/t_eff in normalized mode.
[[nodiscard]] double johnson_msv(double r, double t, const NoiseSpec& noise);

/// `count` samples of NoiseStream(seed, sigma).
[[nodiscard]] std::vector<double> gaussian_stream(std::uint64_t seed, std::size_t count, double sigma);

/// Ideal brick-wall low-pass: zeroes every DFT bin above 1/(2·oversample) of
/// the sampling rate. Used by the oversampled noise mode, where white samples
/// at oversample·2Δf are band-limited to Δf.
void brickwall_lowpass(std::span<double> samples, int oversample);

/// Generates `count` samples of band-limited noise with mean-square value
/// sigma² at the oversampled rate: white samples of variance
/// oversample·sigma², brick-wall filtered. oversample == 1 is plain
/// gaussian_stream.
[[nodiscard]] std::vector<double> bandlimited_stream(std::uint64_t seed, std::size_t count, double sigma,
                                                     int oversample);

}  // namespace kljn
