#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include "kljn/core.hpp"

namespace kljn {

/// One loop configuration: Alice's resistor at end A, the lumped cable, Bob's
/// resistor at end B, and the generator temperatures.
struct Arrangement {
    double r_a = 0.0;
    double r_b = 0.0;
    Cable cable;
    double t_a = 0.0;
    double t_b = 0.0;

    [[nodiscard]] double loop_sum() const noexcept { return r_a + cable.r_c + r_b; }

    /// Throws std::invalid_argument unless r_a, r_b, r_c, t_a, t_b, cable
    /// temperature are finite and non-negative and loop_sum() > 0.
    void validate() const;
};

/// Sign convention: i_c > 0 flows out of end A into the cable toward end B;
/// positive u_w drives current from A to B.
struct LoopSample {
    double u_a = 0.0;
    double u_b = 0.0;
    double u_w = 0.0;
    double u_ca = 0.0;
    double u_cb = 0.0;
    double i_c = 0.0;
};

[[nodiscard]] LoopSample solve_loop_sample(double u_a, double u_b, double u_w, const Arrangement& arr) noexcept;

struct TraceStats {
    std::size_t n = 0;
    double msv_a = 0.0;       // mean u_ca²
    double msv_b = 0.0;       // mean u_cb²
    double msv_i = 0.0;       // mean i_c²
    double power_stat = 0.0;  // mean (u_ca + u_cb)·i_c
    double msv_diff = 0.0;    // msv_a − msv_b
};

/// Batch-means standard errors of the TraceStats fields. NaN when fewer than
/// two batches exist.
struct BatchErrors {
    std::size_t batches = 0;
    double msv_a = 0.0;
    double msv_b = 0.0;
    double msv_i = 0.0;
    double power_stat = 0.0;
    double msv_diff = 0.0;
};

struct TraceResult {
    TraceStats stats;
    BatchErrors errors;
    std::vector<LoopSample> samples;  // only filled when requested
};

/// Seeds of the three noise sources (Alice, Bob, cable).
struct SourceSeeds {
    std::uint64_t a = 0;
    std::uint64_t b = 0;
    std::uint64_t w = 0;
};

/// Derives the source seeds of a stand-alone trace: hash64(seed, k) for k = 0, 1, 2.
[[nodiscard]] SourceSeeds source_seeds(std::uint64_t trace_seed) noexcept;

struct TraceOptions {
    std::size_t batches = 100;
    bool keep_samples = false;
};

class EmptyTraceError : public std::invalid_argument {
public:
    EmptyTraceError() : std::invalid_argument("trace must contain at least one sample") {}
};

/// Simulates n_samples time steps of the loop. Sources are independent
/// zero-mean Gaussian streams with variances johnson_msv(r_a, t_a),
/// johnson_msv(r_b, t_b), johnson_msv(r_c, cable.temperature). With
/// noise.oversample > 1 every source is brick-wall band-limited and the
/// statistics are taken over n_samples·oversample fine-grid samples.
[[nodiscard]] TraceResult simulate_trace(const Arrangement& arr, const NoiseSpec& noise, std::size_t n_samples,
                                         const SourceSeeds& seeds, const TraceOptions& options = {});

[[nodiscard]] TraceStats simulate_trace(const Arrangement& arr, const NoiseSpec& noise, std::size_t n_samples,
                                        std::uint64_t seed);

/// Single-pass compensated accumulation over stored samples.
[[nodiscard]] TraceStats trace_statistics(std::span<const LoopSample> samples);

/// Writes "u_ca,u_cb,i_c" rows (header first) with round-trip precision.
void write_trace_dump(std::ostream& os, std::span<const LoopSample> samples);

}  // namespace kljn
