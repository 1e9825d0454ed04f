#pragma once

// Inner-loop kernels. Each kernel has a portable scalar reference and,
// on x86-64, an AVX2 variant selected at runtime. Variants are tested for
// equivalence against the reference (bit-identical for the Gaussian
// transform, 1e-12 relative for the moment accumulation).

#include <cstddef>
#include <string_view>

namespace kljn::kernels {

/// Per-chunk sums of the four cable observables' products.
struct MomentSums {
    double sum_a2 = 0.0;  // u_ca²
    double sum_b2 = 0.0;  // u_cb²
    double sum_i2 = 0.0;  // i_c²
    double sum_p = 0.0;   // (u_ca + u_cb)·i_c
};

struct LoopCoefficients {
    double r_a;
    double r_b;
    double inv_loop;  // 1 / (r_a + r_c + r_b)
};

/// out[k] = sigma · Φ⁻¹(u[k]) for u[k] in (0, 1).
using NormalFn = void (*)(const double* u, double* out, std::size_t n, double sigma);

/// Solves the loop for every sample triple and returns the summed products.
using AccumulateFn = MomentSums (*)(const double* ua, const double* ub, const double* uw,
                                    std::size_t n, const LoopCoefficients& c);

struct KernelSet {
    std::string_view name;
    NormalFn normal;
    AccumulateFn accumulate;
};

void normal_scalar(const double* u, double* out, std::size_t n, double sigma);
MomentSums accumulate_scalar(const double* ua, const double* ub, const double* uw, std::size_t n,
                             const LoopCoefficients& c);

#if defined(KLJN_HAVE_AVX2)
void normal_avx2(const double* u, double* out, std::size_t n, double sigma);
MomentSums accumulate_avx2(const double* ua, const double* ub, const double* uw, std::size_t n,
                           const LoopCoefficients& c);
#endif

[[nodiscard]] const KernelSet& scalar_kernels() noexcept;

/// nullptr when AVX2 variants were not compiled in or the CPU lacks AVX2/FMA.
[[nodiscard]] const KernelSet* avx2_kernels() noexcept;

/// The set used by the simulator. Chosen on first use from the KLJN_KERNEL
/// environment variable ("scalar", "avx2", "auto"; default auto).
[[nodiscard]] const KernelSet& active() noexcept;

/// Overrides the active set. Accepts "scalar", "avx2" or "auto"; throws
/// std::invalid_argument for unknown names or unavailable variants.
void select(std::string_view name);

}  // namespace kljn::kernels
