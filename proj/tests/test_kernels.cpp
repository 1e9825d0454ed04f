#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "kljn/kernels.hpp"
#include "kljn/noise.hpp"

using namespace kljn;

namespace {

std::vector<double> uniforms(std::uint64_t seed, std::size_t n) {
    std::vector<double> u(n);
    NoiseStream(seed, 1.0).fill_uniform(u);
    return u;
}

bool rel_close(double a, double b, double tol) { return std::fabs(a - b) <= tol * std::max(std::fabs(a), std::fabs(b)); }

}  // namespace

TEST_CASE("scalar set is always available") {
    CHECK(kernels::scalar_kernels().name == "scalar");
    CHECK_NOTHROW(kernels::select("scalar"));
    CHECK(kernels::active().name == "scalar");
    CHECK_NOTHROW(kernels::select("auto"));
    CHECK_THROWS_AS(kernels::select("neon9"), std::invalid_argument);
}

TEST_CASE("avx2 normal transform is bit-identical to scalar") {
    const auto* avx = kernels::avx2_kernels();
    if (avx == nullptr) {
        MESSAGE("AVX2 variant unavailable on this host; skipped");
        return;
    }
    // Odd length exercises the remainder path; extreme uniforms the tail branch.
    auto u = uniforms(99, 100'003);
    u[0] = 0x1.0p-54;
    u[1] = 1.0 - 0x1.0p-53;
    u[2] = 0.5;
    u[3] = 0.075;
    u[4] = 0.925;
    std::vector<double> ref(u.size()), vec(u.size());
    kernels::scalar_kernels().normal(u.data(), ref.data(), u.size(), 1.7);
    avx->normal(u.data(), vec.data(), u.size(), 1.7);
    CHECK(std::memcmp(ref.data(), vec.data(), ref.size() * sizeof(double)) == 0);

    // In-place use matches out-of-place.
    auto w = u;
    avx->normal(w.data(), w.data(), w.size(), 1.7);
    CHECK(w == vec);
}

TEST_CASE("avx2 accumulation matches scalar to 1e-12") {
    const auto* avx = kernels::avx2_kernels();
    if (avx == nullptr) {
        MESSAGE("AVX2 variant unavailable on this host; skipped");
        return;
    }
    for (std::size_t n : {1u, 3u, 4u, 7u, 4096u, 10'001u}) {
        const auto ua = gaussian_stream(1, n, 100.0);
        const auto ub = gaussian_stream(2, n, 30.0);
        const auto uw = gaussian_stream(3, n, 10.0);
        const kernels::LoopCoefficients c{10000.0, 1000.0, 1.0 / 11100.0};
        const auto s = kernels::scalar_kernels().accumulate(ua.data(), ub.data(), uw.data(), n, c);
        const auto v = avx->accumulate(ua.data(), ub.data(), uw.data(), n, c);
        CHECK(rel_close(s.sum_a2, v.sum_a2, 1e-12));
        CHECK(rel_close(s.sum_b2, v.sum_b2, 1e-12));
        CHECK(rel_close(s.sum_i2, v.sum_i2, 1e-12));
        // sum_p mixes signs; compare against the magnitude scale of its terms.
        const double scale = std::sqrt((s.sum_a2 + s.sum_b2) * s.sum_i2) + 1e-300;
        CHECK(std::fabs(s.sum_p - v.sum_p) <= 1e-12 * scale);
    }
}
