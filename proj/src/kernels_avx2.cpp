#include "kljn/kernels.hpp"

#include <immintrin.h>

#include "normal_quantile.hpp"

namespace kljn::kernels {

namespace {

inline __m256d horner7(const double (&c)[8], __m256d r) {
    __m256d acc = _mm256_set1_pd(c[7]);
    for (int j = 6; j >= 0; --j) acc = _mm256_add_pd(_mm256_mul_pd(acc, r), _mm256_set1_pd(c[j]));
    return acc;
}

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

}  // namespace

// Lanes whose quantile falls in the tails take the scalar path; the central
// rational mirrors detail::normal_quantile_central operation for operation
// (built with -ffp-contract=off) so results are bit-identical.
void normal_avx2(const double* u, double* out, std::size_t n, double sigma) {
    const __m256d half = _mm256_set1_pd(0.5);
    const __m256d split = _mm256_set1_pd(detail::kSplitCentral);
    const __m256d cconst = _mm256_set1_pd(detail::kCentralConst);
    const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    const __m256d vsigma = _mm256_set1_pd(sigma);

    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256d p = _mm256_loadu_pd(u + k);
        const __m256d q = _mm256_sub_pd(p, half);
        const __m256d aq = _mm256_and_pd(q, abs_mask);
        const int central = _mm256_movemask_pd(_mm256_cmp_pd(aq, split, _CMP_LE_OQ));
        if (central == 0xF) {
            const __m256d r = _mm256_sub_pd(cconst, _mm256_mul_pd(q, q));
            const __m256d val =
                _mm256_div_pd(_mm256_mul_pd(q, horner7(detail::kA, r)), horner7(detail::kB, r));
            _mm256_storeu_pd(out + k, _mm256_mul_pd(vsigma, val));
        } else {
            for (std::size_t j = k; j < k + 4; ++j) out[j] = sigma * detail::normal_quantile(u[j]);
        }
    }
    for (; k < n; ++k) out[k] = sigma * detail::normal_quantile(u[k]);
}

MomentSums accumulate_avx2(const double* ua, const double* ub, const double* uw, std::size_t n,
                           const LoopCoefficients& c) {
    const __m256d ra = _mm256_set1_pd(c.r_a);
    const __m256d rb = _mm256_set1_pd(c.r_b);
    const __m256d inv = _mm256_set1_pd(c.inv_loop);
    __m256d sa = _mm256_setzero_pd();
    __m256d sb = _mm256_setzero_pd();
    __m256d si = _mm256_setzero_pd();
    __m256d sp = _mm256_setzero_pd();

    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256d a = _mm256_loadu_pd(ua + k);
        const __m256d b = _mm256_loadu_pd(ub + k);
        const __m256d w = _mm256_loadu_pd(uw + k);
        const __m256d i = _mm256_mul_pd(_mm256_add_pd(_mm256_sub_pd(a, b), w), inv);
        const __m256d uca = _mm256_fnmadd_pd(i, ra, a);
        const __m256d ucb = _mm256_fmadd_pd(i, rb, b);
        sa = _mm256_fmadd_pd(uca, uca, sa);
        sb = _mm256_fmadd_pd(ucb, ucb, sb);
        si = _mm256_fmadd_pd(i, i, si);
        sp = _mm256_fmadd_pd(_mm256_add_pd(uca, ucb), i, sp);
    }

    MomentSums s{hsum(sa), hsum(sb), hsum(si), hsum(sp)};
    if (k < n) {
        const MomentSums tail = accumulate_scalar(ua + k, ub + k, uw + k, n - k, c);
        s.sum_a2 += tail.sum_a2;
        s.sum_b2 += tail.sum_b2;
        s.sum_i2 += tail.sum_i2;
        s.sum_p += tail.sum_p;
    }
    return s;
}

}  // namespace kljn::kernels
