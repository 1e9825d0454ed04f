#include "kljn/kernels.hpp"

#include "normal_quantile.hpp"

namespace kljn::kernels {

void normal_scalar(const double* u, double* out, std::size_t n, double sigma) {
    for (std::size_t k = 0; k < n; ++k) out[k] = sigma * detail::normal_quantile(u[k]);
}

MomentSums accumulate_scalar(const double* ua, const double* ub, const double* uw, std::size_t n,
                             const LoopCoefficients& c) {
    MomentSums s;
    for (std::size_t k = 0; k < n; ++k) {
        const double i = (ua[k] - ub[k] + uw[k]) * c.inv_loop;
        const double uca = ua[k] - i * c.r_a;
        const double ucb = ub[k] + i * c.r_b;
        s.sum_a2 += uca * uca;
        s.sum_b2 += ucb * ucb;
        s.sum_i2 += i * i;
        s.sum_p += (uca + ucb) * i;
    }
    return s;
}

}  // namespace kljn::kernels
