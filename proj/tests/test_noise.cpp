#include <doctest.h>

#include <boost/math/distributions/normal.hpp>

#include <cmath>
#include <numeric>
#include <vector>

#include "kljn/noise.hpp"

using namespace kljn;

// Reference blocks from an independent Philox4x64-10 implementation.
TEST_CASE("philox4x64 known answers") {
    using C = PhiloxCounter;
    CHECK(philox4x64(C{0, 0, 0, 0}, {5, 0}) ==
          C{0xf394f5ed5949960bULL, 0x57f29b52d98d9c4dULL, 0x9932c51088c3c7cdULL, 0x32b115c2d344e4feULL});
    CHECK(philox4x64(C{1, 0, 0, 0}, {5, 0}) ==
          C{0xbbd6c66234fd0c91ULL, 0x972c5c680d78ea48ULL, 0x3532f77bf5c294a3ULL, 0x71803e5d0e6f08feULL});
    CHECK(philox4x64(C{2, 0, 0, 0}, {5, 0}) ==
          C{0x3fbe633223a39c06ULL, 0xad7695b2d5bf33dfULL, 0xbe4eb1b330cefcfdULL, 0xc522b1ac1df7276fULL});
    CHECK(philox4x64(C{7, 0, 0, 0}, {0x0123456789abcdefULL, 0xfedcba9876543210ULL}) ==
          C{0x1d3f9b580a7a91e2ULL, 0x80b9e338b9d2a202ULL, 0x113bc5c237869222ULL, 0x8494d117fc180028ULL});
}

// First samples of stream 42, computed independently with a reference
// inverse-normal routine applied to the same uniforms.
TEST_CASE("gaussian stream known answers") {
    const double expected[] = {0.39597478407094155,  -0.5295290645051614,  1.3672612016448185,
                               1.2017673184853805,   0.9161204856345222,   -0.8806796243156724,
                               1.1154015859369761,   -0.26739773839438785, -0.33681428760016385,
                               -0.16506539780760074};
    const auto s = gaussian_stream(42, 10, 1.0);
    for (int k = 0; k < 10; ++k) CHECK(s[k] == doctest::Approx(expected[k]).epsilon(1e-14));
}

TEST_CASE("to_open_unit stays inside (0, 1)") {
    CHECK(to_open_unit(0) > 0.0);
    CHECK(to_open_unit(~0ULL) < 1.0);
    CHECK(to_open_unit(0) == 0x1.0p-53);
    CHECK(to_open_unit(~0ULL) == 1.0 - 0x1.0p-53);
}

TEST_CASE("AS241 agrees with an independent quantile") {
    const boost::math::normal_distribution<double> nd;
    for (double p : {1e-300, 1e-100, 1e-20, 1e-8, 1e-4, 0.01, 0.02425, 0.1, 0.3, 0.425, 0.5, 0.575, 0.7, 0.9,
                     0.975, 0.999, 1.0 - 1e-10}) {
        const double ref = boost::math::quantile(nd, p);
        CHECK(normal_quantile(p) == doctest::Approx(ref).epsilon(1e-14).scale(1.0));
    }
    CHECK(normal_quantile(0.5) == 0.0);
}

TEST_CASE("stream is deterministic and seekable") {
    const auto a = gaussian_stream(7, 1003, 2.0);
    const auto b = gaussian_stream(7, 1003, 2.0);
    CHECK(a == b);

    NoiseStream s(7, 2.0, 501);
    std::vector<double> tail(502);
    s.fill(tail);
    for (std::size_t k = 0; k < tail.size(); ++k) CHECK(tail[k] == a[501 + k]);

    NoiseStream t(7, 2.0);
    std::vector<double> first(3);
    t.fill(first);
    CHECK(t.position() == 3);
    CHECK(t.next() == a[3]);

    CHECK(gaussian_stream(8, 16, 2.0) != gaussian_stream(7, 16, 2.0));
}

TEST_CASE("moments of a long stream") {
    constexpr std::size_t n = 1'000'000;
    const double sigma = 3.0;
    const auto x = gaussian_stream(2024, n, sigma);
    double m1 = 0, m2 = 0, m3 = 0, m4 = 0;
    for (double v : x) {
        const double z = v / sigma;
        m1 += z;
        m2 += z * z;
        m3 += z * z * z;
        m4 += z * z * z * z;
    }
    const double dn = static_cast<double>(n);
    m1 /= dn, m2 /= dn, m3 /= dn, m4 /= dn;
    // Standard errors of the sample moments of N(0, 1): 1, sqrt(2), sqrt(15), sqrt(96).
    CHECK(std::fabs(m1) < 4.0 * 1.0 / std::sqrt(dn));
    CHECK(std::fabs(m2 - 1.0) < 4.0 * std::sqrt(2.0 / dn));
    CHECK(std::fabs(m3) < 4.0 * std::sqrt(15.0 / dn));
    CHECK(std::fabs(m4 - 3.0) < 4.0 * std::sqrt(96.0 / dn));
    const double var = m2 - m1 * m1;
    CHECK(std::fabs(var - 1.0) < 0.005);
    CHECK(std::fabs(m4 / (m2 * m2) - 3.0) < 0.03);
}

TEST_CASE("independent seeds are uncorrelated") {
    constexpr std::size_t n = 200'000;
    const auto x = gaussian_stream(hash64(1, 0), n, 1.0);
    const auto y = gaussian_stream(hash64(1, 1), n, 1.0);
    const double c = std::inner_product(x.begin(), x.end(), y.begin(), 0.0) / n;
    CHECK(std::fabs(c) < 4.0 / std::sqrt(static_cast<double>(n)));
    double lag1 = 0.0;
    for (std::size_t k = 1; k < n; ++k) lag1 += x[k] * x[k - 1];
    CHECK(std::fabs(lag1 / (n - 1)) < 4.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("zero sigma yields zeros") {
    const auto z = gaussian_stream(3, 100, 0.0);
    for (double v : z) CHECK(v == 0.0);
    CHECK_THROWS_AS(NoiseStream(1, -1.0), std::domain_error);
}

TEST_CASE("hash64 is order sensitive") {
    CHECK(hash64(1, 2) != hash64(2, 1));
    CHECK(hash64(1, 2, 3) != hash64(1, 3, 2));
    CHECK(hash64(0, 0) == splitmix64(splitmix64(0)));
}

TEST_CASE("johnson_msv") {
    CHECK(johnson_msv(1e4, 1e9, 5e3) == doctest::Approx(2.7613e-6).epsilon(1e-5));
    CHECK(johnson_msv(0.0, 1e9, 5e3) == 0.0);
    CHECK(johnson_msv(1e4, 0.0, 5e3) == 0.0);
    CHECK_THROWS_AS((void)johnson_msv(-1.0, 1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS((void)johnson_msv(1.0, -1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS((void)johnson_msv(1.0, 1.0, 0.0), std::domain_error);

    NoiseSpec n;
    CHECK(johnson_msv(1234.0, n.t_eff, n) == 1234.0);
    CHECK(johnson_msv(1000.0, 0.5 * n.t_eff, n) == doctest::Approx(500.0).epsilon(1e-15));
    n.units = UnitSystem::si;
    CHECK(johnson_msv(1e4, 1e9, n) == johnson_msv(1e4, 1e9, n.bandwidth));
}

TEST_CASE("brick-wall filter keeps variance and kills the stop band") {
    constexpr std::size_t n = 1 << 16;
    constexpr int os = 4;
    const auto x = bandlimited_stream(11, n, 1.0, os);
    double m2 = 0.0;
    for (double v : x) m2 += v * v;
    m2 /= n;
    CHECK(m2 == doctest::Approx(1.0).epsilon(0.03));

    // Filtering twice changes nothing: the stop band is already empty.
    auto y = x;
    brickwall_lowpass(y, os);
    double err = 0.0;
    for (std::size_t k = 0; k < n; ++k) err = std::max(err, std::fabs(y[k] - x[k]));
    CHECK(err < 1e-12);

    CHECK(bandlimited_stream(11, 64, 1.0, 1) == gaussian_stream(11, 64, 1.0));
    CHECK_THROWS_AS(brickwall_lowpass(y, 0), std::invalid_argument);
}
