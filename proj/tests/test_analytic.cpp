#include <doctest.h>

#include <cmath>
#include <random>

#include "kljn/analytic.hpp"
#include "kljn/sweep.hpp"

using namespace kljn;

namespace {

const ResistorPair kPair{1000.0, 10000.0};
const NoiseSpec kNoise{};
constexpr double kRc = 100.0;

// Frozen values from an exact rational-arithmetic oracle.
constexpr double kDeltaKs = 0.7304601899196493;
constexpr double kDeltaKsHalf = 0.18427141131426467;
constexpr double kDeltaP = 0.007304601899196494;
constexpr double kPrinted = 0.008927846765684604;
constexpr double kPhc = 0.008116224332440549;
constexpr double kPlc = 0.0008116224332440549;
constexpr double kBetaPrinted = 1.0891089108910892;
constexpr double kBetaNull = 1.044776119402985;
constexpr double kEquilibrium = 81.08108108108108;
constexpr double kResidualAtPrintedBeta = -0.723227910811534;

bool rel(double a, double b, double tol) { return std::fabs(a - b) <= tol * std::max(std::fabs(a), std::fabs(b)); }

struct Draw {
    ResistorPair pair;
    double r_c, t_h, t_l;
};

Draw random_draw(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> lr(std::log(1.0), std::log(1e6)), lt(std::log(0.1), std::log(10.0));
    double a = std::exp(lr(rng)), b = std::exp(lr(rng));
    if (a > b) std::swap(a, b);
    if (a == b) b *= 2.0;
    return {{a, b}, std::exp(lr(rng)) / 10.0, std::exp(lt(rng)) * kNoise.t_eff, std::exp(lt(rng)) * kNoise.t_eff};
}

}  // namespace

TEST_CASE("reference values") {
    CHECK(rel(delta_ks(kPair, kRc, kNoise), kDeltaKs, 1e-12));
    CHECK(rel(delta_ks(kPair, 50.0, kNoise), kDeltaKsHalf, 1e-12));
    CHECK(delta_ks(kPair, kRc, kNoise) / delta_ks(kPair, 50.0, kNoise) == doctest::Approx(3.964).epsilon(1e-3));
    CHECK(delta_ks(kPair, 0.0, kNoise) == 0.0);

    const auto h = heating_powers(kPair, kRc, kNoise);
    CHECK(rel(h.p_hc, kPhc, 1e-12));
    CHECK(rel(h.p_lc, kPlc, 1e-12));
    CHECK(h.p_lc / h.p_hc == doctest::Approx(kPair.alpha()).epsilon(1e-15));
    CHECK(heating_powers(kPair, 0.0, kNoise).p_hc == 0.0);

    const auto f = power_flows(kPair, kRc, kNoise.t_eff, kNoise.t_eff, kNoise);
    CHECK(rel(f.p_hl, h.p_hc, 1e-12));
    CHECK(rel(f.p_lh, h.p_lc, 1e-12));
    const auto f0 = power_flows(kPair, 0.0, kNoise.t_eff, kNoise.t_eff, kNoise);
    CHECK(f0.p_hl == 0.0);
    CHECK(f0.p_lh == 0.0);

    CHECK(rel(delta_p(kPair, kRc, kNoise.t_eff, kNoise.t_eff, kNoise), kDeltaP, 1e-12));
    CHECK(rel(delta_p_printed(kPair, kRc, kNoise), kPrinted, 1e-12));
    CHECK(delta_p(kPair, 0.0, kNoise.t_eff, kNoise.t_eff, kNoise) == 0.0);

    CHECK(rel(delta_msv_two_temp(kPair, kRc, kNoise.t_eff, kNoise.t_eff, kNoise), kDeltaKs, 1e-12));
    CHECK(rel(delta_ks_offset_printed(kPair, kRc, 1.0, kNoise), kDeltaKs, 1e-12));

    CHECK(rel(beta_printed(kPair, kRc), kBetaPrinted, 1e-12));
    CHECK(beta_printed(kPair, 0.0) == 1.0);
    CHECK(rel(beta_null(kPair, kRc, NullStatistic::net_power), kBetaNull, 1e-12));
    CHECK(rel(beta_null(kPair, kRc, NullStatistic::msv_difference), kBetaNull, 1e-12));
    CHECK(beta_null(kPair, 0.0, NullStatistic::net_power) == 1.0);
    CHECK(beta_null(kPair, 0.0, NullStatistic::msv_difference) == 1.0);

    CHECK(rel(equilibrium_msv_diff(kPair, kRc, kNoise.t_eff, kNoise), kEquilibrium, 1e-12));
    CHECK(equilibrium_msv_diff(kPair, 0.0, kNoise.t_eff, kNoise) == 0.0);
}

TEST_CASE("printed offset form vanishes at its own beta but the derived form does not") {
    CHECK(delta_ks_offset_printed(kPair, kRc, kBetaPrinted, kNoise) <= 1e-12 * kDeltaKs);
    const double residual = delta_msv_two_temp(kPair, kRc, kNoise.t_eff, kBetaPrinted * kNoise.t_eff, kNoise);
    CHECK(rel(residual, kResidualAtPrintedBeta, 1e-11));
    // Zero to machine precision relative to the equal-temperature leak.
    CHECK(std::fabs(delta_msv_two_temp(kPair, kRc, kNoise.t_eff, kBetaNull * kNoise.t_eff, kNoise)) <=
          1e-12 * kDeltaKs);
    CHECK(std::fabs(delta_p(kPair, kRc, kNoise.t_eff, kBetaNull * kNoise.t_eff, kNoise)) <= 1e-12 * kDeltaP);
}

TEST_CASE("cross-statistic identity over random draws") {
    std::mt19937_64 rng(2718);
    for (int k = 0; k < 100; ++k) {
        const auto d = random_draw(rng);
        const double msv = delta_msv_two_temp(d.pair, d.r_c, d.t_h, d.t_l, kNoise);
        const double p = delta_p(d.pair, d.r_c, d.t_h, d.t_l, kNoise);
        CHECK(std::fabs(msv - d.r_c * p) <=
              1e-12 * std::max(std::fabs(msv), 1e-12 * d.r_c * d.r_c * std::max(d.t_h, d.t_l) / kNoise.t_eff));
    }
}

TEST_CASE("beta_null statistics agree and root both forms") {
    std::mt19937_64 rng(31);
    for (int k = 0; k < 100; ++k) {
        const auto d = random_draw(rng);
        const double bp = beta_null(d.pair, d.r_c, NullStatistic::net_power);
        const double bm = beta_null(d.pair, d.r_c, NullStatistic::msv_difference);
        CHECK(rel(bp, bm, 1e-12));
        CHECK(bp > 1.0);
        CHECK(beta_printed(d.pair, d.r_c) > 1.0);
    }
}

TEST_CASE("loop moments agree with the closed forms") {
    const Arrangement hl{kPair.r_high, kPair.r_low, Cable{kRc, 0.0}, kNoise.t_eff, kNoise.t_eff};
    const auto m = loop_moments(hl, kNoise);
    CHECK(rel(m.msv_diff(), kDeltaKs, 1e-12));
    CHECK(rel(m.power_stat(), kDeltaP, 1e-12));
    const Arrangement eq{kPair.r_high, kPair.r_low, Cable{kRc, kNoise.t_eff}, kNoise.t_eff, kNoise.t_eff};
    const auto e = loop_moments(eq, kNoise);
    CHECK(rel(e.msv_diff(), kEquilibrium, 1e-12));
    CHECK(std::fabs(e.power_stat()) <= 1e-12 * kDeltaP);
    CHECK(rel(e.msv_a, 990.990990990991, 1e-12));
    CHECK(rel(e.msv_b, 909.9099099099099, 1e-12));
}

TEST_CASE("scaling with cable resistance") {
    std::vector<double> rc{1, 2, 5, 10, 20, 50, 100}, dp, dk;
    for (double r : rc) {
        dp.push_back(delta_p(kPair, r, kNoise.t_eff, kNoise.t_eff, kNoise));
        dk.push_back(delta_ks(kPair, r, kNoise));
    }
    for (std::size_t k = 1; k < rc.size(); ++k) {
        CHECK(dp[k] > dp[k - 1]);
        CHECK(dk[k] > dk[k - 1]);
    }
    CHECK(loglog_slope(rc, dp) == doctest::Approx(1.0).epsilon(0.05));
    CHECK(loglog_slope(rc, dk) == doctest::Approx(2.0).epsilon(0.025));
}

TEST_CASE("SI units scale every quantity by 4kT_eff df") {
    NoiseSpec si = kNoise;
    si.units = UnitSystem::si;
    const double s = 4.0 * kBoltzmann * si.t_eff * si.bandwidth;
    CHECK(rel(delta_ks(kPair, kRc, si), s * kDeltaKs, 1e-12));
    CHECK(rel(delta_p(kPair, kRc, si.t_eff, si.t_eff, si), s * kDeltaP, 1e-12));
    CHECK(rel(heating_powers(kPair, kRc, si).p_hc, s * kPhc, 1e-12));
}

TEST_CASE("SNR predictions") {
    const auto sl = predict_attack_snr(kPair, kRc, kNoise.t_eff, kNoise.t_eff, kNoise, Attack::second_law);
    CHECK(rel(sl.mean, kDeltaP, 1e-12));
    CHECK(sl.snr == doctest::Approx(0.012817938067809407).epsilon(1e-10));
    CHECK(sl.success_probability(1000) == doctest::Approx(0.6573857521237972).epsilon(1e-9));
    CHECK(sl.success_probability(10000) == doctest::Approx(0.9000425063342141).epsilon(1e-9));
    CHECK(sl.success_probability(40000) == doctest::Approx(0.9948201724581143).epsilon(1e-9));

    for (auto a : {Attack::second_law, Attack::bsy}) {
        const auto z = predict_attack_snr(kPair, 0.0, kNoise.t_eff, kNoise.t_eff, kNoise, a);
        CHECK(z.snr == 0.0);
        CHECK(z.success_probability(10000) == 0.5);
    }

    const auto eq = predict_attack_snr(kPair, kRc, kNoise.t_eff, kNoise.t_eff, kNoise, Attack::bsy, kNoise.t_eff);
    CHECK(eq.snr == doctest::Approx(0.13266892260349383).epsilon(1e-10));
    const auto eq_sl =
        predict_attack_snr(kPair, kRc, kNoise.t_eff, kNoise.t_eff, kNoise, Attack::second_law, kNoise.t_eff);
    CHECK(std::fabs(eq_sl.mean) <= 1e-12 * kDeltaP);
}

TEST_CASE("normal_cdf") {
    CHECK(normal_cdf(0.0) == 0.5);
    CHECK(normal_cdf(1.959964) == doctest::Approx(0.975).epsilon(1e-7));
    CHECK(normal_cdf(-8.0) == doctest::Approx(6.22096057427178e-16).epsilon(1e-10));
}

TEST_CASE("report and discrepancy list") {
    const auto r = analytic_report(kPair, Cable{kRc, 0.0}, kNoise);
    CHECK(rel(r.delta_p, kDeltaP, 1e-12));
    CHECK(rel(r.delta_p_paper_eq7, kPrinted, 1e-12));
    CHECK(rel(r.beta_paper, kBetaPrinted, 1e-12));
    CHECK(rel(r.beta_null_power, kBetaNull, 1e-12));
    const auto d = discrepancies(r);
    REQUIRE(d.size() == 2);
    CHECK(d[0].printed_field == "delta_p_paper_eq7");
    CHECK_FALSE(d[0].agrees);
    // At beta = 1 both MSV forms coincide.
    CHECK(d[1].agrees);

    NoiseSpec offset = kNoise;
    offset.beta = kBetaPrinted;
    const auto d2 = discrepancies(analytic_report(kPair, Cable{kRc, 0.0}, offset));
    CHECK_FALSE(d2[1].agrees);
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS((void)delta_ks(ResistorPair{10000, 1000}, kRc, kNoise), ConfigError);
    CHECK_THROWS_AS((void)delta_p(kPair, -1.0, 1, 1, kNoise), ConfigError);
    CHECK_THROWS_AS((void)delta_ks_offset_printed(kPair, kRc, 0.0, kNoise), ConfigError);
}
