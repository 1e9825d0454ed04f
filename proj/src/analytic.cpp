#include "kljn/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kljn/noise.hpp"

namespace kljn {

namespace {

double loop_sum(const ResistorPair& pair, double r_c) { return pair.r_high + r_c + pair.r_low; }

void check_inputs(const ResistorPair& pair, double r_c) {
    validate_pair(pair);
    if (!(std::isfinite(r_c) && r_c >= 0.0)) throw ConfigError({"r_c >= 0 violated"});
}

/// Normalized noise with t_eff = 1, used for root finding where only
/// temperature ratios matter.
NoiseSpec unit_noise() {
    NoiseSpec n;
    n.t_eff = 1.0;
    n.units = UnitSystem::normalized;
    return n;
}

constexpr double kBetaTolerance = 1e-14;
constexpr double kBetaLowerBracket = 1e-9;

}  // namespace

double delta_ks(const ResistorPair& pair, double r_c, const NoiseSpec& noise) {
    check_inputs(pair, r_c);
    const double sum = loop_sum(pair, r_c);
    const double s = noise.thermal_scale(noise.t_eff);
    return s * std::fabs(r_c * r_c * (pair.r_high - pair.r_low) / (sum * sum));
}

HeatingPowers heating_powers(const ResistorPair& pair, double r_c, const NoiseSpec& noise) {
    check_inputs(pair, r_c);
    const double sum = loop_sum(pair, r_c);
    const double s = noise.thermal_scale(noise.t_eff);
    HeatingPowers h;
    h.p_hc = s * pair.r_high / (sum * sum) * r_c;
    h.p_lc = h.p_hc * (pair.r_low / pair.r_high);
    return h;
}

PowerFlows power_flows(const ResistorPair& pair, double r_c, double t_h, double t_l, const NoiseSpec& noise) {
    check_inputs(pair, r_c);
    const double sum2 = loop_sum(pair, r_c) * loop_sum(pair, r_c);
    const double sh = noise.thermal_scale(t_h);
    const double sl = noise.thermal_scale(t_l);
    const double rh = pair.r_high;
    const double rl = pair.r_low;
    return {rh * (sh * (r_c + rl) - sl * rl) / sum2, rl * (sl * (r_c + rh) - sh * rh) / sum2};
}

double delta_p(const ResistorPair& pair, double r_c, double t_h, double t_l, const NoiseSpec& noise) {
    check_inputs(pair, r_c);
    const double sum = loop_sum(pair, r_c);
    const double sh = noise.thermal_scale(t_h);
    const double sl = noise.thermal_scale(t_l);
    const double rh = pair.r_high;
    const double rl = pair.r_low;
    return (sh * rh * (r_c + 2.0 * rl) - sl * rl * (r_c + 2.0 * rh)) / (sum * sum);
}

double delta_p_printed(const ResistorPair& pair, double r_c, const NoiseSpec& noise) {
    check_inputs(pair, r_c);
    const double sum = loop_sum(pair, r_c);
    return noise.thermal_scale(noise.t_eff) * r_c * (pair.r_high + pair.r_low) / (sum * sum);
}

double delta_msv_two_temp(const ResistorPair& pair, double r_c, double t_h, double t_l, const NoiseSpec& noise) {
    check_inputs(pair, r_c);
    const double sum = loop_sum(pair, r_c);
    const double sh = noise.thermal_scale(t_h);
    const double sl = noise.thermal_scale(t_l);
    const double rh = pair.r_high;
    const double rl = pair.r_low;
    // ⟨U_cH²⟩ = [s_h·R_H(R_c+R_L)² + s_l·R_L·R_H²]/Σ², ⟨U_cL²⟩ = [s_h·R_H·R_L² + s_l·R_L(R_c+R_H)²]/Σ²;
    // (x+y)² − y² = x(x+2y) keeps the difference free of cancellation.
    const double h_term = sh * rh * (r_c * (r_c + 2.0 * rl));
    const double l_term = sl * rl * (r_c * (r_c + 2.0 * rh));
    return (h_term - l_term) / (sum * sum);
}

double delta_ks_offset_printed(const ResistorPair& pair, double r_c, double beta, const NoiseSpec& noise) {
    check_inputs(pair, r_c);
    if (!(beta > 0.0)) throw ConfigError({"beta > 0 violated"});
    const double sum = loop_sum(pair, r_c);
    const double alpha = pair.alpha();
    const double numerator = r_c * r_c * (1.0 - alpha * beta) - alpha * pair.r_high * r_c * (beta - 1.0);
    return noise.thermal_scale(noise.t_eff) * pair.r_high * std::fabs(numerator / (sum * sum));
}

double beta_printed(const ResistorPair& pair, double r_c) {
    check_inputs(pair, r_c);
    return (1.0 + r_c / pair.r_low) / (1.0 + r_c / pair.r_high);
}

double beta_null_closed_form(const ResistorPair& pair, double r_c) {
    check_inputs(pair, r_c);
    return pair.r_high * (r_c + 2.0 * pair.r_low) / (pair.r_low * (r_c + 2.0 * pair.r_high));
}

double beta_null(const ResistorPair& pair, double r_c, NullStatistic statistic) {
    check_inputs(pair, r_c);
    const double candidate = beta_null_closed_form(pair, r_c);
    if (statistic == NullStatistic::msv_difference && r_c == 0.0) return 1.0;

    const NoiseSpec unit = unit_noise();
    auto f = [&](double beta) {
        return statistic == NullStatistic::net_power ? delta_p(pair, r_c, 1.0, beta, unit)
                                                     : delta_msv_two_temp(pair, r_c, 1.0, beta, unit);
    };

    double lo = kBetaLowerBracket;
    double hi = std::max(2.0, 2.0 * candidate);
    // Decreasing in β: positive below the root, negative above.
    if (!(f(lo) > 0.0) || !(f(hi) < 0.0)) throw std::runtime_error("beta_null: root not bracketed");
    while (hi - lo > kBetaTolerance) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double v = f(mid);
        if (v == 0.0) {
            lo = hi = mid;
            break;
        }
        (v > 0.0 ? lo : hi) = mid;
    }
    const double root = 0.5 * (lo + hi);
    if (std::fabs(root - candidate) > 1e-12 * candidate) {
        throw std::runtime_error("beta_null: bisection disagrees with closed form");
    }
    // Both lie within the final bracket; keep whichever leaves the smaller residual.
    return std::fabs(f(candidate)) <= std::fabs(f(root)) ? candidate : root;
}

double equilibrium_msv_diff(const ResistorPair& pair, double r_c, double t, const NoiseSpec& noise) {
    check_inputs(pair, r_c);
    const double s = noise.thermal_scale(t);
    return s * r_c * (pair.r_high - pair.r_low) / loop_sum(pair, r_c);
}

LoopMoments loop_moments(const Arrangement& arr, const NoiseSpec& noise) {
    arr.validate();
    const double sum = arr.loop_sum();
    // Each observable is a linear map of the source EMFs (u_a, u_b, u_w).
    struct Coef {
        double a, b, w;
    };
    const Coef i{1.0 / sum, -1.0 / sum, 1.0 / sum};
    // 1 − r/Σ written as a ratio of sums so the two ends are exact mirrors.
    const Coef uca{(arr.cable.r_c + arr.r_b) / sum, arr.r_a / sum, -arr.r_a / sum};
    const Coef ucb{arr.r_b / sum, (arr.r_a + arr.cable.r_c) / sum, arr.r_b / sum};
    const double va = johnson_msv(arr.r_a, arr.t_a, noise);
    const double vb = johnson_msv(arr.r_b, arr.t_b, noise);
    const double vw = johnson_msv(arr.cable.r_c, arr.cable.temperature, noise);
    auto cov = [&](const Coef& x, const Coef& y) { return x.a * y.a * va + x.b * y.b * vb + x.w * y.w * vw; };

    LoopMoments m;
    m.msv_a = cov(uca, uca);
    m.msv_b = cov(ucb, ucb);
    m.msv_i = cov(i, i);
    m.cov_ab = cov(uca, ucb);
    m.cov_ai = cov(uca, i);
    m.cov_bi = cov(ucb, i);
    return m;
}

double normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double SnrPrediction::success_probability(std::size_t n_samples) const noexcept {
    return normal_cdf(snr * std::sqrt(static_cast<double>(n_samples)));
}

SnrPrediction predict_attack_snr(const ResistorPair& pair, double r_c, double t_h, double t_l, const NoiseSpec& noise,
                                 Attack attack, double cable_temperature) {
    check_inputs(pair, r_c);
    const Arrangement arr{pair.r_high, pair.r_low, Cable{r_c, cable_temperature}, t_h, t_l};
    const LoopMoments m = loop_moments(arr, noise);

    SnrPrediction p;
    double variance = 0.0;
    // With a cold cable the closed forms give the mean without cancellation,
    // so an ideal loop yields exactly zero.
    const bool cold = cable_temperature == 0.0;
    if (attack == Attack::second_law) {
        const double x2 = m.msv_a + m.msv_b + 2.0 * m.cov_ab;
        p.mean = cold ? delta_p(pair, r_c, t_h, t_l, noise) : m.power_stat();
        variance = x2 * m.msv_i + p.mean * p.mean;
    } else {
        p.mean = cold ? delta_msv_two_temp(pair, r_c, t_h, t_l, noise) : m.msv_diff();
        variance = 2.0 * m.msv_a * m.msv_a + 2.0 * m.msv_b * m.msv_b - 4.0 * m.cov_ab * m.cov_ab;
    }
    p.stddev = std::sqrt(std::max(variance, 0.0));
    p.snr = p.stddev > 0.0 ? std::fabs(p.mean) / p.stddev : 0.0;
    return p;
}

AnalyticReport analytic_report(const ResistorPair& pair, const Cable& cable, const NoiseSpec& noise) {
    const double r_c = cable.r_c;
    const double t_h = noise.t_eff;
    const double t_l = noise.beta * noise.t_eff;

    AnalyticReport r;
    r.delta_ks = delta_ks(pair, r_c, noise);
    const auto heat = heating_powers(pair, r_c, noise);
    r.p_hc = heat.p_hc;
    r.p_lc = heat.p_lc;
    const auto flows = power_flows(pair, r_c, t_h, t_l, noise);
    r.p_hl = flows.p_hl;
    r.p_lh = flows.p_lh;
    r.delta_p = delta_p(pair, r_c, t_h, t_l, noise);
    r.delta_p_paper_eq7 = delta_p_printed(pair, r_c, noise);
    r.delta_msv_two_temp = delta_msv_two_temp(pair, r_c, t_h, t_l, noise);
    r.delta_ks_paper_eq12 = delta_ks_offset_printed(pair, r_c, noise.beta, noise);
    r.beta_paper = beta_printed(pair, r_c);
    r.beta_null_power = beta_null(pair, r_c, NullStatistic::net_power);
    r.beta_null_msv = beta_null(pair, r_c, NullStatistic::msv_difference);
    r.snr_second_law = predict_attack_snr(pair, r_c, t_h, t_l, noise, Attack::second_law, cable.temperature).snr;
    r.snr_bsy = predict_attack_snr(pair, r_c, t_h, t_l, noise, Attack::bsy, cable.temperature).snr;
    return r;
}

std::vector<Discrepancy> discrepancies(const AnalyticReport& report) {
    auto make = [](std::string printed_field, std::string derived_field, double printed, double derived) {
        const double scale = std::max(std::fabs(printed), std::fabs(derived));
        const bool agrees = scale == 0.0 || std::fabs(printed - derived) <= 1e-12 * scale;
        return Discrepancy{std::move(printed_field), std::move(derived_field), printed, derived, agrees};
    };
    return {
        make("delta_p_paper_eq7", "delta_p", report.delta_p_paper_eq7, report.delta_p),
        make("delta_ks_paper_eq12", "delta_msv_two_temp", report.delta_ks_paper_eq12,
             std::fabs(report.delta_msv_two_temp)),
    };
}

}  // namespace kljn
