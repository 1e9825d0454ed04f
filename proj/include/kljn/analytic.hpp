#pragma once

// Closed-form loop quantities. Two-temperature expressions are obtained by
// superposing the independent generator contributions at each cable end;
// they are the reference the simulator is tested against. The formulas as
// originally printed for the net power difference and for the offset MSV
// difference are kept verbatim alongside (see *_printed) so the
// disagreement with the superposition forms stays observable.
//
// Every function takes a NoiseSpec for its unit system: a generator at
// temperature T contributes noise.thermal_scale(T) · R to the mean-square
// EMF (4kTΔf·R in SI units, R·T/t_eff in normalized units).

#include <string>
#include <vector>

#include "kljn/circuit.hpp"
#include "kljn/core.hpp"

namespace kljn {

/// |⟨U_cH²⟩ − ⟨U_cL²⟩| with both generators at t_eff and a cold cable.
[[nodiscard]] double delta_ks(const ResistorPair& pair, double r_c, const NoiseSpec& noise);

struct HeatingPowers {
    double p_hc = 0.0;
    double p_lc = 0.0;
};

/// Cable-heating powers of the H and L generators at t_eff; p_lc = p_hc · α.
[[nodiscard]] HeatingPowers heating_powers(const ResistorPair& pair, double r_c, const NoiseSpec& noise);

struct PowerFlows {
    double p_hl = 0.0;
    double p_lh = 0.0;
};

/// Mean power flowing from the H end toward the L end and vice versa, with
/// the H generator at t_h and the L generator at t_l.
[[nodiscard]] PowerFlows power_flows(const ResistorPair& pair, double r_c, double t_h, double t_l,
                                     const NoiseSpec& noise);

/// Net power flow out of the H end minus out of the L end:
/// [s_h·R_H(R_c+2R_L) − s_l·R_L(R_c+2R_H)] / Σ².
[[nodiscard]] double delta_p(const ResistorPair& pair, double r_c, double t_h, double t_l, const NoiseSpec& noise);

/// Printed companion of delta_p (equal temperatures t_eff): s·R_c(R_H+R_L)/Σ².
[[nodiscard]] double delta_p_printed(const ResistorPair& pair, double r_c, const NoiseSpec& noise);

/// Signed ⟨U_cH²⟩ − ⟨U_cL²⟩ with generators at (t_h, t_l) and a cold cable.
[[nodiscard]] double delta_msv_two_temp(const ResistorPair& pair, double r_c, double t_h, double t_l,
                                        const NoiseSpec& noise);

/// Printed offset form of the MSV difference with the L generator at beta·t_eff:
/// s·R_H·|R_c²(1−αβ) − αR_H·R_c(β−1)| / Σ².
[[nodiscard]] double delta_ks_offset_printed(const ResistorPair& pair, double r_c, double beta,
                                             const NoiseSpec& noise);

/// Printed temperature offset (1 + R_c/R_L) / (1 + R_c/R_H).
[[nodiscard]] double beta_printed(const ResistorPair& pair, double r_c);

enum class NullStatistic { net_power, msv_difference };

/// Root in β of the selected superposition statistic with t_l = β·t_h,
/// found by bisection and cross-checked against beta_null_closed_form.
/// With r_c = 0 the MSV statistic vanishes for every β; 1 is returned.
[[nodiscard]] double beta_null(const ResistorPair& pair, double r_c, NullStatistic statistic);

/// R_H(R_c+2R_L) / (R_L(R_c+2R_H)).
[[nodiscard]] double beta_null_closed_form(const ResistorPair& pair, double r_c);

/// End-MSV difference when both generators and the cable carry Johnson noise
/// at temperature t: s·R_c(R_H−R_L)/Σ.
[[nodiscard]] double equilibrium_msv_diff(const ResistorPair& pair, double r_c, double t, const NoiseSpec& noise);

/// Exact second moments of (u_ca, u_cb, i_c) for an arrangement.
struct LoopMoments {
    double msv_a = 0.0;
    double msv_b = 0.0;
    double msv_i = 0.0;
    double cov_ab = 0.0;
    double cov_ai = 0.0;
    double cov_bi = 0.0;

    [[nodiscard]] double power_stat() const noexcept { return cov_ai + cov_bi; }
    [[nodiscard]] double msv_diff() const noexcept { return msv_a - msv_b; }
};

[[nodiscard]] LoopMoments loop_moments(const Arrangement& arr, const NoiseSpec& noise);

/// Standard normal CDF via std::erfc (absolute error well below 1e-10).
[[nodiscard]] double normal_cdf(double x) noexcept;

struct SnrPrediction {
    double mean = 0.0;    // per-sample statistic mean, oriented with the H generator at end A
    double stddev = 0.0;  // per-sample statistic standard deviation
    double snr = 0.0;     // |mean| / stddev; 0 when both vanish

    /// Probability that the sign of an n-sample average is correct: Φ(snr·√n).
    [[nodiscard]] double success_probability(std::size_t n_samples) const noexcept;
};

/// Per-sample SNR of Eve's statistic, (u_ca+u_cb)·i_c or u_ca²−u_cb², with the
/// variance from the zero-mean Gaussian fourth-moment factorization:
/// var(xy) = ⟨x²⟩⟨y²⟩ + ⟨xy⟩², var(x²−y²) = 2⟨x²⟩² + 2⟨y²⟩² − 4⟨xy⟩².
[[nodiscard]] SnrPrediction predict_attack_snr(const ResistorPair& pair, double r_c, double t_h, double t_l,
                                               const NoiseSpec& noise, Attack attack,
                                               double cable_temperature = 0.0);

struct AnalyticReport {
    double delta_ks = 0.0;
    double p_hc = 0.0;
    double p_lc = 0.0;
    double p_hl = 0.0;
    double p_lh = 0.0;
    double delta_p = 0.0;
    double delta_p_paper_eq7 = 0.0;
    double delta_msv_two_temp = 0.0;
    double delta_ks_paper_eq12 = 0.0;
    double beta_paper = 0.0;
    double beta_null_power = 0.0;
    double beta_null_msv = 0.0;
    double snr_second_law = 0.0;
    double snr_bsy = 0.0;
};

/// All closed-form quantities for one parameter set. The H generator runs at
/// noise.t_eff, the L generator at noise.beta · noise.t_eff.
[[nodiscard]] AnalyticReport analytic_report(const ResistorPair& pair, const Cable& cable, const NoiseSpec& noise);

/// A printed formula and its superposition counterpart.
struct Discrepancy {
    std::string printed_field;
    std::string derived_field;
    double printed = 0.0;
    double derived = 0.0;
    bool agrees = false;  // relative difference <= 1e-12
};

/// The two printed-vs-derived comparisons carried by a report.
[[nodiscard]] std::vector<Discrepancy> discrepancies(const AnalyticReport& report);

}  // namespace kljn
