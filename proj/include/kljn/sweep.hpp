#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kljn/core.hpp"
#include "kljn/eavesdropper.hpp"
#include "kljn/protocol.hpp"

namespace kljn {

enum class SweepParameter { r_c, beta, samples_per_bit, bandwidth };

[[nodiscard]] std::string_view to_string(SweepParameter p);
[[nodiscard]] SweepParameter parse_sweep_parameter(std::string_view s);

struct SweepSpec {
    SweepParameter parameter = SweepParameter::r_c;
    std::vector<double> values;
    SessionConfig base;
    std::vector<Attack> attacks{Attack::second_law, Attack::bsy};
};

/// Config for one sweep point. A beta sweep switches the defense to
/// custom-beta with the swept value.
[[nodiscard]] SessionConfig sweep_point_config(const SweepSpec& spec, double value);

/// Throws ConfigError if the values are empty, not strictly increasing, or
/// any substituted config is invalid.
void validate_sweep(const SweepSpec& spec);

struct SweepRow {
    double value = 0.0;
    double delta_ks = 0.0;            // printed leak magnitude at t_eff, cold cable
    double delta_p = 0.0;             // net power, H end minus L end, at the applied temperatures
    /// Mean over secure rounds of the per-round statistics, sign-oriented so
    /// that positive means "the H end"; NaN without secure rounds.
    double measured_msv_diff = 0.0;
    double measured_power_stat = 0.0;
    std::vector<SuccessEstimate> estimates;  // one per requested attack, in request order
};

[[nodiscard]] SweepRow run_sweep_point(const SweepSpec& spec, double value, unsigned session_jobs = 1);

/// Points may run concurrently (up to `jobs`); rows come back in sweep order.
[[nodiscard]] std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned jobs = 1);

[[nodiscard]] std::vector<std::string> sweep_csv_header(const SweepSpec& spec);

void write_sweep_csv(std::ostream& os, const SweepSpec& spec, const std::vector<SweepRow>& rows);

/// Least-squares slope of log(y) against log(x). Requires positive inputs.
[[nodiscard]] double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace kljn
