#include "kljn/sweep.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <ostream>
#include <thread>

#include "kljn/analytic.hpp"

namespace kljn {

std::string_view to_string(SweepParameter p) {
    switch (p) {
        case SweepParameter::r_c: return "r_c";
        case SweepParameter::beta: return "beta";
        case SweepParameter::samples_per_bit: return "samples_per_bit";
        case SweepParameter::bandwidth: return "bandwidth";
    }
    return "r_c";
}

SweepParameter parse_sweep_parameter(std::string_view s) {
    for (auto p : {SweepParameter::r_c, SweepParameter::beta, SweepParameter::samples_per_bit,
                   SweepParameter::bandwidth}) {
        if (s == to_string(p)) return p;
    }
    if (s == "rc") return SweepParameter::r_c;
    if (s == "samples-per-bit") return SweepParameter::samples_per_bit;
    throw std::invalid_argument("unknown sweep parameter '" + std::string(s) + "'");
}

SessionConfig sweep_point_config(const SweepSpec& spec, double value) {
    SessionConfig cfg = spec.base;
    switch (spec.parameter) {
        case SweepParameter::r_c: cfg.cable.r_c = value; break;
        case SweepParameter::beta:
            cfg.defense = Defense{DefenseMode::custom_beta, value};
            cfg.noise.beta = value;
            break;
        case SweepParameter::samples_per_bit: cfg.samples_per_bit = static_cast<std::size_t>(value); break;
        case SweepParameter::bandwidth: cfg.noise.bandwidth = value; break;
    }
    return cfg;
}

void validate_sweep(const SweepSpec& spec) {
    std::vector<std::string> v;
    if (spec.values.empty()) v.emplace_back("sweep values must be non-empty");
    if (spec.attacks.empty()) v.emplace_back("sweep attacks must be non-empty");
    for (std::size_t i = 1; i < spec.values.size(); ++i) {
        if (!(spec.values[i] > spec.values[i - 1])) {
            v.emplace_back("sweep values must be strictly increasing");
            break;
        }
    }
    for (double value : spec.values) {
        if (spec.parameter == SweepParameter::samples_per_bit &&
            (!(value >= 0.0) || value != std::floor(value))) {
            v.emplace_back("samples_per_bit sweep values must be integers (got " + format_double(value) + ")");
            continue;
        }
        for (auto& msg : config_violations(sweep_point_config(spec, value))) {
            v.push_back(msg + " at sweep value " + format_double(value));
        }
    }
    if (!v.empty()) throw ConfigError(std::move(v));
}

SweepRow run_sweep_point(const SweepSpec& spec, double value, unsigned session_jobs) {
    const SessionConfig cfg = sweep_point_config(spec, value);
    const SessionResult session = run_session(cfg, SessionOptions{session_jobs});
    const double t_h = session.rule.t_eff;
    const double t_l = session.rule.beta * session.rule.t_eff;

    SweepRow row;
    row.value = value;
    row.delta_ks = delta_ks(cfg.pair, cfg.cable.r_c, cfg.noise);
    if (session.rule.cable_temperature == 0.0) {
        row.delta_p = delta_p(cfg.pair, cfg.cable.r_c, t_h, t_l, cfg.noise);
    } else {
        // Noisy cable: no closed form here, use the exact moments of the H-at-A arrangement.
        const Arrangement arr{cfg.pair.r_high, cfg.pair.r_low, Cable{cfg.cable.r_c, session.rule.cable_temperature},
                              t_h, t_l};
        row.delta_p = loop_moments(arr, cfg.noise).power_stat();
    }

    double sum_msv = 0.0;
    double sum_power = 0.0;
    for (const auto& r : session.rounds) {
        if (!r.secure) continue;
        const double orient = r.alice_choice == Choice::high ? 1.0 : -1.0;
        sum_msv += orient * r.stats.msv_diff;
        sum_power += orient * r.stats.power_stat;
    }
    const double n = static_cast<double>(session.secure_rounds);
    row.measured_msv_diff = n > 0 ? sum_msv / n : std::numeric_limits<double>::quiet_NaN();
    row.measured_power_stat = n > 0 ? sum_power / n : std::numeric_limits<double>::quiet_NaN();

    for (Attack a : spec.attacks) {
        for (const auto& e : session.attack_results) {
            if (e.attack == a) row.estimates.push_back(e);
        }
    }
    return row;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned jobs) {
    validate_sweep(spec);
    std::vector<SweepRow> rows(spec.values.size());
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(spec.values.size())));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < rows.size(); i = next.fetch_add(1)) {
            rows[i] = run_sweep_point(spec, spec.values[i], 1);
        }
    };
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    }
    return rows;
}

std::vector<std::string> sweep_csv_header(const SweepSpec& spec) {
    std::vector<std::string> h{"value", "delta_ks", "delta_p", "measured_msv_diff", "measured_power_stat"};
    for (Attack a : spec.attacks) {
        const std::string name(to_string(a));
        h.push_back("p_hat_" + name);
        h.push_back("ci_low_" + name);
        h.push_back("ci_high_" + name);
    }
    return h;
}

void write_sweep_csv(std::ostream& os, const SweepSpec& spec, const std::vector<SweepRow>& rows) {
    const auto header = sweep_csv_header(spec);
    for (std::size_t c = 0; c < header.size(); ++c) os << (c ? "," : "") << header[c];
    os << '\n';
    for (const auto& row : rows) {
        os << format_double(row.value) << ',' << format_double(row.delta_ks) << ',' << format_double(row.delta_p)
           << ',' << format_double(row.measured_msv_diff) << ',' << format_double(row.measured_power_stat);
        for (std::size_t k = 0; k < spec.attacks.size(); ++k) {
            if (k < row.estimates.size()) {
                const auto& e = row.estimates[k];
                os << ',' << format_double(e.p_hat) << ',' << format_double(e.ci_low) << ','
                   << format_double(e.ci_high);
            } else {
                os << ",,,";
            }
        }
        os << '\n';
    }
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need >= 2 paired points");
    double mx = 0.0, my = 0.0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::invalid_argument("loglog_slope: inputs must be positive");
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

}  // namespace kljn
