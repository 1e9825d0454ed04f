#include "kljn/core.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace kljn {

namespace {

std::string join_violations(const std::vector<std::string>& v) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i != 0) os << "; ";
        os << v[i];
    }
    return os.str();
}

bool positive(double x) { return std::isfinite(x) && x > 0.0; }
bool non_negative(double x) { return std::isfinite(x) && x >= 0.0; }

}  // namespace

std::string_view to_string(UnitSystem u) {
    return u == UnitSystem::si ? "si" : "normalized";
}

std::string_view to_string(Attack a) {
    return a == Attack::second_law ? "second_law" : "bsy";
}

std::string_view to_string(DefenseMode d) {
    switch (d) {
        case DefenseMode::none: return "none";
        case DefenseMode::paper_beta: return "paper-beta";
        case DefenseMode::null_beta: return "null-beta";
        case DefenseMode::custom_beta: return "custom-beta";
        case DefenseMode::equilibration: return "equilibration";
    }
    return "none";
}

Attack parse_attack(std::string_view s) {
    if (s == "second-law" || s == "second_law") return Attack::second_law;
    if (s == "bsy") return Attack::bsy;
    throw std::invalid_argument("unknown attack '" + std::string(s) + "'");
}

DefenseMode parse_defense(std::string_view s) {
    for (auto d : {DefenseMode::none, DefenseMode::paper_beta, DefenseMode::null_beta,
                   DefenseMode::custom_beta, DefenseMode::equilibration}) {
        if (s == to_string(d)) return d;
    }
    throw std::invalid_argument("unknown defense '" + std::string(s) + "'");
}

UnitSystem parse_units(std::string_view s) {
    if (s == "si") return UnitSystem::si;
    if (s == "normalized") return UnitSystem::normalized;
    throw std::invalid_argument("unknown unit system '" + std::string(s) + "'");
}

double NoiseSpec::thermal_scale(double temperature) const noexcept {
    if (units == UnitSystem::normalized) return temperature / t_eff;
    return 4.0 * kBoltzmann * temperature * bandwidth;
}

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::invalid_argument(join_violations(violations)), violations_(std::move(violations)) {}

std::vector<std::string> pair_violations(const ResistorPair& pair) {
    std::vector<std::string> out;
    if (!positive(pair.r_low)) out.emplace_back("r_low > 0 violated");
    if (!positive(pair.r_high)) out.emplace_back("r_high > 0 violated");
    if (!(pair.r_low < pair.r_high)) out.emplace_back("r_low < r_high violated");
    return out;
}

std::vector<std::string> cable_violations(const Cable& cable) {
    std::vector<std::string> out;
    if (!non_negative(cable.r_c)) out.emplace_back("r_c >= 0 violated");
    if (!non_negative(cable.temperature)) out.emplace_back("cable_temperature >= 0 violated");
    return out;
}

std::vector<std::string> noise_violations(const NoiseSpec& noise) {
    std::vector<std::string> out;
    if (!positive(noise.t_eff)) out.emplace_back("t_eff > 0 violated");
    if (!positive(noise.beta)) out.emplace_back("beta > 0 violated");
    if (!positive(noise.bandwidth)) out.emplace_back("bandwidth > 0 violated");
    if (noise.oversample < 1) out.emplace_back("oversample >= 1 violated");
    return out;
}

std::vector<std::string> config_violations(const SessionConfig& cfg) {
    std::vector<std::string> out = pair_violations(cfg.pair);
    auto cable = cable_violations(cfg.cable);
    out.insert(out.end(), cable.begin(), cable.end());
    auto noise = noise_violations(cfg.noise);
    out.insert(out.end(), noise.begin(), noise.end());
    if (cfg.bits < 1) out.emplace_back("bits >= 1 violated");
    if (cfg.samples_per_bit < kMinSamplesPerBit) out.emplace_back("samples_per_bit >= 100 violated");
    if (cfg.defense.mode == DefenseMode::custom_beta && !positive(cfg.defense.custom_beta)) {
        out.emplace_back("custom beta > 0 violated");
    }
    return out;
}

SessionConfig validate_config(const SessionConfig& cfg) {
    auto v = config_violations(cfg);
    if (!v.empty()) throw ConfigError(std::move(v));
    return cfg;
}

void validate_pair(const ResistorPair& pair) {
    auto v = pair_violations(pair);
    if (!v.empty()) throw ConfigError(std::move(v));
}

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

}  // namespace kljn
