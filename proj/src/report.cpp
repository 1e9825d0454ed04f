#include "kljn/report.hpp"

#include <ostream>

namespace kljn {

nlohmann::json to_json(const AnalyticReport& r) {
    return {
        {"delta_ks", r.delta_ks},
        {"p_hc", r.p_hc},
        {"p_lc", r.p_lc},
        {"p_hl", r.p_hl},
        {"p_lh", r.p_lh},
        {"delta_p", r.delta_p},
        {"delta_p_paper_eq7", r.delta_p_paper_eq7},
        {"delta_msv_two_temp", r.delta_msv_two_temp},
        {"delta_ks_paper_eq12", r.delta_ks_paper_eq12},
        {"beta_paper", r.beta_paper},
        {"beta_null_power", r.beta_null_power},
        {"beta_null_msv", r.beta_null_msv},
        {"snr_second_law", r.snr_second_law},
        {"snr_bsy", r.snr_bsy},
    };
}

nlohmann::json to_json(const SuccessEstimate& e) {
    return {
        {"attack", std::string(to_string(e.attack))},
        {"n_secure", e.n_secure},
        {"n_correct", e.n_correct},
        {"p_hat", e.p_hat},
        {"ci_low", e.ci_low},
        {"ci_high", e.ci_high},
    };
}

nlohmann::json to_json(const SessionConfig& cfg) {
    nlohmann::json defense = {{"mode", std::string(to_string(cfg.defense.mode))}};
    if (cfg.defense.mode == DefenseMode::custom_beta) defense["beta"] = cfg.defense.custom_beta;
    return {
        {"rl", cfg.pair.r_low},
        {"rh", cfg.pair.r_high},
        {"rc", cfg.cable.r_c},
        {"cable_temperature", cfg.cable.temperature},
        {"t_eff", cfg.noise.t_eff},
        {"beta", cfg.noise.beta},
        {"bandwidth", cfg.noise.bandwidth},
        {"oversample", cfg.noise.oversample},
        {"units", std::string(to_string(cfg.noise.units))},
        {"bits", cfg.bits},
        {"samples_per_bit", cfg.samples_per_bit},
        {"defense", defense},
        {"seed", cfg.seed},
    };
}

nlohmann::json session_summary(const SessionConfig& cfg, const SessionResult& result) {
    nlohmann::json attacks = nlohmann::json::object();
    for (const auto& e : result.attack_results) attacks[std::string(to_string(e.attack))] = to_json(e);
    return {
        {"config", to_json(cfg)},
        {"rounds", result.rounds.size()},
        {"secure_rounds", result.secure_rounds},
        {"secure_fraction", result.secure_fraction},
        {"key_length", result.alice_key.size()},
        {"key_mismatches", result.key_mismatches},
        {"misclassified_rounds", result.misclassified_rounds},
        {"temperatures",
         {{"t_high", result.rule.temperature_for(Choice::high)},
          {"t_low", result.rule.temperature_for(Choice::low)},
          {"beta", result.rule.beta},
          {"cable", result.rule.cable_temperature}}},
        {"attacks", attacks},
    };
}

void write_rounds_csv(std::ostream& os, const SessionResult& result) {
    for (std::size_t c = 0; c < kRoundCsvColumns.size(); ++c) os << (c ? "," : "") << kRoundCsvColumns[c];
    os << '\n';
    auto flag = [](const std::optional<bool>& v) -> std::string_view {
        if (!v) return "";
        return *v ? "1" : "0";
    };
    for (const auto& r : result.rounds) {
        os << r.index << ',' << to_string(r.alice_choice) << ',' << to_string(r.bob_choice) << ','
           << (r.secure ? 1 : 0) << ',' << format_double(r.stats.msv_a) << ',' << format_double(r.stats.msv_b)
           << ',' << format_double(r.stats.msv_i) << ',' << format_double(r.stats.power_stat) << ','
           << format_double(r.stats.msv_diff) << ',' << flag(r.second_law_correct) << ',' << flag(r.bsy_correct)
           << '\n';
    }
}

}  // namespace kljn
