#include "kljn/protocol.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "kljn/analytic.hpp"
#include "kljn/noise.hpp"

namespace kljn {

std::string_view to_string(Choice c) { return c == Choice::low ? "L" : "H"; }

std::string_view to_string(Inference i) {
    switch (i) {
        case Inference::low: return "L";
        case Inference::high: return "H";
        case Inference::indeterminate: return "?";
    }
    return "?";
}

std::string_view to_string(LoopClass c) {
    switch (c) {
        case LoopClass::ll: return "LL";
        case LoopClass::mixed: return "MIXED";
        case LoopClass::hh: return "HH";
    }
    return "MIXED";
}

TemperatureRule apply_defense(const SessionConfig& cfg) {
    const SessionConfig valid = validate_config(cfg);
    const DefenseMode mode = valid.defense.mode;
    if (mode != DefenseMode::custom_beta && valid.noise.beta != 1.0) {
        throw ConfigError({"beta = 1 required unless defense is custom-beta (defense " +
                           std::string(to_string(mode)) + ")"});
    }

    TemperatureRule rule;
    rule.t_eff = valid.noise.t_eff;
    rule.cable_temperature = valid.cable.temperature;
    switch (mode) {
        case DefenseMode::none: rule.beta = 1.0; break;
        case DefenseMode::paper_beta: rule.beta = beta_printed(valid.pair, valid.cable.r_c); break;
        case DefenseMode::null_beta: rule.beta = beta_null(valid.pair, valid.cable.r_c, NullStatistic::net_power); break;
        case DefenseMode::custom_beta: rule.beta = valid.defense.custom_beta; break;
        case DefenseMode::equilibration:
            rule.beta = 1.0;
            rule.cable_temperature = valid.noise.t_eff;
            break;
    }
    return rule;
}

Thresholds derive_thresholds(const ResistorPair& pair, const Cable& cable, const NoiseSpec& noise,
                             const TemperatureRule& rule) {
    auto level = [&](Choice a, Choice b) {
        auto r = [&](Choice c) { return c == Choice::low ? pair.r_low : pair.r_high; };
        const Arrangement arr{r(a), r(b), Cable{cable.r_c, rule.cable_temperature}, rule.temperature_for(a),
                              rule.temperature_for(b)};
        return loop_moments(arr, noise).msv_i;
    };
    Thresholds th;
    th.level_ll = level(Choice::low, Choice::low);
    th.level_mixed = level(Choice::high, Choice::low);
    th.level_hh = level(Choice::high, Choice::high);
    if (!(th.level_ll > th.level_mixed && th.level_mixed > th.level_hh)) {
        throw ConfigError({"loop classes indistinguishable: current MSV levels not ordered LL > MIXED > HH"});
    }
    th.boundary_low = std::sqrt(th.level_ll * th.level_mixed);
    th.boundary_high = std::sqrt(th.level_mixed * th.level_hh);
    return th;
}

LoopClass classify_arrangement(double msv_i, const Thresholds& th) noexcept {
    if (msv_i > th.boundary_low) return LoopClass::ll;
    if (msv_i < th.boundary_high) return LoopClass::hh;
    return LoopClass::mixed;
}

Inference infer_other(LoopClass cls, Choice own) noexcept {
    switch (cls) {
        case LoopClass::ll: return own == Choice::low ? Inference::low : Inference::indeterminate;
        case LoopClass::hh: return own == Choice::high ? Inference::high : Inference::indeterminate;
        case LoopClass::mixed: return own == Choice::low ? Inference::high : Inference::low;
    }
    return Inference::indeterminate;
}

std::uint64_t round_seed(std::uint64_t session_seed, std::size_t round, RoundSeedTag tag) noexcept {
    return hash64(session_seed, static_cast<std::uint64_t>(round), static_cast<std::uint64_t>(tag));
}

namespace {

Choice draw_choice(std::uint64_t seed) { return (seed >> 63) != 0 ? Choice::high : Choice::low; }

LoopClass true_class(Choice a, Choice b) {
    if (a != b) return LoopClass::mixed;
    return a == Choice::low ? LoopClass::ll : LoopClass::hh;
}

}  // namespace

BitRound run_round(const SessionConfig& cfg, const TemperatureRule& rule, const Thresholds& th, std::size_t index) {
    const std::uint64_t s = cfg.seed;
    BitRound round;
    round.index = index;
    round.alice_choice = draw_choice(round_seed(s, index, RoundSeedTag::alice_choice));
    round.bob_choice = draw_choice(round_seed(s, index, RoundSeedTag::bob_choice));
    round.secure = round.alice_choice != round.bob_choice;

    auto r = [&](Choice c) { return c == Choice::low ? cfg.pair.r_low : cfg.pair.r_high; };
    const Arrangement arr{r(round.alice_choice), r(round.bob_choice), Cable{cfg.cable.r_c, rule.cable_temperature},
                          rule.temperature_for(round.alice_choice), rule.temperature_for(round.bob_choice)};
    const SourceSeeds seeds{round_seed(s, index, RoundSeedTag::alice_noise),
                            round_seed(s, index, RoundSeedTag::bob_noise),
                            round_seed(s, index, RoundSeedTag::cable_noise)};
    round.stats = simulate_trace(arr, cfg.noise, cfg.samples_per_bit, seeds, TraceOptions{1, false}).stats;

    round.loop_class = classify_arrangement(round.stats.msv_i, th);
    round.alice_inferred_bob = infer_other(round.loop_class, round.alice_choice);
    round.bob_inferred_alice = infer_other(round.loop_class, round.bob_choice);

    if (round.secure) {
        const bool alice_high = round.alice_choice == Choice::high;
        round.second_law_correct =
            score_round(Attack::second_law, round.stats, index, round_seed(s, index, RoundSeedTag::tie_second_law),
                        alice_high)
                .correct;
        round.bsy_correct =
            score_round(Attack::bsy, round.stats, index, round_seed(s, index, RoundSeedTag::tie_bsy), alice_high)
                .correct;
    }
    return round;
}

SessionResult run_session(const SessionConfig& cfg, const SessionOptions& options) {
    const SessionConfig valid = validate_config(cfg);
    SessionResult result;
    result.rule = apply_defense(valid);
    result.thresholds = derive_thresholds(valid.pair, valid.cable, valid.noise, result.rule);
    result.rounds.resize(valid.bits);

    unsigned jobs = options.jobs != 0 ? options.jobs : std::max(1u, std::thread::hardware_concurrency());
    jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, valid.bits));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < valid.bits; i = next.fetch_add(1)) {
            result.rounds[i] = run_round(valid, result.rule, result.thresholds, i);
        }
    };
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(jobs);
        for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    }

    for (const auto& round : result.rounds) {
        if (round.loop_class != true_class(round.alice_choice, round.bob_choice)) ++result.misclassified_rounds;
        if (!round.secure) continue;
        ++result.secure_rounds;
        const std::uint8_t bob_bit = round.bob_choice == Choice::high ? 1 : 0;
        const std::uint8_t alice_bit = round.alice_inferred_bob == Inference::high ? 1 : 0;
        result.alice_key.push_back(alice_bit);
        result.bob_key.push_back(bob_bit);
        const bool agrees = (round.alice_inferred_bob == Inference::high && bob_bit == 1) ||
                            (round.alice_inferred_bob == Inference::low && bob_bit == 0);
        if (!agrees) ++result.key_mismatches;

        const bool alice_high = round.alice_choice == Choice::high;
        result.second_law_records.push_back(score_round(Attack::second_law, round.stats, round.index,
                                                        round_seed(valid.seed, round.index, RoundSeedTag::tie_second_law),
                                                        alice_high));
        result.bsy_records.push_back(score_round(Attack::bsy, round.stats, round.index,
                                                 round_seed(valid.seed, round.index, RoundSeedTag::tie_bsy),
                                                 alice_high));
    }
    result.secure_fraction = static_cast<double>(result.secure_rounds) / static_cast<double>(valid.bits);
    if (result.secure_rounds > 0) {
        result.attack_results.push_back(estimate_success(result.second_law_records));
        result.attack_results.push_back(estimate_success(result.bsy_records));
    }
    return result;
}

}  // namespace kljn
