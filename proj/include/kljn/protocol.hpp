#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "kljn/circuit.hpp"
#include "kljn/core.hpp"
#include "kljn/eavesdropper.hpp"

namespace kljn {

enum class Choice { low, high };
enum class Inference { low, high, indeterminate };
enum class LoopClass { ll, mixed, hh };

[[nodiscard]] std::string_view to_string(Choice c);
[[nodiscard]] std::string_view to_string(Inference i);
[[nodiscard]] std::string_view to_string(LoopClass c);

/// Generator temperatures each party applies, computed from its own choice only.
struct TemperatureRule {
    double t_eff = 0.0;
    double beta = 1.0;
    double cable_temperature = 0.0;

    [[nodiscard]] double temperature_for(Choice c) const noexcept { return c == Choice::low ? beta * t_eff : t_eff; }
};

/// Resolves the session's defense mode into a TemperatureRule.
///
/// none / paper-beta / null-beta / custom-beta: the party holding R_H runs at
/// t_eff, the party holding R_L at β·t_eff (β = 1, printed offset, root of the
/// net-power statistic, or the custom value). equilibration: both parties at
/// t_eff and the cable at t_eff. noise.beta must be 1 in every mode except
/// custom-beta; a mismatch is a ConfigError because the modes are exclusive.
[[nodiscard]] TemperatureRule apply_defense(const SessionConfig& cfg);

/// Analytic ⟨I_c²⟩ of the three loop classes and geometric-mean boundaries.
struct Thresholds {
    double level_ll = 0.0;
    double level_mixed = 0.0;
    double level_hh = 0.0;
    double boundary_low = 0.0;   // between LL and MIXED
    double boundary_high = 0.0;  // between MIXED and HH
};

/// Throws ConfigError when the levels are not strictly ordered LL > MIXED > HH.
[[nodiscard]] Thresholds derive_thresholds(const ResistorPair& pair, const Cable& cable, const NoiseSpec& noise,
                                           const TemperatureRule& rule);

[[nodiscard]] LoopClass classify_arrangement(double msv_i, const Thresholds& th) noexcept;

/// What a party learns about the other side from the loop class and its own choice.
[[nodiscard]] Inference infer_other(LoopClass cls, Choice own) noexcept;

struct BitRound {
    std::size_t index = 0;
    Choice alice_choice = Choice::low;
    Choice bob_choice = Choice::low;
    bool secure = false;
    TraceStats stats;
    LoopClass loop_class = LoopClass::mixed;
    Inference alice_inferred_bob = Inference::indeterminate;
    Inference bob_inferred_alice = Inference::indeterminate;
    std::optional<bool> second_law_correct;  // secure rounds only
    std::optional<bool> bsy_correct;         // secure rounds only
};

struct SessionResult {
    std::vector<BitRound> rounds;
    std::size_t secure_rounds = 0;
    double secure_fraction = 0.0;
    /// Key bit of a secure round = Bob's resistor bit (H = 1). Alice's key holds
    /// her inference of it, Bob's key his own choice.
    std::vector<std::uint8_t> alice_key;
    std::vector<std::uint8_t> bob_key;
    /// Secure rounds whose inferred bit differs from Bob's bit (indeterminate
    /// inferences included).
    std::size_t key_mismatches = 0;
    /// Rounds whose loop class disagrees with the true arrangement.
    std::size_t misclassified_rounds = 0;
    std::vector<AttackRecord> second_law_records;
    std::vector<AttackRecord> bsy_records;
    /// One estimate per attack; empty when no round was secure.
    std::vector<SuccessEstimate> attack_results;
    TemperatureRule rule;
    Thresholds thresholds;
};

struct SessionOptions {
    /// Worker threads; 0 selects std::thread::hardware_concurrency().
    unsigned jobs = 0;
};

/// Per-round seed derivation: hash64(session_seed, round, tag) with tags
/// 0 = Alice's noise, 1 = Bob's noise, 2 = cable noise, 4 = Alice's choice,
/// 5 = Bob's choice, 6 = Eve's second-law tie-break, 7 = Eve's BSY tie-break.
enum class RoundSeedTag : std::uint64_t {
    alice_noise = 0,
    bob_noise = 1,
    cable_noise = 2,
    alice_choice = 4,
    bob_choice = 5,
    tie_second_law = 6,
    tie_bsy = 7,
};

[[nodiscard]] std::uint64_t round_seed(std::uint64_t session_seed, std::size_t round, RoundSeedTag tag) noexcept;

/// Simulates one bit exchange; deterministic in (cfg.seed, index).
[[nodiscard]] BitRound run_round(const SessionConfig& cfg, const TemperatureRule& rule, const Thresholds& th,
                                 std::size_t index);

/// Runs cfg.bits rounds. Rounds are independent given their seeds and may run
/// on several threads; the result does not depend on `options.jobs`.
[[nodiscard]] SessionResult run_session(const SessionConfig& cfg, const SessionOptions& options = {});

}  // namespace kljn
