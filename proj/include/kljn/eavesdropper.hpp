#pragma once

// Eve's passive attacks. Everything here reads only the cable observables
// accumulated in TraceStats; resistor choices enter solely through the
// post-hoc scoring argument of score_round.

#include <cstddef>
#include <cstdint>
#include <span>

#include "kljn/circuit.hpp"
#include "kljn/core.hpp"

namespace kljn {

enum class Guess { a_has_high, b_has_high };

/// ⟨(u_ca + u_cb)·i_c⟩: net power leaving end A minus net power leaving end B.
[[nodiscard]] double second_law_statistic(const TraceStats& stats);

/// ⟨u_ca²⟩ − ⟨u_cb²⟩.
[[nodiscard]] double bsy_statistic(const TraceStats& stats);

[[nodiscard]] double attack_statistic(Attack attack, const TraceStats& stats);

/// Positive statistic: end A holds R_H. Negative: end B does. Exactly zero:
/// fair coin drawn from tie_seed.
[[nodiscard]] Guess attack_guess(double statistic, std::uint64_t tie_seed) noexcept;

struct AttackRecord {
    Attack attack = Attack::second_law;
    std::size_t round_index = 0;
    double statistic = 0.0;
    Guess guess = Guess::a_has_high;
    bool correct = false;
};

/// Eve's guess for one secure round, scored against the harness's ground truth.
[[nodiscard]] AttackRecord score_round(Attack attack, const TraceStats& stats, std::size_t round_index,
                                       std::uint64_t tie_seed, bool alice_has_high);

inline constexpr double kWilsonZ95 = 1.959964;

struct SuccessEstimate {
    Attack attack = Attack::second_law;
    std::size_t n_secure = 0;
    std::size_t n_correct = 0;
    double p_hat = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

/// 95% Wilson score interval for n_correct successes out of n trials (n >= 1).
[[nodiscard]] SuccessEstimate wilson_estimate(Attack attack, std::size_t n_correct, std::size_t n,
                                              double z = kWilsonZ95);

/// Throws std::invalid_argument on empty input or mixed attacks.
[[nodiscard]] SuccessEstimate estimate_success(std::span<const AttackRecord> records);

}  // namespace kljn
