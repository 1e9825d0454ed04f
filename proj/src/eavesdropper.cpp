#include "kljn/eavesdropper.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kljn/noise.hpp"

namespace kljn {

double second_law_statistic(const TraceStats& stats) {
    if (stats.n < 1) throw EmptyTraceError();
    return stats.power_stat;
}

double bsy_statistic(const TraceStats& stats) {
    if (stats.n < 1) throw EmptyTraceError();
    return stats.msv_diff;
}

double attack_statistic(Attack attack, const TraceStats& stats) {
    return attack == Attack::second_law ? second_law_statistic(stats) : bsy_statistic(stats);
}

Guess attack_guess(double statistic, std::uint64_t tie_seed) noexcept {
    if (statistic > 0.0) return Guess::a_has_high;
    if (statistic < 0.0) return Guess::b_has_high;
    return (splitmix64(tie_seed) >> 63) != 0 ? Guess::a_has_high : Guess::b_has_high;
}

AttackRecord score_round(Attack attack, const TraceStats& stats, std::size_t round_index, std::uint64_t tie_seed,
                         bool alice_has_high) {
    AttackRecord r;
    r.attack = attack;
    r.round_index = round_index;
    r.statistic = attack_statistic(attack, stats);
    r.guess = attack_guess(r.statistic, tie_seed);
    r.correct = (r.guess == Guess::a_has_high) == alice_has_high;
    return r;
}

SuccessEstimate wilson_estimate(Attack attack, std::size_t n_correct, std::size_t n, double z) {
    if (n == 0) throw std::invalid_argument("wilson_estimate: no trials");
    if (n_correct > n) throw std::invalid_argument("wilson_estimate: more successes than trials");
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(n_correct) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double centre = (p + z2 / (2.0 * nn)) / denom;
    const double half = z / denom * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));

    SuccessEstimate e;
    e.attack = attack;
    e.n_secure = n;
    e.n_correct = n_correct;
    e.p_hat = p;
    e.ci_low = std::clamp(std::min(centre - half, p), 0.0, 1.0);
    e.ci_high = std::clamp(std::max(centre + half, p), 0.0, 1.0);
    return e;
}

SuccessEstimate estimate_success(std::span<const AttackRecord> records) {
    if (records.empty()) throw std::invalid_argument("estimate_success: no records");
    const Attack attack = records.front().attack;
    std::size_t correct = 0;
    for (const auto& r : records) {
        if (r.attack != attack) throw std::invalid_argument("estimate_success: records mix attacks");
        if (r.correct) ++correct;
    }
    return wilson_estimate(attack, correct, records.size());
}

}  // namespace kljn
