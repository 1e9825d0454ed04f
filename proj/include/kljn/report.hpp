#pragma once

#include <array>
#include <iosfwd>
#include <string_view>

#include <json.hpp>

#include "kljn/analytic.hpp"
#include "kljn/core.hpp"
#include "kljn/eavesdropper.hpp"
#include "kljn/protocol.hpp"

namespace kljn {

/// Flat object, one key per AnalyticReport field.
[[nodiscard]] nlohmann::json to_json(const AnalyticReport& report);

[[nodiscard]] nlohmann::json to_json(const SuccessEstimate& estimate);

[[nodiscard]] nlohmann::json to_json(const SessionConfig& cfg);

/// Session summary: config echo, secure_fraction, key statistics, applied
/// temperature rule, and per-attack estimates under "attacks".
[[nodiscard]] nlohmann::json session_summary(const SessionConfig& cfg, const SessionResult& result);

inline constexpr std::array<std::string_view, 11> kRoundCsvColumns = {
    "index",  "alice_choice", "bob_choice", "secure",           "msv_a",           "msv_b",
    "msv_i",  "power_stat",   "msv_diff",   "sl_guess_correct", "bsy_guess_correct"};

/// Per-round CSV. Boolean columns are 0/1; guess columns are empty for
/// non-secure rounds.
void write_rounds_csv(std::ostream& os, const SessionResult& result);

}  // namespace kljn
