#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace kljn {

/// Boltzmann constant, J/K (exact SI 2019 value).
inline constexpr double kBoltzmann = 1.380649e-23;

/// Unit system of a session. In `normalized` mode the product 4·k·T_eff·Δf is
/// defined to be 1, so a generator at T_eff driving resistance R has a
/// mean-square EMF numerically equal to R.
enum class UnitSystem { si, normalized };

enum class Attack { second_law, bsy };

enum class DefenseMode { none, paper_beta, null_beta, custom_beta, equilibration };

[[nodiscard]] std::string_view to_string(UnitSystem u);
[[nodiscard]] std::string_view to_string(Attack a);
[[nodiscard]] std::string_view to_string(DefenseMode d);

/// Parses "second-law"/"second_law"/"bsy".
[[nodiscard]] Attack parse_attack(std::string_view s);
/// Parses "none", "paper-beta", "null-beta", "custom-beta", "equilibration".
[[nodiscard]] DefenseMode parse_defense(std::string_view s);
[[nodiscard]] UnitSystem parse_units(std::string_view s);

/// The public resistor set {R_L, R_H}.
struct ResistorPair {
    double r_low = 1000.0;
    double r_high = 10000.0;

    [[nodiscard]] double alpha() const noexcept { return r_low / r_high; }

    bool operator==(const ResistorPair&) const = default;
};

/// Lumped cable: one series resistance with an optional Johnson source.
/// temperature == 0 means a noiseless cable.
struct Cable {
    double r_c = 100.0;
    double temperature = 0.0;

    bool operator==(const Cable&) const = default;
};

struct NoiseSpec {
    double t_eff = 1e9;
    /// Multiplier on the temperature of the generator driving the smaller resistor.
    double beta = 1.0;
    double bandwidth = 5000.0;
    int oversample = 1;
    UnitSystem units = UnitSystem::normalized;

    /// 4·k·t·Δf in SI mode, t / t_eff in normalized mode. Multiply by a
    /// resistance to get the mean-square Johnson EMF of that resistor.
    [[nodiscard]] double thermal_scale(double temperature) const noexcept;

    bool operator==(const NoiseSpec&) const = default;
};

struct Defense {
    DefenseMode mode = DefenseMode::none;
    /// Only read in custom_beta mode.
    double custom_beta = 1.0;

    bool operator==(const Defense&) const = default;
};

struct SessionConfig {
    ResistorPair pair;
    Cable cable;
    NoiseSpec noise;
    std::size_t bits = 2000;
    std::size_t samples_per_bit = 10000;
    Defense defense;
    std::uint64_t seed = 0;

    bool operator==(const SessionConfig&) const = default;
};

inline constexpr std::size_t kMinSamplesPerBit = 100;

/// Configuration failure carrying every violated invariant.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(std::vector<std::string> violations);

    [[nodiscard]] const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    std::vector<std::string> violations_;
};

[[nodiscard]] std::vector<std::string> pair_violations(const ResistorPair& pair);
[[nodiscard]] std::vector<std::string> cable_violations(const Cable& cable);
[[nodiscard]] std::vector<std::string> noise_violations(const NoiseSpec& noise);
[[nodiscard]] std::vector<std::string> config_violations(const SessionConfig& cfg);

/// Throws ConfigError listing all violations; returns the config unchanged otherwise.
[[nodiscard]] SessionConfig validate_config(const SessionConfig& cfg);

void validate_pair(const ResistorPair& pair);

/// Shortest round-trip decimal form, '.' separator regardless of locale.
[[nodiscard]] std::string format_double(double x);

}  // namespace kljn
