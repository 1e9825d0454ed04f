// kljn: command-line front end for the KLJN loop laboratory.
//
//   kljn analytic --rl 1000 --rh 10000 --rc 100 [--beta B] [--si]
//   kljn beta     --rl 1000 --rh 10000 --rc 100
//   kljn simulate [--defense none|paper-beta|null-beta|custom-beta|equilibration]
//                 [--bits N] [--samples-per-bit N] [--seed S] [--rounds-csv PATH]
//   kljn sweep    --param r_c|beta|samples_per_bit|bandwidth --values v1,v2,...
//
// Every flag may also be given in a key=value file via --config PATH, using
// the flag name without dashes as key. Flags override file values.
// Exit codes: 0 success, 1 runtime or I/O failure, 2 usage or validation failure.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "kljn/analytic.hpp"
#include "kljn/circuit.hpp"
#include "kljn/core.hpp"
#include "kljn/kernels.hpp"
#include "kljn/protocol.hpp"
#include "kljn/report.hpp"
#include "kljn/sweep.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Flags {
    double rl = 1000.0;
    double rh = 10000.0;
    double rc = 100.0;
    double cable_temperature = 0.0;
    double t_eff = 1e9;
    double beta = 1.0;
    double bandwidth = 5000.0;
    int oversample = 1;
    std::string units = "normalized";
    bool normalized = false;
    bool si = false;
    std::size_t bits = 2000;
    std::size_t samples_per_bit = 10000;
    std::string defense = "none";
    std::uint64_t seed = 0;
    unsigned jobs = 1;
    std::string kernel = "auto";
    std::string rounds_csv;
    std::string trace_dump;
    std::string param = "r_c";
    std::vector<double> values;
    std::vector<std::string> attacks{"second-law", "bsy"};
    std::string output;
};

kljn::SessionConfig to_config(const Flags& f) {
    if (f.normalized && f.si) throw UsageError("--normalized and --si are mutually exclusive");
    kljn::SessionConfig cfg;
    cfg.pair = {f.rl, f.rh};
    cfg.cable = {f.rc, f.cable_temperature};
    cfg.noise.t_eff = f.t_eff;
    cfg.noise.beta = f.beta;
    cfg.noise.bandwidth = f.bandwidth;
    cfg.noise.oversample = f.oversample;
    cfg.noise.units = f.si ? kljn::UnitSystem::si
                           : (f.normalized ? kljn::UnitSystem::normalized : kljn::parse_units(f.units));
    cfg.bits = f.bits;
    cfg.samples_per_bit = f.samples_per_bit;
    cfg.defense.mode = kljn::parse_defense(f.defense);
    cfg.defense.custom_beta = f.beta;
    cfg.seed = f.seed;
    return cfg;
}

void require(const CLI::App& app, std::initializer_list<const char*> names) {
    for (const char* name : names) {
        if (app.get_option(name)->count() == 0) throw UsageError(std::string("missing required flag ") + name);
    }
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    return out;
}

void check_stream(std::ostream& os, const std::string& what) {
    if (!os) throw IoError("write failed: " + what);
}

int cmd_analytic(const CLI::App& app, const Flags& f) {
    require(app, {"--rl", "--rh", "--rc"});
    const auto cfg = to_config(f);
    kljn::validate_pair(cfg.pair);
    if (auto v = kljn::cable_violations(cfg.cable); !v.empty()) throw kljn::ConfigError(std::move(v));
    if (auto v = kljn::noise_violations(cfg.noise); !v.empty()) throw kljn::ConfigError(std::move(v));
    const auto report = kljn::analytic_report(cfg.pair, cfg.cable, cfg.noise);
    std::cout << kljn::to_json(report).dump(2) << '\n';
    return 0;
}

int cmd_beta(const CLI::App& app, const Flags& f) {
    require(app, {"--rl", "--rh", "--rc"});
    const auto cfg = to_config(f);
    kljn::validate_pair(cfg.pair);
    if (auto v = kljn::cable_violations(cfg.cable); !v.empty()) throw kljn::ConfigError(std::move(v));
    const nlohmann::json out = {
        {"beta_paper", kljn::beta_printed(cfg.pair, cfg.cable.r_c)},
        {"beta_null", kljn::beta_null(cfg.pair, cfg.cable.r_c, kljn::NullStatistic::net_power)},
    };
    std::cout << out.dump(2) << '\n';
    return 0;
}

int cmd_simulate(const Flags& f) {
    const auto cfg = kljn::validate_config(to_config(f));
    const auto result = kljn::run_session(cfg, kljn::SessionOptions{f.jobs});
    if (!f.rounds_csv.empty()) {
        auto out = open_output(f.rounds_csv);
        kljn::write_rounds_csv(out, result);
        out.flush();
        check_stream(out, f.rounds_csv);
    }
    if (!f.trace_dump.empty()) {
        // Replays round 0 with sample retention.
        const auto& r0 = result.rounds.front();
        auto r = [&](kljn::Choice c) { return c == kljn::Choice::low ? cfg.pair.r_low : cfg.pair.r_high; };
        const kljn::Arrangement arr{r(r0.alice_choice), r(r0.bob_choice),
                                    kljn::Cable{cfg.cable.r_c, result.rule.cable_temperature},
                                    result.rule.temperature_for(r0.alice_choice),
                                    result.rule.temperature_for(r0.bob_choice)};
        const kljn::SourceSeeds seeds{kljn::round_seed(cfg.seed, 0, kljn::RoundSeedTag::alice_noise),
                                      kljn::round_seed(cfg.seed, 0, kljn::RoundSeedTag::bob_noise),
                                      kljn::round_seed(cfg.seed, 0, kljn::RoundSeedTag::cable_noise)};
        const auto trace =
            kljn::simulate_trace(arr, cfg.noise, cfg.samples_per_bit, seeds, kljn::TraceOptions{1, true});
        auto out = open_output(f.trace_dump);
        kljn::write_trace_dump(out, trace.samples);
        out.flush();
        check_stream(out, f.trace_dump);
    }
    std::cout << kljn::session_summary(cfg, result).dump(2) << '\n';
    return 0;
}

int cmd_sweep(const Flags& f) {
    kljn::SweepSpec spec;
    spec.parameter = kljn::parse_sweep_parameter(f.param);
    spec.values = f.values;
    spec.base = to_config(f);
    spec.attacks.clear();
    for (const auto& a : f.attacks) spec.attacks.push_back(kljn::parse_attack(a));
    kljn::validate_sweep(spec);
    const auto rows = kljn::run_sweep(spec, f.jobs);
    if (f.output.empty()) {
        kljn::write_sweep_csv(std::cout, spec, rows);
    } else {
        auto out = open_output(f.output);
        kljn::write_sweep_csv(out, spec, rows);
        out.flush();
        check_stream(out, f.output);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    std::ios::sync_with_stdio(false);
    CLI::App app{"KLJN key exchange laboratory: analytic oracle, Monte Carlo sessions and attack sweeps", "kljn"};
    app.fallthrough();
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value configuration file (keys are flag names)");

    Flags f;
    app.add_option("--rl", f.rl, "smaller resistance R_L (ohm)");
    app.add_option("--rh", f.rh, "larger resistance R_H (ohm)");
    app.add_option("--rc", f.rc, "cable resistance (ohm)");
    app.add_option("--cable-temperature", f.cable_temperature, "cable noise temperature (K), 0 = noiseless");
    app.add_option("--t-eff", f.t_eff, "effective generator temperature (K)");
    app.add_option("--beta", f.beta, "temperature multiplier of the R_L generator (analytic, custom-beta)");
    app.add_option("--bandwidth", f.bandwidth, "noise bandwidth (Hz)");
    app.add_option("--oversample", f.oversample, "oversampling factor for band-limited noise");
    app.add_option("--units", f.units, "unit system: normalized | si");
    app.add_flag("--normalized", f.normalized, "normalized units (4kT_eff df = 1)");
    app.add_flag("--si", f.si, "SI units");
    app.add_option("--bits", f.bits, "bit rounds per session");
    app.add_option("--samples-per-bit", f.samples_per_bit, "samples per bit round (>= 100)");
    app.add_option("--defense", f.defense, "none | paper-beta | null-beta | custom-beta | equilibration");
    app.add_option("--seed", f.seed, "session seed");
    app.add_option("--jobs", f.jobs, "worker threads");
    app.add_option("--kernel", f.kernel, "kernel set: auto | scalar | avx2");
    app.add_option("--rounds-csv", f.rounds_csv, "simulate: per-round CSV output path");
    app.add_option("--trace-dump", f.trace_dump, "simulate: dump round 0 samples (u_ca,u_cb,i_c) to PATH");
    app.add_option("--param", f.param, "sweep: r_c | beta | samples_per_bit | bandwidth");
    app.add_option("--values", f.values, "sweep: comma-separated strictly increasing values")->delimiter(',');
    app.add_option("--attacks", f.attacks, "sweep: comma-separated attacks (second-law, bsy)")->delimiter(',');
    app.add_option("--output", f.output, "sweep: CSV output path (default stdout)");

    auto* analytic = app.add_subcommand("analytic", "closed-form report as JSON");
    auto* simulate = app.add_subcommand("simulate", "run a Monte Carlo session, JSON summary");
    auto* sweep = app.add_subcommand("sweep", "parameter sweep, CSV");
    auto* beta = app.add_subcommand("beta", "printed and root-found temperature offsets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "kljn: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        kljn::kernels::select(f.kernel);
        if (analytic->parsed()) return cmd_analytic(app, f);
        if (beta->parsed()) return cmd_beta(app, f);
        if (simulate->parsed()) return cmd_simulate(f);
        if (sweep->parsed()) return cmd_sweep(f);
    } catch (const UsageError& e) {
        std::cerr << "kljn: " << e.what() << '\n';
        return kExitUsage;
    } catch (const kljn::ConfigError& e) {
        std::cerr << "kljn: invalid configuration: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "kljn: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "kljn: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitUsage;
}
